//! The Gerstenhaber algebra on Hochschild cochains: cup product, circle
//! product, the bracket, and the chain-level contraction and Lie
//! operators.

use ncalc::hochschild::{
    chain_basis, chain_differential, chain_lie, circle_product, cochain_differential, cup,
    gerstenhaber_bracket, multiplication_cochain, Bimodule, Chain, Cochain,
};
use ncalc::scalar::rat;
use num_traits::One;
use ncalc::scalar::Rational;
use ncalc::structure::dual_numbers_algebra;

fn main() {
    let a = dual_numbers_algebra();
    let m = Bimodule::regular(&a);
    let mc = multiplication_cochain(&a);

    // associativity of A is exactly m o m = 0
    assert!(circle_product(&a, &mc, &mc).unwrap().is_zero());
    println!("m o m = 0 (associativity of the multiplication)");

    // a 1-cochain: the Euler derivation x -> x
    let mut f = Cochain::zero(1, a.dim);
    f.set(vec![1], a.basis_vec(1));
    assert!(cochain_differential(&a, &m, &f).is_zero());
    println!("the Euler derivation is a 1-cocycle");

    // cup Leibniz: d(f u g) = df u g + (-1)^p f u dg
    let mut g = Cochain::zero(1, a.dim);
    g.set(vec![1], a.basis_vec(0));
    let lhs = cochain_differential(&a, &m, &cup(&a, &f, &g).unwrap());
    let rhs = cup(&a, &cochain_differential(&a, &m, &f), &g)
        .unwrap()
        .sub(&cup(&a, &f, &cochain_differential(&a, &m, &g)).unwrap());
    assert_eq!(lhs, rhs);
    println!("cup Leibniz rule: verified");

    // graded antisymmetry of the bracket
    let mut h = Cochain::zero(2, a.dim);
    h.set(vec![1, 1], a.basis_vec(0));
    let fh = gerstenhaber_bracket(&a, &f, &h).unwrap();
    let hf = gerstenhaber_bracket(&a, &h, &f).unwrap();
    assert_eq!(fh, hf.scale(&rat(-1)));
    println!("{{f, h}} = -{{h, f}} for deg f = 1, deg h = 2");

    // L_m is exactly the Hochschild chain differential
    for p in 1..=3usize {
        for key in chain_basis(&m, p, true) {
            let mut ch = Chain::zero(p);
            ch.add_term(key, Rational::one());
            assert_eq!(
                chain_lie(&a, &mc, &ch).unwrap(),
                chain_differential(&a, &m, &ch, true)
            );
        }
    }
    println!("L_m = b on all basis chains through degree 3");
}

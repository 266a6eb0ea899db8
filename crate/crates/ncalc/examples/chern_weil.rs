//! Chern-Weil theory, commutative and noncommutative: the Weil algebra
//! of sl2, Chern-Simons transgression, and the Gelfand-Smirnov bracket
//! on cyclic classes of W_nc.

use ncalc::chern_weil::{
    chern_simons_class, gs_bracket, gs_chern, gs_d, gs_transgression, weil_cartan,
    weil_cohomology, wnc_cohomology, GSElement,
};
use ncalc::scalar::{rat, Rational};
use num_traits::One;
use ncalc::structure::{ground_field, sl2, split_semisimple};

fn main() {
    // the commutative Weil algebra W(sl2) is acyclic
    let g = sl2();
    println!("H(W(sl2)) dims 0..4: {:?}", weil_cohomology(&g, 4).unwrap());
    let x = vec![rat(1), rat(0), rat(2)];
    let u = ncalc::chern_weil::WeilElement::ext_gen(3, 0)
        .mul(&ncalc::chern_weil::WeilElement::sym_gen(3, 1))
        .unwrap();
    let rep = weil_cartan(&g, &x, &u).unwrap();
    println!("Cartan formula L = i d + d i on a sample: {}", rep.agree);

    // W_nc Poincare lemma
    for (name, a) in [("k", ground_field()), ("k x k", split_semisimple(2))] {
        let dims = wnc_cohomology(&a, 4, 100_000).unwrap();
        println!("H(W_nc({})) dims 0..4: {:?}", name, dims);
    }

    // Chern classes in the cyclic quotient: closed and Poisson-central
    for k in 1..=3usize {
        assert!(gs_d(&gs_chern(k, 1)).is_zero());
        for l in 1..=3usize {
            assert!(gs_bracket(&gs_chern(k, 1), &gs_chern(l, 1)).unwrap().is_zero());
        }
    }
    println!("d ch_k = 0 and {{ch_k, ch_l}} = 0 for k, l <= 3");

    // the differential is a Hamiltonian flow for the Gelfand-Smirnov bracket
    let mut bsq = GSElement::zero(1);
    bsq.add_word(vec![(0, true), (0, true)], Rational::one());
    let p = GSElement::class_of(1, vec![(0, false), (0, true)]);
    assert_eq!(
        gs_d(&p),
        gs_bracket(&bsq, &p).unwrap().scale(&(rat(1) / rat(2)))
    );
    println!("dP = (1/2){{b^2, P}}: verified on ab");

    // transgression: d ch^1_k = ch_k, and the Chern-Simons normalization
    for k in 1..=3usize {
        assert_eq!(gs_d(&gs_transgression(k).unwrap()), gs_chern(k, 1));
    }
    println!("d ch^1_k = ch_k for k <= 3");
    println!("cs_3 = {}", chern_simons_class(2).unwrap().display());
}

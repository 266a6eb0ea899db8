//! The Moyal-Weyl star product: deformation of the polynomial product,
//! the Weyl algebra, PBW symmetrization, and the classical limit.

use ncalc::multipoly::MultiPoly;
use ncalc::scalar::{rat, TPoly};
use ncalc::star::{
    canonical_bracket, moyal_star, pbw_symmetrize, phase_display, phase_x, phase_y,
    poisson_leading_term, weyl_mul,
};

fn main() {
    let x = phase_x(0, 1);
    let y = phase_y(0, 1);

    // x * y = xy + t/2 and the canonical commutation relation
    println!("x * y      = {}", phase_display(&moyal_star(&x, &y).unwrap()));
    let comm = moyal_star(&x, &y)
        .unwrap()
        .sub(&moyal_star(&y, &x).unwrap())
        .unwrap();
    println!("x*y - y*x  = {}", phase_display(&comm));

    // higher example: x^2 * y^2
    let x2 = x.mul(&x).unwrap();
    let y2 = y.mul(&y).unwrap();
    println!("x^2 * y^2  = {}", phase_display(&moyal_star(&x2, &y2).unwrap()));

    // associativity on a sample triple
    let f = x2.add(&y).unwrap();
    let lhs = moyal_star(&moyal_star(&f, &y2).unwrap(), &x).unwrap();
    let rhs = moyal_star(&f, &moyal_star(&y2, &x).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    println!("(f*g)*h = f*(g*h): verified on a sample");

    // PBW symmetrization intertwines the star product with the Weyl algebra
    let sf = pbw_symmetrize(&x2).unwrap();
    let sg = pbw_symmetrize(&y2).unwrap();
    assert_eq!(
        weyl_mul(&sf, &sg).unwrap(),
        pbw_symmetrize(&moyal_star(&x2, &y2).unwrap()).unwrap()
    );
    println!("sigma(f) sigma(g) = sigma(f * g): verified");

    // the leading term of the commutator is the Poisson bracket
    let mut g = MultiPoly::zero(2);
    g.add_term(vec![1, 2], TPoly::constant(rat(3))); // 3 x y^2
    let lead = poisson_leading_term(moyal_star, &x2, &g).unwrap();
    assert_eq!(lead, canonical_bracket(&x2, &g).unwrap());
    println!("{{x^2, 3xy^2}} = {}", phase_display(&lead));
}

//! The necklace Lie algebra: cyclic words of a free symplectic algebra
//! with the bracket given by cyclic derivatives, and its Hamiltonian
//! derivations.

use ncalc::cyclic::{
    cyclic_derivative, derivation_bracket, hamiltonian_field, necklace_bracket, project_cyclic,
    SymplecticLayout,
};
use ncalc::scalar::rat;
use ncalc::word::{FreePoly, Word};

fn main() {
    let layout = SymplecticLayout::new(1);
    let g = layout.generator_count();

    // cyclic projection kills commutators
    let x = FreePoly::gen(layout.x(0), g);
    let y = FreePoly::gen(layout.y(0), g);
    let comm = x.commutator(&y).unwrap();
    assert!(project_cyclic(&comm).is_zero());
    println!("cyc([x, y]) = 0");

    // cyclic derivative of a necklace
    let mut p = FreePoly::zero(g);
    p.add_term(Word(vec![0, 0, 1]), rat(1)); // x x y
    let f = project_cyclic(&p);
    println!("f = {}", f);
    println!("df/dx = {}", cyclic_derivative(&f, 0).unwrap());
    println!("df/dy = {}", cyclic_derivative(&f, 1).unwrap());

    // {x^2, y^2} = 4 cyc(xy)
    let x2 = project_cyclic(&x.mul(&x).unwrap());
    let y2 = project_cyclic(&y.mul(&y).unwrap());
    println!("{{x^2, y^2}} = {}", necklace_bracket(&x2, &y2, &layout).unwrap());

    // Hamiltonian derivation of f and the Lie homomorphism property
    let mut q = FreePoly::zero(g);
    q.add_term(Word(vec![0, 1, 1]), rat(1));
    q.add_term(Word(vec![1]), rat(2));
    let gn = project_cyclic(&q);
    let theta_f = hamiltonian_field(&f, &layout).unwrap();
    println!("theta_f(x) = {}", theta_f[0]);
    println!("theta_f(y) = {}", theta_f[1]);
    let lhs = hamiltonian_field(&necklace_bracket(&f, &gn, &layout).unwrap(), &layout).unwrap();
    let rhs = derivation_bracket(
        &hamiltonian_field(&f, &layout).unwrap(),
        &hamiltonian_field(&gn, &layout).unwrap(),
    )
    .unwrap();
    assert_eq!(lhs, rhs);
    println!("theta_{{f,g}} = [theta_f, theta_g]: verified");
}

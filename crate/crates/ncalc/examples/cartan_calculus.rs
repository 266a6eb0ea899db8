//! Contraction, Lie derivative, and the Cartan calculus on
//! noncommutative forms over a free algebra.

use std::rc::Rc;

use ncalc::based::{Atom, BasedAlgebra};
use ncalc::forms::{contraction_i, de_rham_d, lie_derivative, DerivationSpec, NCForm};
use ncalc::scalar::rat;
use ncalc::word::{FreePoly, Word};

fn main() {
    let alg = Rc::new(BasedAlgebra::free(2));
    let x = Atom::W(Word(vec![0]));
    let y = Atom::W(Word(vec![1]));

    // the Euler derivation measures weight: L_eu(x dy) = 2 x dy
    let eu = DerivationSpec::euler(2);
    let mut xdy = NCForm::zero(alg.clone(), 1);
    xdy.add_term(vec![x.clone(), y.clone()], rat(1));
    assert_eq!(lie_derivative(&eu, &xdy).unwrap(), xdy.scale(&rat(2)));
    println!("L_euler(x dy) = 2 x dy");

    // contraction against a general derivation theta: x -> y, y -> x^2
    let theta = DerivationSpec::free(vec![
        FreePoly::gen(1, 2),
        FreePoly::from_word(Word(vec![0, 0]), 2),
    ])
    .unwrap();
    println!("i_theta(x dy) = {}", contraction_i(&theta, &xdy).unwrap());

    // Cartan homotopy formula L = i d + d i
    let mut f = NCForm::zero(alg.clone(), 2);
    f.add_term(vec![alg.unit_atom(), x.clone(), y.clone()], rat(1));
    f.add_term(vec![y.clone(), y.clone(), x.clone()], rat(-3));
    let lhs = contraction_i(&theta, &de_rham_d(&f))
        .unwrap()
        .add(&de_rham_d(&contraction_i(&theta, &f).unwrap()))
        .unwrap();
    assert_eq!(lhs, lie_derivative(&theta, &f).unwrap());
    println!("L_theta = i_theta d + d i_theta: verified");

    // bracket compatibility: [L_theta, i_gamma] = i_[theta, gamma]
    let gamma = DerivationSpec::euler(2);
    let br = theta.bracket(&gamma, &alg).unwrap();
    let lhs = lie_derivative(&theta, &contraction_i(&gamma, &f).unwrap())
        .unwrap()
        .sub(&contraction_i(&gamma, &lie_derivative(&theta, &f).unwrap()).unwrap())
        .unwrap();
    assert_eq!(lhs, contraction_i(&br, &f).unwrap());
    println!("[L_theta, i_gamma] = i_[theta, gamma]: verified");
}

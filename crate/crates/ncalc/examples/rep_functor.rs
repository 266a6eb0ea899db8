//! The representation functor: evaluating free-algebra elements on
//! generic n x n matrices, trace functions, induced vector fields, and
//! the noncommutative chain rule.

use ncalc::forms::DerivationSpec;
use ncalc::rep::{
    apply_vector_field, derivation_to_vector_field, jacobi_compose, jacobi_differential_check,
    jacobi_matrix, rep_evaluate, schouten_bracket, substitute, trace_function, RepVars,
};
use ncalc::word::{FreePoly, Word};

fn main() {
    let g = 2;
    let x = FreePoly::gen(0, g);
    let y = FreePoly::gen(1, g);
    let names = RepVars::new(g, 2).unwrap().names();

    // the trace of xy on generic 2x2 matrices
    let tr = trace_function(&x.mul(&y).unwrap(), 2).unwrap();
    println!("tr(XY) = {}", tr.display(&names));

    // traces kill commutators
    assert!(trace_function(&x.commutator(&y).unwrap(), 2).unwrap().is_zero());
    println!("tr[X, Y] = 0");

    // multiplicativity of the evaluation
    let a = x.mul(&y).unwrap().add(&y).unwrap();
    let b = y.mul(&x).unwrap();
    assert_eq!(
        rep_evaluate(&a.mul(&b).unwrap(), 2).unwrap(),
        rep_evaluate(&a, 2).unwrap().mul(&rep_evaluate(&b, 2).unwrap()).unwrap()
    );
    println!("rep(ab) = rep(a) rep(b): verified");

    // a derivation of the free algebra induces a vector field on Rep_n
    let theta = DerivationSpec::free(vec![y.clone(), x.mul(&x).unwrap()]).unwrap();
    let v = derivation_to_vector_field(&theta, 2).unwrap();
    let moved = apply_vector_field(&v, &tr).unwrap();
    println!("theta-hat applied to tr(XY) = {}", moved.display(&names));

    // hat is a Lie algebra homomorphism
    let delta = DerivationSpec::free(vec![x.clone(), y.clone()]).unwrap();
    let alg = ncalc::based::BasedAlgebra::free(g);
    assert_eq!(
        schouten_bracket(
            &derivation_to_vector_field(&theta, 2).unwrap(),
            &derivation_to_vector_field(&delta, 2).unwrap()
        )
        .unwrap(),
        derivation_to_vector_field(&theta.bracket(&delta, &alg).unwrap(), 2).unwrap()
    );
    println!("[theta-hat, delta-hat] = hat of [theta, delta]: verified");

    // chain rule for the Jacobi matrix of double derivations
    let f = vec![x.mul(&x).unwrap(), y.clone()];
    let h = vec![y.clone(), x.add(&y).unwrap()];
    let composite = jacobi_compose(&jacobi_matrix(&h).unwrap(), &jacobi_matrix(&f).unwrap(), &f)
        .unwrap();
    let direct = jacobi_matrix(&[
        substitute(&h[0], &f).unwrap(),
        substitute(&h[1], &f).unwrap(),
    ])
    .unwrap();
    assert_eq!(composite, direct);
    println!("D(G o F) = DG o DF: verified");

    // the Jacobi matrix agrees with the dual-number differential
    let rep = jacobi_differential_check(&f, 2).unwrap();
    println!("dual-number differential agrees: {}", rep.agrees);

    let _ = Word::empty();
}

//! The Karoubi operator kappa on noncommutative forms: the homotopy
//! db + bd = id - kappa and the polynomial identities it satisfies.

use std::rc::Rc;

use ncalc::based::{Atom, BasedAlgebra};
use ncalc::forms::{de_rham_d, hochschild_b, karoubi, NCForm};
use ncalc::scalar::rat;
use ncalc::word::Word;

fn pow(f: &NCForm, k: usize) -> NCForm {
    let mut out = f.clone();
    for _ in 0..k {
        out = karoubi(&out).unwrap();
    }
    out
}

fn main() {
    let alg = Rc::new(BasedAlgebra::free(2));
    let x = Atom::W(Word(vec![0]));
    let y = Atom::W(Word(vec![1]));

    let mut f = NCForm::zero(alg.clone(), 2);
    f.add_term(vec![y.clone(), x.clone(), y.clone()], rat(1));
    f.add_term(vec![alg.unit_atom(), Atom::W(Word(vec![0, 1])), x], rat(5));
    let n = f.degree;
    println!("f = {}", f);
    println!("kappa f = {}", karoubi(&f).unwrap());

    // db + bd = id - kappa
    let homotopy = de_rham_d(&hochschild_b(&f).unwrap())
        .add(&hochschild_b(&de_rham_d(&f)).unwrap())
        .unwrap();
    assert_eq!(homotopy, f.sub(&karoubi(&f).unwrap()).unwrap());
    println!("db + bd = id - kappa: verified");

    // kappa^{n+1} = id - db and kappa^{n+1} d = d on Omega^n
    assert_eq!(
        pow(&f, n + 1),
        f.sub(&de_rham_d(&hochschild_b(&f).unwrap())).unwrap()
    );
    assert_eq!(pow(&de_rham_d(&f), n + 1), de_rham_d(&f));
    println!("kappa^{} = id - db and kappa^{} d = d: verified", n + 1, n + 1);

    // minimal polynomial: (kappa^n - 1)(kappa^{n+1} - 1) = 0
    let a = pow(&f, n + 1).sub(&f).unwrap();
    assert!(pow(&a, n).sub(&a).unwrap().is_zero());
    println!("(kappa^{} - 1)(kappa^{} - 1) = 0: verified", n, n + 1);
}

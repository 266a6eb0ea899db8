//! Karoubi-de Rham cohomology: Betti numbers of k[e]/(e^2 - e), the
//! Poincare lemma for free algebras, and the Quillen exact sequence.

use std::rc::Rc;

use ncalc::based::{Atom, BasedAlgebra};
use ncalc::forms::{de_rham_d, quillen_maps, DrContext, NCForm};
use ncalc::scalar::rat;
use ncalc::word::Word;

fn main() {
    // The "noncommutative point pair": k[e]/(e^2 - e) has DR cohomology
    // k, 0, k, 0, k, .. even though it is two points glued as one algebra.
    let alg = Rc::new(BasedAlgebra::fin_dim(ncalc::structure::idempotent_line()));
    let ctx = DrContext::new(alg);
    let h = ctx.dr_cohomology_reduced(4, 0).unwrap();
    let dims: Vec<usize> = (0..=4).map(|n| h[&(n, 0)]).collect();
    println!("DR(k[e]/(e^2-e)) dims 0..4: {:?}", dims);

    // Free algebras are acyclic in positive degrees: every closed class
    // of positive weight has an explicit Euler primitive.
    let free = Rc::new(BasedAlgebra::free(2));
    let fctx = DrContext::new(free.clone());
    let mut xdy = NCForm::zero(free.clone(), 1);
    xdy.add_term(
        vec![Atom::W(Word(vec![0])), Atom::W(Word(vec![1]))],
        rat(1),
    );
    let omega = fctx.dr_project(&de_rham_d(&xdy)).unwrap();
    println!("omega = d(x dy) projects to {}", omega.rep);
    let eta = fctx.poincare_primitive(&omega).unwrap();
    println!("primitive eta with d eta = omega: {}", eta.rep);
    let check = fctx.dr_project(&de_rham_d(&eta.rep)).unwrap();
    assert_eq!(check.rep, omega.rep);
    println!("d eta == omega: verified");

    // Quillen's exact sequence 0 -> DR^0 -> DR^1 -> Abar -> 0 per weight.
    for rep in quillen_maps(&fctx, 4).unwrap() {
        println!(
            "weight {}: dim DR^0 = {}, dim DR^1 = {}, dim Abar = {}, exact = {}",
            rep.weight, rep.dim_dr0, rep.dim_dr1, rep.dim_abar, rep.exact
        );
    }
}

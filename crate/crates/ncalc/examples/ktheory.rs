//! Chern characters of idempotents and invertibles: c_0, c_1, the even
//! classes Tr(e (de)^{2k})/k!, and the Grassmannian connection whose
//! curvature recovers them.

use std::rc::Rc;

use ncalc::based::{Atom, BasedAlgebra, Elem};
use ncalc::forms::DrContext;
use ncalc::ktheory::{
    chern_c0, chern_c1, chern_ch_k, connection_curvature, grassmann_connection, IdempotentMatrix,
    InvertibleMatrix, OmegaMatrix,
};
use ncalc::scalar::rat;
use ncalc::structure::{dual_numbers_algebra, idempotent_line};

fn main() {
    // the universal idempotent e over k[e]/(e^2 - e)
    let a = Rc::new(BasedAlgebra::fin_dim(idempotent_line()));
    let ctx = DrContext::new(a.clone());
    let e = IdempotentMatrix::new(a.clone(), 1, vec![Elem::from_atom(Atom::E(1))]).unwrap();

    // the fundamental identity e de = de (1 - e)
    let id = OmegaMatrix::identity(a.clone(), 1);
    let em = e.to_omega();
    let de = em.d();
    assert_eq!(em.mul(&de).unwrap(), de.mul(&id.sub(&em).unwrap()).unwrap());
    println!("e de = de (1 - e)");

    let c0 = chern_c0(&e, &ctx).unwrap();
    println!("c_0(e) = {}  (closed: {})", c0.class.rep, c0.certified());
    for k in 1..=2usize {
        let ch = chern_ch_k(&e, k, &ctx).unwrap();
        println!("ch_{}(e) = {}  (closed: {})", k, ch.class.rep, ch.certified());
    }

    // the Grassmannian connection nabla(v) = d(v e) e has curvature
    // R = e de de e, and Tr(R^k)/k! recovers ch_k
    let conn = grassmann_connection(&e);
    for k in 1..=2usize {
        let via_conn = connection_curvature(&conn, k, &ctx).unwrap();
        assert_eq!(via_conn.class, chern_ch_k(&e, k, &ctx).unwrap().class);
    }
    println!("Tr(R^k)/k! = ch_k for k <= 2");

    // an odd class: c_1 of the invertible 1 + x over the dual numbers
    let ad = Rc::new(BasedAlgebra::fin_dim(dual_numbers_algebra()));
    let ctxd = DrContext::new(ad.clone());
    let unit = Elem::from_atom(ad.unit_atom());
    let x = Elem::from_atom(Atom::E(1));
    let g = InvertibleMatrix::new(ad, 1, vec![unit.add(&x)], vec![unit.sub(&x)]).unwrap();
    let c1 = chern_c1(&g, &ctxd).unwrap();
    println!(
        "c_1(1 + x) = {}  (b-closed: {}, nonzero: {})",
        c1.class.rep,
        c1.certified(),
        !c1.class.is_zero()
    );
    let _ = rat(0);
}

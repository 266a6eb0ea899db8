//! Randomized property tests for the algebraic identities that hold on
//! every input, not just the curated fixtures: differentials square to
//! zero, the cyclic projection kills commutators, brackets are
//! antisymmetric, and the star product deforms the commutative product.

use std::rc::Rc;

use ncalc::based::{Atom, BasedAlgebra};
use ncalc::cyclic::{necklace_bracket, project_cyclic, SymplecticLayout};
use ncalc::forms::{de_rham_d, hochschild_b, karoubi, NCForm};
use ncalc::scalar::rat;
use ncalc::star::{moyal_star, phase_x, phase_y, PhasePoly};
use ncalc::word::{FreePoly, Word};
use proptest::prelude::*;

fn free_poly() -> impl Strategy<Value = FreePoly> {
    prop::collection::vec((prop::collection::vec(0usize..2, 0..4), -4i64..5), 1..4).prop_map(
        |terms| {
            let mut p = FreePoly::zero(2);
            for (letters, c) in terms {
                p.add_term(Word(letters), rat(c));
            }
            p
        },
    )
}

fn free_form(degree: usize) -> impl Strategy<Value = NCForm> {
    prop::collection::vec(
        (prop::collection::vec(prop::collection::vec(0usize..2, 1..3), degree + 1), -4i64..5),
        1..4,
    )
    .prop_map(move |terms| {
        let alg = Rc::new(BasedAlgebra::free(2));
        let mut f = NCForm::zero(alg, degree);
        for (words, c) in terms {
            let atoms: Vec<Atom> = words.into_iter().map(|w| Atom::W(Word(w))).collect();
            f.add_term(atoms, rat(c));
        }
        f
    })
}

fn phase_poly() -> impl Strategy<Value = PhasePoly> {
    prop::collection::vec((0u8..4, 0u8..4, -3i64..4), 1..4).prop_map(|terms| {
        let mut p = PhasePoly::zero(3);
        for (a, b, c) in terms {
            let mut m = ncalc::star::phase_constant(rat(c), 1);
            for _ in 0..a {
                m = m.mul(&phase_x(0, 1));
            }
            for _ in 0..b {
                m = m.mul(&phase_y(0, 1));
            }
            p = p.add(&m);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn de_rham_d_squares_to_zero(f in free_form(1)) {
        prop_assert!(de_rham_d(&de_rham_d(&f)).is_zero());
    }

    #[test]
    fn hochschild_b_squares_to_zero(f in free_form(2)) {
        let bf = hochschild_b(&f).unwrap();
        prop_assert!(hochschild_b(&bf).unwrap().is_zero());
    }

    #[test]
    fn karoubi_commutes_with_d(f in free_form(1)) {
        let lhs = karoubi(&de_rham_d(&f)).unwrap();
        let rhs = de_rham_d(&karoubi(&f).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cyclic_projection_kills_commutators(a in free_poly(), b in free_poly()) {
        let c = a.commutator(&b).unwrap();
        prop_assert!(project_cyclic(&c).is_zero());
    }

    #[test]
    fn necklace_bracket_is_antisymmetric(a in free_poly(), b in free_poly()) {
        let layout = SymplecticLayout::new(1);
        let fa = project_cyclic(&a);
        let fb = project_cyclic(&b);
        let lhs = necklace_bracket(&fa, &fb, &layout).unwrap();
        let rhs = necklace_bracket(&fb, &fa, &layout).unwrap();
        prop_assert_eq!(lhs, rhs.scale(&rat(-1)));
    }

    #[test]
    fn moyal_star_deforms_the_pointwise_product(f in phase_poly(), g in phase_poly()) {
        // at t = 0 the star product is the ordinary commutative product
        let star = moyal_star(&f, &g, 1).unwrap();
        let slices = ncalc::star::t_slices(&star);
        let classical = ncalc::star::t_slices(&f.mul(&g));
        prop_assert_eq!(slices.get(&0), classical.get(&0));
    }

    #[test]
    fn moyal_star_is_associative(f in phase_poly(), g in phase_poly(), h in phase_poly()) {
        let lhs = moyal_star(&moyal_star(&f, &g, 1).unwrap(), &h, 1).unwrap();
        let rhs = moyal_star(&f, &moyal_star(&g, &h, 1).unwrap(), 1).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

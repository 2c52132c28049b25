mod common;

use common::*;
use proptest::prelude::*;
use supermoduli::Parity;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn koszul_sign(pa in parity(), pb in parity(), ta in raw_terms(2, 0, 3, 3), tb in raw_terms(2, 0, 3, 3)) {
        koszul((pa, pb), (ta, tb))?;
    }

    #[test]
    fn substitution_functorial(p in homogeneous(&poly_ring(), 0, 2, Parity::Even), m1 in ring_map(), m2 in ring_map()) {
        functoriality(&p, &m1, &m2)?;
    }

    #[test]
    fn odd_substitution_functorial(p in homogeneous(&poly_ring(), 0, 2, Parity::Odd), m1 in ring_map(), m2 in ring_map()) {
        functoriality(&p, &m1, &m2)?;
    }

    #[test]
    fn super_jacobi(
        (x, y, z) in (parity(), parity(), parity()).prop_flat_map(|(a, b, c)| (field(a), field(b), field(c)))
    ) {
        jacobi(&x, &y, &z)?;
    }

    #[test]
    fn window_stabilization(m in -5i64..=6, kind in sheaf_kind(), extra in 0i64..3) {
        window_stable(m, kind, extra)?;
    }

    #[test]
    fn gamma_star_normal(seed in aut_seed(), (r0, betas) in gamma_seed()) {
        gamma_normal(&seed, r0, &betas)?;
    }

    #[test]
    fn gauge_fix_idempotent(seed in form_seed()) {
        gauge_idempotent(&seed)?;
    }

    #[test]
    fn pullback_functorial_forms(w in form_on_poly_ring(), m1 in invertible_map(), m2 in invertible_map()) {
        pullback_functorial(&w, &m1, &m2)?;
    }

    #[test]
    fn base_change_of_z(
        n in prop_oneof![Just(6i64), Just(8i64)],
        f in prop::collection::vec(prop::array::uniform3(-2i64..=2), 2),
        phi in prop::collection::vec(prop::array::uniform3(-2i64..=2), 3),
    ) {
        base_change(n, &f, &phi)?;
    }

    #[test]
    fn aut_group_axioms(g in aut_seed(), h in aut_seed()) {
        let ring = grassmann(3);
        let h = if h.n == g.n { h } else { AutSeed { n: g.n, odd: g.odd.clone(), ..h } };
        let (a, b) = (g.element(&ring), h.element(&ring));
        let id = supermoduli::autgroup::AutElement::identity(g.n, &ring);
        prop_assert_eq!(a.compose(&a.invert().unwrap()).unwrap(), id.clone());
        prop_assert_eq!(a.compose(&id).unwrap(), a.clone());
        let ab_inv = a.compose(&b).unwrap().invert().unwrap();
        prop_assert_eq!(ab_inv, b.invert().unwrap().compose(&a.invert().unwrap()).unwrap());
    }
}

use std::sync::Arc;

use proptest::prelude::*;
use uproj::adjoint::{adjoint_projector, Adjoint};
use uproj::liealg::ChevalleyBasis;
use uproj::projector_core::Projector;
use uproj::rational::q;
use uproj::rootsystem::{RootSystem, Series};
use uproj::symfield::{parse, DenominatorSet, LocElem, Monomial, Poly};

fn poly_strategy(nvars: usize, max_deg: u16, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -5i64..=5), 0..=max_terms).prop_map(
        move |terms| {
            let terms = terms.into_iter().filter(|(e, _)| e.iter().sum::<u16>() <= max_deg).map(|(e, c)| {
                (Monomial::from_exponents(e), q(c))
            });
            Poly::from_terms(nvars, terms)
        },
    )
}

fn setup(s: Series, r: usize) -> (Adjoint, Projector) {
    let b = ChevalleyBasis::new(&RootSystem::new(s, r).unwrap()).unwrap();
    adjoint_projector(&b).unwrap()
}

fn lift(set: &Arc<DenominatorSet>, p: Poly) -> LocElem {
    LocElem::from_poly(set, p)
}

proptest! {
    #[test]
    fn ring_axioms(a in poly_strategy(3, 3, 5), b in poly_strategy(3, 3, 5), c in poly_strategy(3, 3, 5)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!(a.mul(&b).div_exact(&b), Some(a.clone()));
        }
    }

    #[test]
    fn text_round_trip(a in poly_strategy(3, 3, 5), k in 0u32..3) {
        let set = DenominatorSet::new(vec!["x".into(), "y".into(), "z".into()]);
        let (set, g) = set.extend(&Poly::var(3, 0).add(&Poly::var(3, 1))).unwrap();
        let e = lift(&set, a).try_mul(&LocElem::gen_inverse(&set, g).pow(k)).unwrap();
        let back = parse(&e.to_text(), &set).unwrap();
        prop_assert_eq!(back.reduced(), e.reduced());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sl2_homomorphism(a in poly_strategy(3, 3, 4), b in poly_strategy(3, 3, 4)) {
        let (adj, p) = setup(Series::A, 1);
        let set = adj.universe();
        let (a, b) = (lift(set, a), lift(set, b));
        let lhs = p.apply(&a.try_mul(&b).unwrap()).unwrap();
        let rhs = p.apply(&a).unwrap().try_mul(&p.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = p.apply(&a.try_add(&b).unwrap()).unwrap();
        prop_assert_eq!(sum, p.apply(&a).unwrap().try_add(&p.apply(&b).unwrap()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn a2_idempotent_and_invariant(a in poly_strategy(8, 2, 3)) {
        let (adj, p) = setup(Series::A, 2);
        let a = lift(adj.universe(), a);
        let once = p.apply(&a).unwrap();
        prop_assert_eq!(p.apply(&once).unwrap(), once.clone());
        for d in adj.simple_derivations() {
            prop_assert!(d.kills(&once));
        }
    }

    #[test]
    fn a2_homomorphism(a in poly_strategy(8, 2, 3), b in poly_strategy(8, 1, 3)) {
        let (adj, p) = setup(Series::A, 2);
        let set = adj.universe();
        let (a, b) = (lift(set, a), lift(set, b));
        let lhs = p.apply(&a.try_mul(&b).unwrap()).unwrap();
        let rhs = p.apply(&a).unwrap().try_mul(&p.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn a3_level_order_independent(a in poly_strategy(15, 2, 3)) {
        let (mut adj, p) = setup(Series::A, 3);
        let q = adj.projector_with_order(|_, pairs| pairs.reverse()).unwrap();
        let a = lift(adj.universe(), a);
        prop_assert_eq!(p.apply(&a).unwrap(), q.apply(&a).unwrap());
    }
}

#[test]
fn stage_slices_are_annihilated() {
    for (s, r) in [(Series::A, 1), (Series::A, 2), (Series::B, 2)] {
        let (_, p) = setup(s, r);
        for st in p.stages() {
            assert!(p.apply(&st.pair.q).unwrap().is_zero(), "{s}{r} {}", st.derivation.label());
        }
    }
}

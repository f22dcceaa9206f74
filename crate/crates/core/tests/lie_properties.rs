mod common;

use common::{conjugated_algebra, light_bounds};
use planar_lnd::derivation::engel_chain;
use planar_lnd::lie::{lie_closure, lower_central_series, rank_over_a, sample_planes, span_reduce};
use planar_lnd::random::ChainBounds;
use planar_lnd::triangular::{is_triangular, triangularize, verify_conjugation, Case};
use planar_lnd::{Derivation, Poly};
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(40))]

    #[test]
    fn conjugated_triangular_algebras_are_nilpotent(seed in any::<u64>()) {
        let (theta, gens) = conjugated_algebra(seed, &light_bounds());
        let report = lie_closure(&gens, 64);
        prop_assert!(!report.capped);
        prop_assert!(report.basis.structure_is_consistent());
        let series = lower_central_series(&report.basis).unwrap();
        prop_assert!(series.nilpotent, "{:?}", series);
        let planes = sample_planes(&report.basis, &mut common::rng(seed), 8).unwrap();
        prop_assert_eq!(planes.subalgebras, planes.abelian);
        let back: Vec<Derivation> = report.basis.basis().iter().map(|d| theta.invert().conjugate(d)).collect();
        prop_assert_eq!(rank_over_a(&span_reduce(&back)), rank_over_a(&report.basis));
    }

    #[test]
    fn engel_condition_on_closed_basis(seed in any::<u64>()) {
        let (_, gens) = conjugated_algebra(seed, &light_bounds());
        let report = lie_closure(&gens, 64);
        let rows = report.basis.basis();
        for a in rows {
            for b in rows {
                prop_assert!(engel_chain(a, b, 64).is_ok());
            }
        }
    }

    #[test]
    fn triangularization_recovers_u2(seed in any::<u64>()) {
        let (_, gens) = conjugated_algebra(seed, &light_bounds());
        let r = triangularize(&gens).unwrap();
        prop_assert!(r.verified);
        prop_assert!(verify_conjugation(&r.theta, r.closure.basis(), &r.images));
        for e in &r.images {
            prop_assert!(is_triangular(e));
            prop_assert!(e.divergence().is_zero());
        }
        let span = span_reduce(&r.images);
        match r.case {
            Case::RankOneAbelian => {
                for a in &r.images {
                    prop_assert!(a.p.is_zero());
                    for b in &r.images {
                        prop_assert!(a.bracket(b).is_zero());
                    }
                }
            }
            Case::RankTwoNonabelian => {
                for e in [Derivation::dx(), Derivation::dy(), Derivation::new(Poly::zero(), Poly::x())] {
                    prop_assert!(span.contains(&e), "{} missing", e);
                }
            }
            Case::RankTwoAbelian => prop_assert_eq!(span, span_reduce(&[Derivation::dx(), Derivation::dy()])),
            Case::Zero => prop_assert!(r.images.is_empty()),
        }
    }
}

proptest! {
    #![proptest_config(common::config(12))]

    #[test]
    fn triangularization_at_full_bounds(seed in any::<u64>()) {
        let (_, gens) = conjugated_algebra(seed, &ChainBounds::default());
        let r = triangularize(&gens).unwrap();
        prop_assert!(r.verified);
        prop_assert!(r.images.iter().all(is_triangular));
    }
}

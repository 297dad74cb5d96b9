//! Randomized checks on bounds, certificates, relations and Haar measures.

mod common;

use common::{fixtures, ledrappier};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use polymix::budget::Budget;
use polymix::haar_measure::{
    box_projection, brute_force_measure, cylinder_measure, cylinder_measure_boxed, joint_measure, mixing_experiment,
    window_total, CylinderSpec, Family, LatticeBox, MeasureValue,
};
use polymix::mixing_analysis::{
    check_relation, frobenius_certificate, mixing_bounds, CertificateStatus, SequenceRelation, TupleSource,
};
use polymix::quotient_ring::QuotientRing;
use polymix::{ExponentVec, FieldSpec, LaurentPoly};
use proptest::prelude::*;

fn nonmonomial(p: u64, dim: usize, r: i64) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-r..=r, dim), 1..p), 2..=5).prop_filter_map("monomial", move |ts| {
        let f = LaurentPoly::make_poly(
            FieldSpec::new(p).unwrap(),
            dim,
            ts.into_iter().map(|(e, c)| (ExponentVec::from_i64s(&e), c)),
        )
        .unwrap();
        (f.num_terms() >= 2).then_some(f)
    })
}

fn any_field_poly() -> impl Strategy<Value = LaurentPoly> {
    (prop_oneof![Just(2u64), Just(3), Just(5)], 2usize..=3).prop_flat_map(|(p, d)| nonmonomial(p, d, 2))
}

/// Asserts the value is `0` or `p^{-m}` with `m` the projected dimension.
fn check_value(v: MeasureValue, p: u64, projected: usize) -> Result<(), TestCaseError> {
    match v {
        MeasureValue::Zero => {}
        MeasureValue::Power { p: q, m } => {
            prop_assert_eq!(q, p);
            prop_assert_eq!(m as usize, projected);
            prop_assert_eq!(
                v.to_fraction().0,
                BigRational::new(BigInt::one(), BigInt::from(p).pow(m))
            );
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_are_ordered(f in any_field_poly()) {
        let b = mixing_bounds(&f).unwrap();
        prop_assert!(1 <= b.lower && b.lower <= b.upper);
        prop_assert_eq!(b.lower + 1, b.vertex_count);
        prop_assert_eq!(b.upper + 1, b.support_size);
    }

    #[test]
    fn frobenius_certificates_always_verify(f in any_field_poly(), k_max in 0u32..=12) {
        let cert = frobenius_certificate(&f, k_max).unwrap();
        prop_assert_eq!(cert.verified_k, (0..=k_max).collect::<Vec<_>>());
        prop_assert!(cert.frobenius_family);
        prop_assert_eq!(cert.status, CertificateStatus::Certified);
        prop_assert_eq!(cert.shape.len(), cert.coefficients.len());
    }

    #[test]
    fn frobenius_relations_hold_at_every_index(f in any_field_poly()) {
        let rel = SequenceRelation::frobenius(&f).unwrap();
        let rows = check_relation(&rel, &f, 1..=8).unwrap();
        prop_assert!(rows.iter().all(|&(_, ok)| ok));
        prop_assert!(rel.moves_apart(1..=8).unwrap());
    }

    #[test]
    fn relation_truth_ignores_common_translation(
        i in 0usize..3,
        tuples in prop::collection::vec(prop::collection::vec(prop::collection::vec(-6i64..=6, 2), 3), 1..5),
        coeffs in prop::collection::vec(1u64..3, 3),
        m in prop::collection::vec(-1000i64..=1000, 2),
    ) {
        let f = fixtures()[i].1.clone();
        let zero = ExponentVec::zero(2);
        let p = f.field().p();
        let a: Vec<LaurentPoly> =
            coeffs.iter().map(|&c| LaurentPoly::monomial(f.field(), zero.clone(), 1 + (c - 1) % (p - 1))).collect();
        let to_ev = |ts: &Vec<Vec<Vec<i64>>>, m: &[i64]| -> Vec<Vec<ExponentVec>> {
            ts.iter()
                .map(|t| t.iter().map(|n| &ExponentVec::from_i64s(n) + &ExponentVec::from_i64s(m)).collect())
                .collect()
        };
        let plain = SequenceRelation::new(&f, a.clone(), TupleSource::Explicit(to_ev(&tuples, &[0, 0]))).unwrap();
        let moved = SequenceRelation::new(&f, a, TupleSource::Explicit(to_ev(&tuples, &m))).unwrap();
        let n = tuples.len() as u64;
        prop_assert_eq!(check_relation(&plain, &f, 1..=n).unwrap(), check_relation(&moved, &f, 1..=n).unwrap());
    }
}

fn window(max: usize) -> impl Strategy<Value = Vec<ExponentVec>> {
    prop::collection::btree_set(prop::collection::vec(-2i64..=2, 2), 1..=max)
        .prop_map(|s| s.iter().map(|p| ExponentVec::from_i64s(p)).collect())
}

fn cylinder_for(p: u64, max: usize) -> impl Strategy<Value = CylinderSpec> {
    window(max).prop_flat_map(move |w| {
        let n = w.len();
        prop::collection::vec(0..p, n).prop_map(move |v| CylinderSpec::new(w.clone(), v).unwrap())
    })
}

fn fixture_and_cylinder(max: usize) -> impl Strategy<Value = (LaurentPoly, CylinderSpec)> {
    (0usize..3).prop_flat_map(move |i| {
        let f = fixtures()[i].1.clone();
        let p = f.field().p();
        (Just(f), cylinder_for(p, max))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measures_sum_to_one_over_a_window(i in 0usize..3, w in window(4)) {
        let f = fixtures()[i].1.clone();
        prop_assert!(window_total(&f, &w).unwrap().0.is_one());
    }

    #[test]
    fn measures_are_translation_invariant(
        (f, cyl) in fixture_and_cylinder(5),
        m in prop::collection::vec(-100_000i64..=100_000, 2),
    ) {
        let a = cylinder_measure(&f, &cyl).unwrap();
        check_value(a.value, f.field().p(), a.projected_dimension)?;
        let b = cylinder_measure(&f, &cyl.translate(&ExponentVec::from_i64s(&m))).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn single_event_joint_measure_is_the_measure(
        (f, cyl) in fixture_and_cylinder(4),
        n in prop::collection::vec(-50i64..=50, 2),
    ) {
        let n = ExponentVec::from_i64s(&n);
        let joint = joint_measure(&f, &[(n.clone(), cyl.clone())]).unwrap();
        check_value(joint.value, f.field().p(), joint.projected_dimension)?;
        prop_assert_eq!(joint.fraction(), cylinder_measure(&f, &cyl.translate(&n)).unwrap().fraction());
        prop_assert_eq!(joint.fraction(), cylinder_measure(&f, &cyl).unwrap().fraction());
    }

    #[test]
    fn cylinder_json_round_trips((_f, cyl) in fixture_and_cylinder(5)) {
        let text = serde_json::to_string(&cyl).unwrap();
        prop_assert_eq!(serde_json::from_str::<CylinderSpec>(&text).unwrap(), cyl);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn box_estimates_settle_on_the_exact_value((f, cyl) in fixture_and_cylinder(3)) {
        let boxed = cylinder_measure_boxed(&f, &cyl, &Budget::default()).unwrap();
        prop_assert!(boxed.dimension_trace.windows(2).all(|w| w[1] <= w[0]));
        check_value(boxed.value, f.field().p(), boxed.projected_dimension)?;
        if boxed.stabilized {
            let exact = cylinder_measure(&f, &cyl).unwrap();
            prop_assert_eq!(boxed.value, exact.value);
            prop_assert_eq!(boxed.projected_dimension, exact.projected_dimension);
        }
    }

    #[test]
    fn box_rank_matches_enumeration((f, cyl) in fixture_and_cylinder(3)) {
        // boxes small enough to enumerate: 4x4 over F_2, 3x3 over F_3
        let half = if f.field().p() == 2 { 1 } else { 0 };
        let lo = cyl.window.iter().map(|w| w.to_i64s().unwrap()).fold(vec![i64::MAX; 2], |a, w| {
            a.iter().zip(&w).map(|(x, y)| *x.min(y)).collect()
        });
        let bx = LatticeBox::new(lo.clone(), lo.iter().map(|x| x + 2 + half).collect()).unwrap();
        prop_assume!(cyl.window.iter().all(|w| bx.contains(&w.to_i64s().unwrap())));
        let budget = Budget::default();
        let brute = brute_force_measure(&f, &cyl, &bx, &budget).unwrap();
        let proj = box_projection(&f, &cyl, &bx, &budget).unwrap();
        prop_assert_eq!(proj.projected_dimension, brute.result.projected_dimension);
        prop_assert_eq!(proj.consistent, brute.matching > 0);
        check_value(brute.result.value, f.field().p(), brute.result.projected_dimension)?;
    }
}

#[test]
fn ledrappier_frobenius_triples_stay_correlated() {
    let f = ledrappier();
    let one = CylinderSpec::single(ExponentVec::zero(2), 1);
    let zero = CylinderSpec::single(ExponentVec::zero(2), 0);
    let shape = vec![ExponentVec::from([0, 0]), ExponentVec::from([1, 0]), ExponentVec::from([0, 1])];
    let ks: Vec<i64> = (0..=8).map(|k| 1 << k).collect();
    let family = Family::Shape { shape: shape.clone(), ks };
    // x_0 + x_{k e1} + x_{k e2} = 0 forces the triple (1,1,1) out, (1,1,0) in
    for (cyls, gap) in [(vec![one.clone(), one.clone(), one.clone()], -1i64), (vec![one.clone(), one, zero], 1)] {
        for row in mixing_experiment(&f, &family, &cyls).unwrap() {
            assert_eq!(row.gap.0, BigRational::new(BigInt::from(gap), BigInt::from(8)), "k = {}", row.k);
        }
    }
    let rel = SequenceRelation::frobenius(&f).unwrap();
    assert!(check_relation(&rel, &f, 0..=8).unwrap().iter().all(|&(_, ok)| ok));
    let ring = QuotientRing::new(&f).unwrap();
    assert!(!ring.is_zero_mod(&LaurentPoly::one(f.field(), 2)).unwrap());
    assert!(BigRational::zero() < BigRational::one());
}

//! Randomized laws for Laurent polynomials and the quotient ring.

mod common;

use common::fixtures;
use polymix::quotient_ring::QuotientRing;
use polymix::{ExponentVec, FieldSpec, LaurentPoly};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn poly_strategy(p: u64, lo: i64, hi: i64, max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((lo..=hi), (lo..=hi), 0..p), 0..=max_terms).prop_map(move |ts| {
        let field = FieldSpec::new(p).unwrap();
        LaurentPoly::make_poly(field, 2, ts.into_iter().map(|(a, b, c)| (ExponentVec::from([a, b]), c))).unwrap()
    })
}

fn run_ring_axioms(p: u64) {
    let mut runner = TestRunner::new(Config::with_cases(200));
    let s = (poly_strategy(p, -3, 3, 5), poly_strategy(p, -3, 3, 5), poly_strategy(p, -3, 3, 5));
    runner
        .run(&s, |(a, b, c)| {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert!(a.sub(&a).unwrap().is_zero());
            Ok(())
        })
        .unwrap();
}

#[test]
fn ring_axioms_mod_2() {
    run_ring_axioms(2);
}

#[test]
fn ring_axioms_mod_3() {
    run_ring_axioms(3);
}

#[test]
fn ring_axioms_mod_5() {
    run_ring_axioms(5);
}

proptest! {
    #[test]
    fn frobenius_is_additive(
        (g, h) in prop_oneof![Just(2u64), Just(3), Just(5)]
            .prop_flat_map(|p| (poly_strategy(p, -4, 4, 5), poly_strategy(p, -4, 4, 5))),
        k in 0u32..6,
    ) {
        prop_assert_eq!(
            g.add(&h).unwrap().frobenius_power(k),
            g.frobenius_power(k).add(&h.frobenius_power(k)).unwrap()
        );
    }

    #[test]
    fn frobenius_matches_repeated_multiplication(
        (p, k) in prop_oneof![
            Just((2u64, 1u32)), Just((2, 2)), Just((2, 3)), Just((2, 4)), Just((2, 5)), Just((2, 6)),
            Just((3, 1)), Just((3, 2)), Just((3, 3)), Just((3, 4)), Just((5, 1)), Just((5, 2)),
        ],
        ts in prop::collection::vec(((-2i64..=2), (-2i64..=2), 0u64..5), 0..=4),
    ) {
        let field = FieldSpec::new(p).unwrap();
        let g = LaurentPoly::make_poly(field, 2, ts.into_iter().map(|(a, b, c)| (ExponentVec::from([a, b]), c))).unwrap();
        prop_assert_eq!(g.frobenius_power(k), g.pow(p.pow(k)));
    }

    #[test]
    fn product_support_in_minkowski_sum(g in poly_strategy(3, -3, 3, 5), h in poly_strategy(3, -3, 3, 5)) {
        let prod = g.mul(&h).unwrap().support();
        let sum = g.support().minkowski_sum(&h.support());
        prop_assert!(prod.iter().all(|e| sum.contains(e)));
    }

    #[test]
    fn json_round_trip(g in poly_strategy(5, -6, 6, 6)) {
        let text = serde_json::to_string(&g).unwrap();
        let back: LaurentPoly = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn parse_display_round_trip(g in poly_strategy(3, 0, 4, 5)) {
        let back = LaurentPoly::parse(g.field(), 2, &g.to_string()).unwrap();
        prop_assert_eq!(back, g);
    }
}

fn fixture_strategy() -> impl Strategy<Value = usize> {
    0..3usize
}

proptest! {
    #![proptest_config(Config::with_cases(200))]

    #[test]
    fn remainder_ignores_multiples_of_f(i in fixture_strategy(), seed in prop::collection::vec(((-3i64..=3), (-3i64..=3), 0u64..3, (-3i64..=3), (-3i64..=3), 0u64..3), 0..5)) {
        let f = fixtures()[i].1.clone();
        let field = f.field();
        let q = LaurentPoly::make_poly(field, 2, seed.iter().map(|t| (ExponentVec::from([t.0, t.1]), t.2))).unwrap();
        let h = LaurentPoly::make_poly(field, 2, seed.iter().map(|t| (ExponentVec::from([t.3, t.4]), t.5))).unwrap();
        let ring = QuotientRing::new(&f).unwrap();
        let m = ExponentVec::from([10, 10]);
        let lhs = ring.remainder(&q.mul(&f).unwrap().add(&h).unwrap().shift(&m).unwrap()).unwrap();
        let rhs = ring.remainder(&h.shift(&m).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        // normal forms are fixed points and avoid the leading term
        prop_assert_eq!(ring.remainder(&rhs).unwrap(), rhs.clone());
        prop_assert!(rhs.terms().keys().all(|e| !e.dominates(ring.leading_exponent())));
        let r = ring.reduce(&q.mul(&f).unwrap().add(&h).unwrap()).unwrap();
        prop_assert_eq!(r.value.is_zero(), ring.is_zero_mod(&h).unwrap());
    }

    #[test]
    fn membership_is_shift_invariant(
        i in fixture_strategy(),
        g in poly_strategy(2, -3, 3, 4),
        multiple in any::<bool>(),
        m in ((-5000i64..=5000), (-5000i64..=5000)),
    ) {
        let f = fixtures()[i].1.clone();
        let field = f.field();
        let g = LaurentPoly::make_poly(field, 2, g.terms().iter().map(|(e, &c)| (e.clone(), c))).unwrap();
        let g = if multiple { g.mul(&f).unwrap() } else { g };
        let ring = QuotientRing::new(&f).unwrap();
        let before = ring.is_zero_mod(&g).unwrap();
        let after = ring.is_zero_mod(&g.shift(&ExponentVec::from([m.0, m.1])).unwrap()).unwrap();
        prop_assert_eq!(before, after);
        if multiple {
            prop_assert!(before);
        }
    }

    #[test]
    fn large_exponent_ladder_agrees_with_division(i in fixture_strategy(), g in poly_strategy(2, 0, 60, 4)) {
        let f = fixtures()[i].1.clone();
        let g = LaurentPoly::make_poly(f.field(), 2, g.terms().iter().map(|(e, &c)| (e.clone(), c))).unwrap();
        let ring = QuotientRing::new(&f).unwrap();
        prop_assert_eq!(ring.remainder(&g).unwrap(), ring.remainder_direct(&g).unwrap());
    }
}

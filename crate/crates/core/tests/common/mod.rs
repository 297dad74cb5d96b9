#![allow(dead_code)]

use std::path::PathBuf;

use polymix::{ExponentVec, FieldSpec, LaurentPoly};
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn poly(p: u64, text: &str) -> LaurentPoly {
    LaurentPoly::parse(FieldSpec::new(p).unwrap(), 2, text).unwrap()
}

pub fn ledrappier() -> LaurentPoly {
    poly(2, "1 + u1 + u2")
}

/// The three standard fixtures: Ledrappier, a four-term tight example over
/// F_2 and a square-hull example over F_3.
pub fn fixtures() -> Vec<(&'static str, LaurentPoly)> {
    vec![
        ("1+u1+u2 over F2", ledrappier()),
        ("1+u1+u1^2+u2 over F2", poly(2, "1 + u1 + u1^2 + u2")),
        ("1+u1+u2+2u1u2 over F3", poly(3, "1 + u1 + u2 + 2*u1*u2")),
    ]
}

pub fn ev(v: &[i64]) -> ExponentVec {
    ExponentVec::from_i64s(v)
}

pub fn random_point<R: Rng>(rng: &mut R, dim: usize, lo: i64, hi: i64) -> ExponentVec {
    ExponentVec::from_i64s(&(0..dim).map(|_| rng.random_range(lo..=hi)).collect::<Vec<_>>())
}

/// Random polynomial with up to `terms` terms and exponents in `[lo, hi]`.
pub fn random_poly<R: Rng>(rng: &mut R, field: FieldSpec, dim: usize, terms: usize, lo: i64, hi: i64) -> LaurentPoly {
    let n = rng.random_range(0..=terms);
    let ts: Vec<(ExponentVec, u64)> =
        (0..n).map(|_| (random_point(rng, dim, lo, hi), rng.random_range(0..field.p()))).collect();
    LaurentPoly::make_poly(field, dim, ts).unwrap()
}

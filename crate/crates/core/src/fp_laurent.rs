//! Sparse Laurent polynomials over a prime field.
//!
//! A [`LaurentPoly`] is a finite map from exponent vectors (arbitrary-size
//! integers, possibly negative) to nonzero scalars in `{1, ..., p-1}`. Every
//! constructor canonicalizes, so structural equality is ring equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    p: u64,
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, c: i64) -> u64 {
        c.rem_euclid(self.p as i64) as u64
    }

    pub fn reduce_big(&self, c: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = ((c % &p) + &p) % &p;
        r.to_u64().expect("residue fits in u64")
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A point of `Z^d`, used both as a monomial exponent and as a lattice position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVec(Vec<BigInt>);

impl ExponentVec {
    pub fn new(components: Vec<BigInt>) -> Self {
        ExponentVec(components)
    }

    pub fn from_i64s(components: &[i64]) -> Self {
        ExponentVec(components.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        ExponentVec(vec![BigInt::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_components(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        ExponentVec(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn dot(&self, other: &ExponentVec) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Max-norm.
    pub fn norm_inf(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn total_degree(&self) -> BigInt {
        self.0.iter().sum()
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &ExponentVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Converts to machine integers, failing when a component does not fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim() });
        }
        Ok(())
    }
}

impl From<Vec<i64>> for ExponentVec {
    fn from(v: Vec<i64>) -> Self {
        ExponentVec::from_i64s(&v)
    }
}

impl<const N: usize> From<[i64; N]> for ExponentVec {
    fn from(v: [i64; N]) -> Self {
        ExponentVec::from_i64s(&v)
    }
}

impl Add for &ExponentVec {
    type Output = ExponentVec;
    fn add(self, rhs: &ExponentVec) -> ExponentVec {
        ExponentVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ExponentVec {
    type Output = ExponentVec;
    fn sub(self, rhs: &ExponentVec) -> ExponentVec {
        ExponentVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExponentVec {
    type Output = ExponentVec;
    fn neg(self) -> ExponentVec {
        ExponentVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Integers are written as JSON numbers when they fit in an `i64`, and as
/// decimal strings otherwise.
pub(crate) mod bigint_json {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match value.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&value.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigInt::from(v)),
            Repr::Str(s) => s.trim().parse().map_err(de::Error::custom),
        }
    }

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    pub struct Wrap(#[serde(with = "self")] pub BigInt);
}

impl Serialize for ExponentVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ExponentVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<bigint_json::Wrap> = Vec::deserialize(d)?;
        Ok(ExponentVec(raw.into_iter().map(|w| w.0).collect()))
    }
}

/// The support `S(g)`: exponent vectors carrying a nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    pub dim: usize,
    pub points: BTreeSet<ExponentVec>,
}

impl SupportSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = ExponentVec>) -> Result<Self> {
        let points: BTreeSet<_> = points.into_iter().collect();
        for p in &points {
            p.check_dim(dim)?;
        }
        Ok(SupportSet { dim, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, e: &ExponentVec) -> bool {
        self.points.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ExponentVec> {
        self.points.iter()
    }

    /// Minkowski sum `self + other`.
    pub fn minkowski_sum(&self, other: &SupportSet) -> SupportSet {
        let mut points = BTreeSet::new();
        for a in &self.points {
            for b in &other.points {
                points.insert(a + b);
            }
        }
        SupportSet { dim: self.dim, points }
    }
}

/// A Laurent polynomial in `F_p[u_1^{±1}, ..., u_d^{±1}]` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: FieldSpec,
    dim: usize,
    terms: BTreeMap<ExponentVec, u64>,
}

impl LaurentPoly {
    /// Builds a polynomial from `(exponent, integer coefficient)` pairs.
    /// Coefficients are reduced mod p, duplicates summed, zeros dropped.
    pub fn make_poly<I, C>(field: FieldSpec, dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVec, C)>,
        C: Into<BigInt>,
    {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut map: BTreeMap<ExponentVec, u64> = BTreeMap::new();
        for (e, c) in terms {
            e.check_dim(dim)?;
            let c = field.reduce_big(&c.into());
            let slot = map.entry(e).or_insert(0);
            *slot = field.add(*slot, c);
        }
        map.retain(|_, c| *c != 0);
        Ok(LaurentPoly { field, dim, terms: map })
    }

    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        LaurentPoly { field, dim, terms: BTreeMap::new() }
    }

    pub fn one(field: FieldSpec, dim: usize) -> Self {
        Self::monomial(field, ExponentVec::zero(dim), 1)
    }

    pub fn monomial(field: FieldSpec, e: ExponentVec, c: u64) -> Self {
        let dim = e.dim();
        let mut terms = BTreeMap::new();
        let c = c % field.p();
        if c != 0 {
            terms.insert(e, c);
        }
        LaurentPoly { field, dim, terms }
    }

    /// Builds directly from an already-reduced term map; zero entries are dropped.
    pub(crate) fn from_map(field: FieldSpec, dim: usize, mut terms: BTreeMap<ExponentVec, u64>) -> Self {
        terms.retain(|_, c| *c != 0);
        LaurentPoly { field, dim, terms }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVec, u64> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, e: &ExponentVec) -> u64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    fn check_compatible(&self, other: &LaurentPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        for (e, &c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert(0);
            *slot = self.field.add(*slot, c);
        }
        Ok(Self::from_map(self.field, self.dim, terms))
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        self.scale(self.field.p() - 1)
    }

    pub fn scale(&self, c: u64) -> LaurentPoly {
        let c = c % self.field.p();
        let terms = self.terms.iter().map(|(e, &t)| (e.clone(), self.field.mul(t, c))).collect();
        Self::from_map(self.field, self.dim, terms)
    }

    /// Multiplication by the unit `u^shift`.
    pub fn shift(&self, shift: &ExponentVec) -> Result<LaurentPoly> {
        shift.check_dim(self.dim)?;
        let terms = self.terms.iter().map(|(e, &c)| (e + shift, c)).collect();
        Ok(LaurentPoly { field: self.field, dim: self.dim, terms })
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(other)?;
        let mut terms: BTreeMap<ExponentVec, u64> = BTreeMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let slot = terms.entry(a + b).or_insert(0);
                *slot = self.field.add(*slot, self.field.mul(ca, cb));
            }
        }
        Ok(Self::from_map(self.field, self.dim, terms))
    }

    pub fn pow(&self, mut n: u64) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.field, self.dim);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// `g^(p^k)`, computed as `sum_n c_n u^(p^k n)` since `c^p = c` in `F_p`.
    pub fn frobenius_power(&self, k: u32) -> LaurentPoly {
        let factor = BigInt::from(self.field.p()).pow(k);
        self.dilate(&factor)
    }

    /// Substitutes `u^n -> u^(factor n)` in every term.
    pub fn dilate(&self, factor: &BigInt) -> LaurentPoly {
        if factor.is_one() {
            return self.clone();
        }
        let terms = self.terms.iter().map(|(e, &c)| (e.scale(factor), c)).collect();
        Self::from_map(self.field, self.dim, terms)
    }

    pub fn support(&self) -> SupportSet {
        SupportSet { dim: self.dim, points: self.terms.keys().cloned().collect() }
    }

    /// Componentwise minimum exponent; `None` for the zero polynomial.
    pub fn min_exponents(&self) -> Option<ExponentVec> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            ExponentVec(acc.0.iter().zip(&e.0).map(|(a, b)| a.min(b).clone()).collect())
        }))
    }

    pub fn max_exponents(&self) -> Option<ExponentVec> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            ExponentVec(acc.0.iter().zip(&e.0).map(|(a, b)| a.max(b).clone()).collect())
        }))
    }

    /// Parses text such as `1 + u1 + 2*u1^-1*u2` (variables `u1..ud`, or
    /// `x`, `y`, `z` for the first three).
    pub fn parse(field: FieldSpec, dim: usize, text: &str) -> Result<LaurentPoly> {
        let mut terms = Vec::new();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "0" {
            return LaurentPoly::make_poly(field, dim, Vec::<(ExponentVec, i64)>::new());
        }
        let mut chunks: Vec<(i64, String)> = Vec::new();
        let mut sign = 1i64;
        let mut cur = String::new();
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            let is_op = (ch == '+' || ch == '-') && !matches!(prev, Some('^') | Some('('));
            if is_op {
                if !cur.is_empty() {
                    chunks.push((sign, std::mem::take(&mut cur)));
                } else if prev.is_some() {
                    return Err(Error::Parse(format!("dangling operator in {text:?}")));
                }
                sign = if ch == '-' { -1 } else { 1 };
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing operator in {text:?}")));
        }
        chunks.push((sign, cur));
        for (sign, chunk) in chunks {
            let mut coeff = BigInt::from(sign);
            let mut exp = vec![BigInt::zero(); dim];
            for factor in chunk.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {chunk:?}")));
                }
                if let Ok(c) = factor.parse::<BigInt>() {
                    coeff *= c;
                    continue;
                }
                let (var, power) = match factor.split_once('^') {
                    Some((v, pw)) => {
                        let pw = pw.trim_start_matches('(').trim_end_matches(')');
                        (v, pw.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad exponent {pw:?}")))?)
                    }
                    None => (factor, BigInt::one()),
                };
                let idx = match var {
                    "x" => 0,
                    "y" => 1,
                    "z" => 2,
                    v if v.starts_with('u') => v[1..]
                        .parse::<usize>()
                        .ok()
                        .filter(|&i| i >= 1)
                        .map(|i| i - 1)
                        .ok_or_else(|| Error::Parse(format!("bad variable {v:?}")))?,
                    v => return Err(Error::Parse(format!("bad factor {v:?}"))),
                };
                if idx >= dim {
                    return Err(Error::Parse(format!("variable {var} exceeds dimension {dim}")));
                }
                exp[idx] += power;
            }
            terms.push((ExponentVec(exp), coeff));
        }
        LaurentPoly::make_poly(field, dim, terms)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || e.is_zero() {
                factors.push(c.to_string());
            }
            for (k, x) in e.components().iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                if x.is_one() {
                    factors.push(format!("u{}", k + 1));
                } else {
                    factors.push(format!("u{}^{}", k + 1, x));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Canonical JSON polynomial format `{"p", "d", "terms": [{"e", "c"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub p: u64,
    pub d: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: ExponentVec,
    #[serde(with = "bigint_json")]
    pub c: BigInt,
}

impl TryFrom<PolyJson> for LaurentPoly {
    type Error = Error;
    fn try_from(j: PolyJson) -> Result<Self> {
        let field = FieldSpec::new(j.p)?;
        LaurentPoly::make_poly(field, j.d, j.terms.into_iter().map(|t| (t.e, t.c)))
    }
}

impl From<&LaurentPoly> for PolyJson {
    fn from(g: &LaurentPoly) -> Self {
        PolyJson {
            p: g.field.p(),
            d: g.dim,
            terms: g.terms.iter().map(|(e, &c)| TermJson { e: e.clone(), c: BigInt::from(c) }).collect(),
        }
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        LaurentPoly::try_from(j).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    fn poly(field: FieldSpec, dim: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::make_poly(field, dim, terms.iter().map(|(e, c)| (ExponentVec::from_i64s(e), *c))).unwrap()
    }

    #[test]
    fn field_rejects_composites() {
        assert_eq!(FieldSpec::new(4), Err(Error::NotPrime(4)));
        assert_eq!(FieldSpec::new(1), Err(Error::NotPrime(1)));
        assert!(FieldSpec::new(7919).is_ok());
        let f = FieldSpec::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn make_poly_canonicalizes() {
        let g = poly(f2(), 2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(g.num_terms(), 3);
        assert!(poly(f2(), 2, &[(&[0, 0], 2)]).is_zero());
        let f3 = FieldSpec::new(3).unwrap();
        let g = poly(f3, 1, &[(&[-1], 4)]);
        assert_eq!(g.coeff(&ExponentVec::from_i64s(&[-1])), 1);
        assert_eq!(g.num_terms(), 1);
        // duplicates are summed
        let g = poly(f3, 1, &[(&[2], 1), (&[2], 2)]);
        assert!(g.is_zero());
    }

    #[test]
    fn make_poly_rejects_bad_lengths() {
        let err = LaurentPoly::make_poly(f2(), 2, vec![(ExponentVec::from_i64s(&[1]), 1)]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn squaring_in_characteristic_two() {
        let a = poly(f2(), 1, &[(&[0], 1), (&[1], 1)]);
        assert_eq!(a.mul(&a).unwrap(), poly(f2(), 1, &[(&[0], 1), (&[2], 1)]));
        let l = poly(f2(), 2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        let sq = poly(f2(), 2, &[(&[0, 0], 1), (&[2, 0], 1), (&[0, 2], 1)]);
        assert_eq!(l.mul(&l).unwrap(), sq);
        assert_eq!(l.add(&LaurentPoly::zero(f2(), 2)).unwrap(), l);
    }

    #[test]
    fn frobenius_examples() {
        let l = poly(f2(), 2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(l.frobenius_power(1), poly(f2(), 2, &[(&[0, 0], 1), (&[2, 0], 1), (&[0, 2], 1)]));
        assert_eq!(l.frobenius_power(2), poly(f2(), 2, &[(&[0, 0], 1), (&[4, 0], 1), (&[0, 4], 1)]));
        assert_eq!(l.frobenius_power(0), l);
        // exponents beyond machine integers
        let big = l.frobenius_power(80);
        let top = BigInt::from(2).pow(80);
        assert_eq!(big.coeff(&ExponentVec::new(vec![top, BigInt::zero()])), 1);
    }

    #[test]
    fn support_examples() {
        let l = poly(f2(), 2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        let s = l.support();
        assert_eq!(s.len(), 3);
        assert!(s.contains(&ExponentVec::from_i64s(&[0, 1])));
        assert!(LaurentPoly::zero(f2(), 2).support().is_empty());
        let g = poly(f2(), 2, &[(&[0, 0], 1), (&[1, 0], 1), (&[2, 0], 1), (&[0, 1], 1)]);
        let pts: Vec<_> = g.support().points.into_iter().collect();
        assert_eq!(
            pts,
            vec![[0, 0].into(), [0, 1].into(), [1, 0].into(), [2, 0].into()]
        );
    }

    #[test]
    fn mismatched_operands_error() {
        let f3 = FieldSpec::new(3).unwrap();
        let a = LaurentPoly::one(f2(), 2);
        let b = LaurentPoly::one(f3, 2);
        assert_eq!(a.add(&b), Err(Error::FieldMismatch(2, 3)));
        let c = LaurentPoly::one(f2(), 3);
        assert!(matches!(a.mul(&c), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn parse_and_display() {
        let f3 = FieldSpec::new(3).unwrap();
        let g = LaurentPoly::parse(f3, 2, "1 + u1 + u2 + 2*u1*u2").unwrap();
        assert_eq!(g, poly(f3, 2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 2)]));
        let h = LaurentPoly::parse(f3, 2, "-x^-1 + y^2").unwrap();
        assert_eq!(h, poly(f3, 2, &[(&[-1, 0], 2), (&[0, 2], 1)]));
        assert_eq!(LaurentPoly::parse(f3, 2, &g.to_string()).unwrap(), g);
        assert!(LaurentPoly::parse(f3, 2, "u3").is_err());
        assert!(LaurentPoly::parse(f3, 2, "1 +").is_err());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let text = r#"{"p":2,"d":2,"terms":[{"e":[0,0],"c":1},{"e":[1,0],"c":1},{"e":[0,1],"c":3}]}"#;
        let g: LaurentPoly = serde_json::from_str(text).unwrap();
        assert_eq!(g.num_terms(), 3);
        let back: LaurentPoly = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"p":2,"d":2,"terms":[{"e":[0],"c":1}]}"#;
        assert!(serde_json::from_str::<LaurentPoly>(bad).is_err());
        let huge = LaurentPoly::one(f2(), 1).shift(&ExponentVec::new(vec![BigInt::from(2).pow(70)])).unwrap();
        let back: LaurentPoly = serde_json::from_str(&serde_json::to_string(&huge).unwrap()).unwrap();
        assert_eq!(back, huge);
    }
}

//! Computation in the quotient `R_{d,p} / <f>`.
//!
//! Monomials are units in the Laurent ring, so both `g` and `f` are first
//! shifted to have componentwise-minimum exponent zero. A single nonzero
//! divisor is a Gröbner basis of the ideal it generates, so the remainder of
//! multivariate division decides membership.
//!
//! Large exponents (Frobenius dilations) are handled by a base-`p` ladder:
//! `u^(p q + r) ≡ frob(residue(u^q)) * u^r`, which never expands a power
//! directly.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::fp_laurent::{ExponentVec, FieldSpec, LaurentPoly};

/// Exponents at or below this are divided directly; larger ones go through
/// the Frobenius ladder.
const DIRECT_DIVISION_LIMIT: u64 = 48;

/// Graded order: total degree first, ties broken lexicographically with the
/// last variable most significant (so `u2 > u1` among linear monomials).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermOrder;

pub const TERM_ORDER: TermOrder = TermOrder;

impl TermOrder {
    pub fn cmp(&self, a: &ExponentVec, b: &ExponentVec) -> Ordering {
        a.total_degree()
            .cmp(&b.total_degree())
            .then_with(|| a.components().iter().rev().cmp(b.components().iter().rev()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct OrderKey(ExponentVec);

impl Ord for OrderKey {
    fn cmp(&self, other: &Self) -> Ordering {
        TERM_ORDER.cmp(&self.0, &other.0)
    }
}

impl PartialOrd for OrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shifts `g` by `u^(-shift)` so every exponent is non-negative and each
/// variable attains exponent zero somewhere.
pub fn normalize(g: &LaurentPoly) -> Result<(LaurentPoly, ExponentVec)> {
    let shift = g.min_exponents().ok_or(Error::ZeroPolynomial)?;
    let moved = g.shift(&-&shift)?;
    Ok((moved, shift))
}

/// An element of `R_{d,p}/<f>` represented by its normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    /// Remainder of the normalized input modulo the normalized `f`.
    pub value: LaurentPoly,
    pub modulus: LaurentPoly,
    /// Monomial `u^shift` removed from the input before division.
    pub shift: ExponentVec,
}

impl Residue {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// The quotient ring `R_{d,p}/<f>` with a cached normalized divisor.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    modulus: LaurentPoly,
    divisor: LaurentPoly,
    lead: ExponentVec,
    lead_inv: u64,
    tail: Vec<(ExponentVec, u64)>,
}

impl QuotientRing {
    pub fn new(f: &LaurentPoly) -> Result<Self> {
        if f.is_zero() || f.is_monomial() {
            return Err(Error::TrivialQuotient);
        }
        let (divisor, _) = normalize(f)?;
        let lead = divisor
            .terms()
            .keys()
            .max_by(|a, b| TERM_ORDER.cmp(a, b))
            .cloned()
            .expect("nonzero divisor");
        let field = divisor.field();
        let lead_inv = field.inv(divisor.coeff(&lead));
        let tail = divisor
            .terms()
            .iter()
            .filter(|(e, _)| **e != lead)
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        Ok(QuotientRing { modulus: f.clone(), divisor, lead, lead_inv, tail })
    }

    pub fn modulus(&self) -> &LaurentPoly {
        &self.modulus
    }

    /// The shifted modulus actually used for division.
    pub fn divisor(&self) -> &LaurentPoly {
        &self.divisor
    }

    /// Leading monomial of the normalized modulus.
    pub fn leading_exponent(&self) -> &ExponentVec {
        &self.lead
    }

    pub fn field(&self) -> FieldSpec {
        self.divisor.field()
    }

    pub fn dim(&self) -> usize {
        self.divisor.dim()
    }

    fn check(&self, g: &LaurentPoly) -> Result<()> {
        if g.field() != self.field() {
            return Err(Error::FieldMismatch(self.field().p(), g.field().p()));
        }
        if g.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: g.dim() });
        }
        Ok(())
    }

    pub fn reduce(&self, g: &LaurentPoly) -> Result<Residue> {
        self.check(g)?;
        if g.is_zero() {
            return Ok(Residue {
                value: g.clone(),
                modulus: self.modulus.clone(),
                shift: ExponentVec::zero(self.dim()),
            });
        }
        let (normal, shift) = normalize(g)?;
        let value = self.remainder(&normal)?;
        Ok(Residue { value, modulus: self.modulus.clone(), shift })
    }

    pub fn is_zero_mod(&self, g: &LaurentPoly) -> Result<bool> {
        Ok(self.reduce(g)?.is_zero())
    }

    /// Normal form of a polynomial with non-negative exponents, without any
    /// further shifting.
    pub fn remainder(&self, g: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(g)?;
        let max = g.max_exponents().map(|e| e.norm_inf()).unwrap_or_default();
        if max <= BigInt::from(DIRECT_DIVISION_LIMIT) {
            return self.remainder_direct(g);
        }
        // g = sum_r u^r F(h_r) with F the Frobenius map and r the base-p
        // digits; F preserves congruence mod <f>, so reduce each h_r first.
        // Working on whole polynomials lets cancellations happen early.
        let field = self.field();
        let p = BigInt::from(field.p());
        let mut groups: BTreeMap<ExponentVec, BTreeMap<ExponentVec, u64>> = BTreeMap::new();
        for (e, &c) in g.terms() {
            let (q, r): (Vec<BigInt>, Vec<BigInt>) = e.components().iter().map(|x| x.div_mod_floor(&p)).unzip();
            groups.entry(ExponentVec::new(r)).or_default().insert(ExponentVec::new(q), c);
        }
        let mut acc = LaurentPoly::zero(field, self.dim());
        for (r, h) in groups {
            let inner = self.remainder(&LaurentPoly::from_map(field, self.dim(), h))?;
            if inner.is_zero() {
                continue;
            }
            acc = acc.add(&inner.frobenius_power(1).shift(&r)?)?;
        }
        self.remainder_direct(&acc)
    }

    /// Plain multivariate division by the normalized modulus.
    pub fn remainder_direct(&self, g: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(g)?;
        if let Some(min) = g.min_exponents() {
            if !min.dominates(&ExponentVec::zero(self.dim())) {
                return Err(Error::Invalid("remainder requires non-negative exponents".into()));
            }
        }
        let field = self.field();
        let mut work: BTreeMap<OrderKey, u64> =
            g.terms().iter().map(|(e, &c)| (OrderKey(e.clone()), c)).collect();
        let mut rem: BTreeMap<ExponentVec, u64> = BTreeMap::new();
        while let Some((OrderKey(e), c)) = work.pop_last() {
            if e.dominates(&self.lead) {
                let q = &e - &self.lead;
                let factor = field.mul(c, self.lead_inv);
                for (t, tc) in &self.tail {
                    let key = OrderKey(&q + t);
                    let delta = field.mul(factor, *tc);
                    let slot = work.entry(key.clone()).or_insert(0);
                    *slot = field.sub(*slot, delta);
                    if *slot == 0 {
                        work.remove(&key);
                    }
                }
            } else {
                rem.insert(e, c);
            }
        }
        Ok(LaurentPoly::from_map(field, self.dim(), rem))
    }

    /// Normal form of `u^e` for a non-negative exponent vector.
    pub fn monomial_residue(
        &self,
        e: &ExponentVec,
        memo: &mut HashMap<ExponentVec, LaurentPoly>,
    ) -> Result<LaurentPoly> {
        if let Some(hit) = memo.get(e) {
            return Ok(hit.clone());
        }
        let field = self.field();
        let result = if e.norm_inf() <= BigInt::from(DIRECT_DIVISION_LIMIT) {
            self.remainder_direct(&LaurentPoly::monomial(field, e.clone(), 1))?
        } else {
            let p = BigInt::from(field.p());
            let mut quotient = Vec::with_capacity(e.dim());
            let mut rest = Vec::with_capacity(e.dim());
            for c in e.components() {
                let (q, r) = c.div_mod_floor(&p);
                quotient.push(q);
                rest.push(r);
            }
            let inner = self.monomial_residue(&ExponentVec::new(quotient), memo)?;
            let lifted = inner.frobenius_power(1).shift(&ExponentVec::new(rest))?;
            self.remainder_direct(&lifted)?
        };
        memo.insert(e.clone(), result.clone());
        Ok(result)
    }
}

/// Remainder of `g` modulo `<f>` in the Laurent ring.
pub fn reduce(g: &LaurentPoly, f: &LaurentPoly) -> Result<Residue> {
    QuotientRing::new(f)?.reduce(g)
}

pub fn is_zero_mod(g: &LaurentPoly, f: &LaurentPoly) -> Result<bool> {
    QuotientRing::new(f)?.is_zero_mod(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    fn poly(field: FieldSpec, dim: usize, text: &str) -> LaurentPoly {
        LaurentPoly::parse(field, dim, text).unwrap()
    }

    fn ledrappier() -> LaurentPoly {
        poly(f2(), 2, "1 + u1 + u2")
    }

    #[test]
    fn term_order_ranks_u2_over_u1() {
        let a = ExponentVec::from_i64s(&[1, 0]);
        let b = ExponentVec::from_i64s(&[0, 1]);
        assert_eq!(TERM_ORDER.cmp(&b, &a), Ordering::Greater);
        let c = ExponentVec::from_i64s(&[2, 0]);
        assert_eq!(TERM_ORDER.cmp(&c, &b), Ordering::Greater);
        assert_eq!(TERM_ORDER.cmp(&ExponentVec::zero(2), &a), Ordering::Less);
    }

    #[test]
    fn normalize_examples() {
        let (g, s) = normalize(&poly(f2(), 2, "u1^-1 + u2")).unwrap();
        assert_eq!(g, poly(f2(), 2, "1 + u1*u2"));
        assert_eq!(s, ExponentVec::from_i64s(&[-1, 0]));
        let (g, s) = normalize(&poly(f2(), 2, "1 + u1")).unwrap();
        assert_eq!(g, poly(f2(), 2, "1 + u1"));
        assert!(s.is_zero());
        let (g, s) = normalize(&poly(f2(), 2, "u1^3")).unwrap();
        assert_eq!(g, LaurentPoly::one(f2(), 2));
        assert_eq!(s, ExponentVec::from_i64s(&[3, 0]));
        assert_eq!(normalize(&LaurentPoly::zero(f2(), 2)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn reduce_examples() {
        let f = ledrappier();
        assert!(reduce(&f, &f).unwrap().is_zero());
        let uf = f.mul(&poly(f2(), 2, "u1")).unwrap();
        assert!(reduce(&uf, &f).unwrap().is_zero());
        let r = reduce(&poly(f2(), 2, "1 + u1"), &f).unwrap();
        assert_eq!(r.value, poly(f2(), 2, "1 + u1"));
    }

    #[test]
    fn trivial_quotients_rejected() {
        let g = poly(f2(), 2, "1 + u1");
        assert_eq!(reduce(&g, &poly(f2(), 2, "u1")), Err(Error::TrivialQuotient));
        assert_eq!(reduce(&g, &LaurentPoly::zero(f2(), 2)), Err(Error::TrivialQuotient));
    }

    #[test]
    fn is_zero_mod_examples() {
        let f = ledrappier();
        assert!(is_zero_mod(&f.frobenius_power(3), &f).unwrap());
        assert!(!is_zero_mod(&poly(f2(), 2, "1 + u1^3 + u2^3"), &f).unwrap());
        // u2^3 ≡ (1+u1)^3, so 1 + u1^3 + u2^3 ≡ u1 + u1^2
        let r = reduce(&poly(f2(), 2, "1 + u1^3 + u2^3"), &f).unwrap();
        assert_eq!(r.value, poly(f2(), 2, "u1 + u1^2"));
        assert!(is_zero_mod(&LaurentPoly::zero(f2(), 2), &f).unwrap());
    }

    #[test]
    fn ladder_agrees_with_direct_division() {
        let f3 = FieldSpec::new(3).unwrap();
        let fixtures = [ledrappier(), poly(f3, 2, "1 + u1 + u2 + 2*u1*u2"), poly(f2(), 2, "1 + u1 + u1^2 + u2")];
        for f in &fixtures {
            let q = QuotientRing::new(f).unwrap();
            let mut memo = HashMap::new();
            for e in [[60, 0], [0, 61], [50, 13], [81, 2], [7, 70]] {
                let e = ExponentVec::from_i64s(&e);
                let ladder = q.monomial_residue(&e, &mut memo).unwrap();
                let direct = q.remainder_direct(&LaurentPoly::monomial(f.field(), e, 1)).unwrap();
                assert_eq!(ladder, direct, "f = {f}");
            }
        }
    }

    #[test]
    fn huge_frobenius_exponents() {
        let f = ledrappier();
        for k in [12, 20, 40] {
            assert!(is_zero_mod(&f.frobenius_power(k), &f).unwrap());
        }
        let g = poly(f2(), 2, "1 + u1^4097 + u2^4096");
        assert!(!is_zero_mod(&g, &f).unwrap());
    }

    #[test]
    fn remainder_has_no_leading_multiples() {
        let f3 = FieldSpec::new(3).unwrap();
        let f = poly(f3, 2, "1 + u1 + u2 + 2*u1*u2");
        let q = QuotientRing::new(&f).unwrap();
        let r = q.reduce(&poly(f3, 2, "u1^5*u2^4 + 2*u1^2*u2^-3 + u2^7")).unwrap();
        for e in r.value.terms().keys() {
            assert!(!e.dominates(q.leading_exponent()));
        }
    }
}

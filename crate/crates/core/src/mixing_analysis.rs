//! Mixing-order bounds from the Newton polytope, Frobenius non-mixing
//! certificates, relation checks along sequences, and a bounded search for
//! small relations.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fp_laurent::{ExponentVec, FieldSpec, LaurentPoly};
use crate::linalg::fp_rank;
use crate::newton_polytope::hull;
use crate::parallel_redraw::{redraw_space, Skeleton};
use crate::quotient_ring::QuotientRing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tightness {
    Tight,
    NotTight,
    /// Face structure is only analysed up to affine dimension 3.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conclusion {
    /// Lower and upper bound coincide: `M = S = value`.
    Exact { value: usize, text: String },
    /// Tight polytope: `M = S`, common value in the range.
    Equal { lower: usize, upper: usize, text: String },
    /// Only the chain `lower ≤ M ≤ S ≤ upper` is known.
    Bounded { lower: usize, upper: usize, text: String },
}

impl Conclusion {
    pub fn text(&self) -> &str {
        match self {
            Conclusion::Exact { text, .. } | Conclusion::Equal { text, .. } | Conclusion::Bounded { text, .. } => text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixingBounds {
    pub vertex_count: usize,
    pub support_size: usize,
    pub affine_dim: usize,
    pub lower: usize,
    pub upper: usize,
    pub polytope_tight: Tightness,
    pub conclusion: Conclusion,
}

/// Bounds `v - 1 ≤ M ≤ S ≤ |S(f)| - 1`, sharpened to `M = S` when the
/// Newton polytope is tight. Irreducibility of `f` is the caller's claim.
pub fn mixing_bounds(f: &LaurentPoly) -> Result<MixingBounds> {
    if f.is_zero() || f.is_monomial() {
        return Err(Error::TrivialQuotient);
    }
    let support = f.support();
    let poly = hull(&support)?;
    let vertex_count = poly.vertex_count();
    let support_size = support.len();
    let tight = if poly.affine_dim <= 3 {
        if redraw_space(&Skeleton::from_polytope(&poly)?)?.tight {
            Tightness::Tight
        } else {
            Tightness::NotTight
        }
    } else {
        Tightness::Undetermined
    };
    let (lower, upper) = (vertex_count - 1, support_size - 1);
    let conclusion = if lower == upper {
        Conclusion::Exact { value: lower, text: format!("M=S={lower}") }
    } else if tight == Tightness::Tight {
        Conclusion::Equal { lower, upper, text: format!("M=S, common value in [{lower},{upper}]") }
    } else {
        Conclusion::Bounded { lower, upper, text: format!("{lower} <= M <= S <= {upper}") }
    };
    Ok(MixingBounds {
        vertex_count,
        support_size,
        affine_dim: poly.affine_dim,
        lower,
        upper,
        polytope_tight: tight,
        conclusion,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    /// The relation holds for every dilation `p^k`.
    Certified,
    /// Only the listed dilations were checked.
    Candidate,
}

/// A shape with coefficients whose dilated relation vanishes in the quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeCertificate {
    pub shape: Vec<ExponentVec>,
    #[serde(rename = "coeffs", serialize_with = "coefficients_json")]
    pub coefficients: Vec<LaurentPoly>,
    /// Exponents `k` for which the relation at dilation `p^k` was verified.
    pub verified_k: Vec<u32>,
    pub frobenius_family: bool,
    pub status: CertificateStatus,
}

/// Constants as numbers, other coefficients as polynomial strings.
fn coefficients_json<S: Serializer>(cs: &[LaurentPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
    let vals: Vec<serde_json::Value> = cs
        .iter()
        .map(|c| {
            let zero = ExponentVec::zero(c.dim());
            if c.num_terms() == 1 && c.coeff(&zero) != 0 {
                serde_json::Value::from(c.coeff(&zero))
            } else {
                serde_json::Value::from(c.to_string())
            }
        })
        .collect();
    vals.serialize(s)
}

/// `sum_i a_i u^{k n_i}`.
fn relation_poly(field: FieldSpec, dim: usize, coeffs: &[LaurentPoly], points: &[ExponentVec]) -> Result<LaurentPoly> {
    let mut g = LaurentPoly::zero(field, dim);
    for (a, n) in coeffs.iter().zip(points) {
        g = g.add(&a.shift(n)?)?;
    }
    Ok(g)
}

/// Verifies `sum_n c_n u^{p^k n} ≡ 0 mod <f>` for `k = 0..=k_max`.
pub fn frobenius_certificate(f: &LaurentPoly, k_max: u32) -> Result<ShapeCertificate> {
    let ring = QuotientRing::new(f)?;
    let field = f.field();
    let (shape, coefficients): (Vec<ExponentVec>, Vec<LaurentPoly>) = f
        .terms()
        .iter()
        .map(|(e, &c)| (e.clone(), LaurentPoly::monomial(field, ExponentVec::zero(f.dim()), c)))
        .unzip();
    let mut verified_k = Vec::new();
    for k in 0..=k_max {
        if !ring.is_zero_mod(&f.frobenius_power(k))? {
            return Err(Error::Internal(format!("Frobenius relation fails at k = {k}")));
        }
        verified_k.push(k);
    }
    Ok(ShapeCertificate { shape, coefficients, verified_k, frobenius_family: true, status: CertificateStatus::Certified })
}

/// Where the tuples of a relation come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleSource {
    /// Tuple `j` (1-based) is the `j`-th entry.
    Explicit(Vec<Vec<ExponentVec>>),
    /// Tuple `j` is `base^j · shape`.
    Dilation { shape: Vec<ExponentVec>, base: BigInt },
}

/// Coefficients `a_1..a_r` with tuples `n^{(j)}`, asserting
/// `sum_i a_i u^{n_i^{(j)}} = 0` in the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceRelation {
    coefficients: Vec<LaurentPoly>,
    tuples: TupleSource,
}

impl SequenceRelation {
    pub fn new(f: &LaurentPoly, coefficients: Vec<LaurentPoly>, tuples: TupleSource) -> Result<Self> {
        let ring = QuotientRing::new(f)?;
        if coefficients.is_empty() {
            return Err(Error::Invalid("relation needs at least one coefficient".into()));
        }
        for a in &coefficients {
            if a.field() != f.field() {
                return Err(Error::FieldMismatch(f.field().p(), a.field().p()));
            }
            if ring.is_zero_mod(a)? {
                return Err(Error::Invalid(format!("coefficient {a} vanishes in the quotient")));
            }
        }
        let r = coefficients.len();
        let check = |t: &[ExponentVec]| -> Result<()> {
            if t.len() != r {
                return Err(Error::Invalid(format!("tuple has {} points, relation has {r} coefficients", t.len())));
            }
            t.iter().try_for_each(|n| n.check_dim(f.dim()))
        };
        match &tuples {
            TupleSource::Explicit(ts) => ts.iter().try_for_each(|t| check(t))?,
            TupleSource::Dilation { shape, base } => {
                check(shape)?;
                if *base <= BigInt::one() {
                    return Err(Error::Invalid("dilation base must exceed 1".into()));
                }
            }
        }
        Ok(SequenceRelation { coefficients, tuples })
    }

    /// The relation `k ↦ p^k · S(f)` with coefficients `c_{f,n}`.
    pub fn frobenius(f: &LaurentPoly) -> Result<Self> {
        let zero = ExponentVec::zero(f.dim());
        let (shape, coefficients) =
            f.terms().iter().map(|(e, &c)| (e.clone(), LaurentPoly::monomial(f.field(), zero.clone(), c))).unzip();
        Self::new(f, coefficients, TupleSource::Dilation { shape, base: BigInt::from(f.field().p()) })
    }

    pub fn r(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[LaurentPoly] {
        &self.coefficients
    }

    pub fn tuple(&self, j: u64) -> Result<Vec<ExponentVec>> {
        match &self.tuples {
            TupleSource::Explicit(ts) => usize::try_from(j)
                .ok()
                .and_then(|j| j.checked_sub(1))
                .and_then(|i| ts.get(i))
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("no tuple with index {j}"))),
            TupleSource::Dilation { shape, base } => {
                let factor = base.pow(u32::try_from(j).map_err(|_| Error::Invalid("index too large".into()))?);
                Ok(shape.iter().map(|n| n.scale(&factor)).collect())
            }
        }
    }

    /// Smallest sup-norm distance between two points of each tuple.
    pub fn separations(&self, js: RangeInclusive<u64>) -> Result<Vec<Option<BigInt>>> {
        js.map(|j| {
            let t = self.tuple(j)?;
            let mut best: Option<BigInt> = None;
            for a in 0..t.len() {
                for b in a + 1..t.len() {
                    let d = (&t[a] - &t[b]).norm_inf();
                    if best.as_ref().is_none_or(|x| d < *x) {
                        best = Some(d);
                    }
                }
            }
            Ok(best)
        })
        .collect()
    }

    /// Pairwise separations strictly increase across the range.
    pub fn moves_apart(&self, js: RangeInclusive<u64>) -> Result<bool> {
        let seps = self.separations(js)?;
        Ok(seps.windows(2).all(|w| match (&w[0], &w[1]) {
            (Some(a), Some(b)) => b > a,
            _ => true,
        }))
    }
}

/// Evaluates the relation at each index of the range.
pub fn check_relation(rel: &SequenceRelation, f: &LaurentPoly, js: RangeInclusive<u64>) -> Result<Vec<(u64, bool)>> {
    let ring = QuotientRing::new(f)?;
    for a in &rel.coefficients {
        if a.field() != f.field() {
            return Err(Error::FieldMismatch(f.field().p(), a.field().p()));
        }
        if a.dim() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), found: a.dim() });
        }
    }
    js.map(|j| {
        let t = rel.tuple(j)?;
        let g = relation_poly(f.field(), f.dim(), &rel.coefficients, &t)?;
        Ok((j, ring.is_zero_mod(&g)?))
    })
    .collect()
}

fn box_points(dim: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|v| (lo..=hi).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Coefficient vectors over `m` slots, all entries in `F_p`; the first
/// nonzero entry is 1 when `monic`.
fn coefficient_vectors(p: u64, m: usize, monic: bool) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let total = (p as u128).pow(m as u32);
    for code in 1..total {
        let mut c = code;
        let v: Vec<u64> = (0..m)
            .map(|_| {
                let d = (c % p as u128) as u64;
                c /= p as u128;
                d
            })
            .collect();
        if monic && v.iter().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        out.push(v);
    }
    out
}

/// Brute-force search for `r`-point shapes in `[-R, R]^d` (translated so the
/// lexicographically smallest point is 0) with coefficients supported on
/// `[0, D]^d` such that `sum_i a_i u^{k n_i} ≡ 0` for `k ∈ {1, p, p^2}`.
/// Surviving shapes are candidates unless they are a translate of `S(f)`
/// with coefficients proportional to those of `f`.
pub fn search_relations(
    f: &LaurentPoly,
    r: usize,
    shape_radius: u32,
    coeff_degree_bound: u32,
    budget: &Budget,
) -> Result<Vec<ShapeCertificate>> {
    let ring = QuotientRing::new(f)?;
    if r < 2 {
        return Err(Error::Invalid("relation search needs r >= 2".into()));
    }
    let field = f.field();
    let p = field.p();
    let d = f.dim();
    let radius = shape_radius as i64;
    let origin = vec![0i64; d];
    let others: Vec<Vec<i64>> = box_points(d, -radius, radius).into_iter().filter(|v| *v > origin).collect();
    let monomials: Vec<Vec<i64>> = box_points(d, 0, coeff_degree_bound as i64);
    let slots = monomials.len();

    // count before doing any work
    let n_shapes = binomial(others.len() as u128, (r - 1) as u128);
    let per_slot = (p as u128).saturating_pow(slots as u32);
    let n_coeffs = per_slot.saturating_sub(1).saturating_mul(per_slot.saturating_sub(1).saturating_pow(r as u32 - 1));
    let candidates = n_shapes.saturating_mul(n_coeffs);
    if candidates > budget.search as u128 {
        return Err(Error::BudgetExceeded(format!(
            "{candidates} candidate relations exceed the search budget {}",
            budget.search
        )));
    }

    let to_poly = |v: &[u64]| -> LaurentPoly {
        let terms: BTreeMap<ExponentVec, u64> = monomials
            .iter()
            .zip(v)
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (ExponentVec::from_i64s(e), c))
            .collect();
        LaurentPoly::make_poly(field, d, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))).expect("valid terms")
    };
    let nonzero_in_quotient = |v: &[u64]| -> Result<bool> { Ok(!ring.is_zero_mod(&to_poly(v))?) };
    let firsts: Vec<Vec<u64>> =
        coefficient_vectors(p, slots, true).into_iter().filter_map(|v| nonzero_in_quotient(&v).map(|ok| ok.then_some(v)).transpose()).collect::<Result<_>>()?;
    let rests: Vec<Vec<u64>> =
        coefficient_vectors(p, slots, false).into_iter().filter_map(|v| nonzero_in_quotient(&v).map(|ok| ok.then_some(v)).transpose()).collect::<Result<_>>()?;

    let dilations: [u32; 3] = [0, 1, 2];
    let (f_shape, f_coeffs): (Vec<ExponentVec>, Vec<u64>) = f.terms().iter().map(|(e, &c)| (e.clone(), c)).unzip();
    let mut found = Vec::new();
    for combo in combinations(others.len(), r - 1) {
        let mut shape = vec![ExponentVec::from_i64s(&origin)];
        shape.extend(combo.iter().map(|&i| ExponentVec::from_i64s(&others[i])));
        // residue vectors of u^{k n_i + e}, one block per dilation
        let mut blocks: Vec<Vec<Vec<Vec<u64>>>> = Vec::new();
        for &kexp in &dilations {
            let k = BigInt::from(p).pow(kexp);
            let points: Vec<ExponentVec> = shape
                .iter()
                .flat_map(|n| monomials.iter().map(|e| &n.scale(&k) + &ExponentVec::from_i64s(e)).collect::<Vec<_>>())
                .collect();
            let low = ExponentVec::new(
                (0..d).map(|i| points.iter().map(|q| q.components()[i].clone()).min().unwrap_or_default()).collect(),
            );
            let mut memo = HashMap::new();
            let mut keys: BTreeMap<ExponentVec, usize> = BTreeMap::new();
            let mut residues = Vec::with_capacity(points.len());
            for q in &points {
                let res = ring.monomial_residue(&(q - &low), &mut memo)?;
                for e in res.terms().keys() {
                    let next = keys.len();
                    keys.entry(e.clone()).or_insert(next);
                }
                residues.push(res);
            }
            let dense: Vec<Vec<u64>> = residues
                .iter()
                .map(|res| {
                    let mut v = vec![0u64; keys.len()];
                    for (e, &c) in res.terms() {
                        v[keys[e]] = c;
                    }
                    v
                })
                .collect();
            blocks.push(dense.chunks(slots).map(<[Vec<u64>]>::to_vec).collect());
        }
        // quick necessary check: the residue vectors must be dependent
        let all_rows: Vec<Vec<u64>> = blocks[0].iter().flatten().cloned().collect();
        let width = all_rows.first().map(Vec::len).unwrap_or(0);
        if width > 0 && fp_rank(&all_rows, width, field) == all_rows.len() {
            continue;
        }
        let vanishes = |choice: &[&Vec<u64>]| -> bool {
            blocks.iter().all(|block| {
                let width = block[0][0].len();
                let mut acc = vec![0u64; width];
                for (i, a) in choice.iter().enumerate() {
                    for (s, &c) in a.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for (x, &y) in acc.iter_mut().zip(&block[i][s]) {
                            *x = field.add(*x, field.mul(c, y));
                        }
                    }
                }
                acc.iter().all(Zero::is_zero)
            })
        };
        let mut choice: Vec<&Vec<u64>> = Vec::with_capacity(r);
        let mut idx = vec![0usize; r];
        'outer: loop {
            choice.clear();
            choice.push(&firsts[idx[0]]);
            for i in 1..r {
                choice.push(&rests[idx[i]]);
            }
            if vanishes(&choice) {
                let coefficients: Vec<LaurentPoly> = choice.iter().map(|v| to_poly(v)).collect();
                let frobenius_family = is_frobenius_pattern(&shape, &coefficients, &f_shape, &f_coeffs, field);
                found.push(ShapeCertificate {
                    shape: shape.clone(),
                    coefficients,
                    verified_k: dilations.to_vec(),
                    frobenius_family,
                    status: if frobenius_family { CertificateStatus::Certified } else { CertificateStatus::Candidate },
                });
            }
            // odometer over (firsts, rests, rests, ...)
            for i in (0..r).rev() {
                idx[i] += 1;
                let limit = if i == 0 { firsts.len() } else { rests.len() };
                if idx[i] < limit {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
    }
    Ok(found)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Shape is a translate of `S(f)` and the constant coefficients are a
/// common multiple of `f`'s.
fn is_frobenius_pattern(
    shape: &[ExponentVec],
    coeffs: &[LaurentPoly],
    f_shape: &[ExponentVec],
    f_coeffs: &[u64],
    field: FieldSpec,
) -> bool {
    if shape.len() != f_shape.len() {
        return false;
    }
    let zero = ExponentVec::zero(shape[0].dim());
    let mut scalars = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if c.num_terms() != 1 || c.coeff(&zero) == 0 {
            return false;
        }
        scalars.push(c.coeff(&zero));
    }
    let mut mine: Vec<(ExponentVec, u64)> = shape.iter().cloned().zip(scalars).collect();
    mine.sort();
    let mut theirs: Vec<(ExponentVec, u64)> = f_shape.iter().cloned().zip(f_coeffs.iter().copied()).collect();
    theirs.sort();
    let offset = &mine[0].0 - &theirs[0].0;
    let ratio = field.mul(mine[0].1, field.inv(theirs[0].1));
    mine.iter().zip(&theirs).all(|((a, ca), (b, cb))| &(b + &offset) == a && field.mul(*cb, ratio) == *ca)
}

//! Exact Haar measure of cylinder events in the shift space
//! `X_f = { x : Z^d -> F_p | sum_n c_n x(m + n) = 0 for all m }`.
//!
//! The restriction of `X_f` to a finite window `W` is a linear subspace
//! `V_W` of `F_p^W`, and Haar measure pushes forward to the uniform measure
//! on it, so a cylinder has measure `p^{-dim V_W}` or `0`. Two ways of
//! getting `V_W` are provided:
//!
//! * [`cylinder_measure`] works through the dual: a linear functional
//!   `b` vanishes on `V_W` exactly when `sum_w b_w u^w` lies in `<f>`, so
//!   `dim V_W` is the rank of the residues of the window monomials. This is
//!   exact and independent of how far apart the window points are.
//! * [`cylinder_measure_boxed`] solves the constraints on a finite box
//!   around the window and grows it until the projected dimension settles.
//!   It is a local approximation (an upper bound on `dim V_W` that can
//!   only decrease) and serves as a cross-check.
//!
//! Shifts act by `(α^n x)(m) = x(m + n)`, so `α^{-n}` of a cylinder on `W`
//! is the same cylinder on `W + n`.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fp_laurent::{ExponentVec, FieldSpec, LaurentPoly};
use crate::fraction::Fraction;
use crate::linalg::fp_nullspace;
use crate::quotient_ring::{normalize, QuotientRing};

/// Configurations fixed on a finite window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderSpec {
    pub window: Vec<ExponentVec>,
    pub values: Vec<u64>,
}

impl CylinderSpec {
    pub fn new(window: Vec<ExponentVec>, values: Vec<u64>) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::Invalid("cylinder window is empty".into()));
        }
        if window.len() != values.len() {
            return Err(Error::Invalid(format!(
                "window has {} points but {} values",
                window.len(),
                values.len()
            )));
        }
        let dim = window[0].dim();
        let mut seen = HashSet::new();
        for w in &window {
            w.check_dim(dim)?;
            if !seen.insert(w) {
                return Err(Error::Invalid(format!("window point {w} repeated")));
            }
        }
        Ok(CylinderSpec { window, values })
    }

    pub fn single(point: ExponentVec, value: u64) -> Self {
        CylinderSpec { window: vec![point], values: vec![value] }
    }

    pub fn dim(&self) -> usize {
        self.window.first().map(ExponentVec::dim).unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn translate(&self, m: &ExponentVec) -> CylinderSpec {
        CylinderSpec { window: self.window.iter().map(|w| w + m).collect(), values: self.values.clone() }
    }

    fn check_against(&self, f: &LaurentPoly) -> Result<()> {
        let again = CylinderSpec::new(self.window.clone(), self.values.clone())?;
        if again.dim() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), found: again.dim() });
        }
        let p = f.field().p();
        if let Some(v) = self.values.iter().find(|&&v| v >= p) {
            return Err(Error::Invalid(format!("value {v} is not a residue mod {p}")));
        }
        Ok(())
    }
}

/// Measure values are always `0` or `p^{-m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureValue {
    Zero,
    Power { p: u64, m: u32 },
}

impl MeasureValue {
    pub fn to_fraction(self) -> Fraction {
        match self {
            MeasureValue::Zero => Fraction::zero(),
            MeasureValue::Power { p, m } => Fraction::new(1, BigInt::from(p).pow(m)),
        }
    }

    /// From an exact ratio `matching / total`, which must be `0` or `p^{-m}`.
    pub fn from_counts(p: u64, matching: u64, total: u64) -> Result<Self> {
        if matching == 0 {
            return Ok(MeasureValue::Zero);
        }
        if !total.is_multiple_of(matching) {
            return Err(Error::Internal(format!("ratio {matching}/{total} is not a power of 1/{p}")));
        }
        let mut q = total / matching;
        let mut m = 0;
        while q > 1 {
            if !q.is_multiple_of(p) {
                return Err(Error::Internal(format!("ratio {matching}/{total} is not a power of 1/{p}")));
            }
            q /= p;
            m += 1;
        }
        Ok(MeasureValue::Power { p, m })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Residue rank in the quotient ring; exact.
    Duality,
    /// Finite box grown around the window.
    Box,
    /// Enumeration of every configuration on a box.
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasureResult {
    #[serde(serialize_with = "value_json")]
    pub value: MeasureValue,
    /// Dimension of the window's projected configuration space.
    pub projected_dimension: usize,
    pub method: Method,
    pub box_margin_used: Option<u64>,
    pub stabilized: bool,
    /// Projected dimension at each box size tried (box method only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dimension_trace: Vec<usize>,
}

fn value_json<S: serde::Serializer>(v: &MeasureValue, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.to_fraction().serialize(s)
}

impl MeasureResult {
    pub fn fraction(&self) -> Fraction {
        self.value.to_fraction()
    }

    fn exact(value: MeasureValue, projected_dimension: usize) -> Self {
        MeasureResult {
            value,
            projected_dimension,
            method: Method::Duality,
            box_margin_used: None,
            stabilized: true,
            dimension_trace: Vec::new(),
        }
    }
}

fn value_for(field: FieldSpec, annihilator: &[Vec<u64>], values: &[u64], projected: usize) -> MeasureValue {
    let consistent = annihilator.iter().all(|b| {
        b.iter().zip(values).fold(0u64, |acc, (&x, &y)| field.add(acc, field.mul(x, y))) == 0
    });
    if consistent {
        MeasureValue::Power { p: field.p(), m: projected as u32 }
    } else {
        MeasureValue::Zero
    }
}

/// Basis of the linear functionals on `F_p^W` vanishing on `X_f` restricted
/// to `W`, i.e. coefficient vectors `b` with `sum_w b_w u^w ∈ <f>`.
pub fn window_annihilator(ring: &QuotientRing, window: &[ExponentVec]) -> Result<Vec<Vec<u64>>> {
    let Some(first) = window.first() else { return Ok(Vec::new()) };
    let mut low: Vec<BigInt> = first.components().to_vec();
    for w in window {
        w.check_dim(ring.dim())?;
        for (l, c) in low.iter_mut().zip(w.components()) {
            if c < l {
                *l = c.clone();
            }
        }
    }
    let low = ExponentVec::new(low);
    let mut memo = HashMap::new();
    let mut rows: BTreeMap<ExponentVec, Vec<u64>> = BTreeMap::new();
    for (j, w) in window.iter().enumerate() {
        let res = ring.monomial_residue(&(w - &low), &mut memo)?;
        for (e, &c) in res.terms() {
            rows.entry(e.clone()).or_insert_with(|| vec![0; window.len()])[j] = c;
        }
    }
    let rows: Vec<Vec<u64>> = rows.into_values().collect();
    Ok(fp_nullspace(&rows, window.len(), ring.field()))
}

/// Exact Haar measure of a cylinder.
pub fn cylinder_measure(f: &LaurentPoly, cyl: &CylinderSpec) -> Result<MeasureResult> {
    let ring = QuotientRing::new(f)?;
    cylinder_measure_in(&ring, cyl)
}

pub fn cylinder_measure_in(ring: &QuotientRing, cyl: &CylinderSpec) -> Result<MeasureResult> {
    cyl.check_against(ring.modulus())?;
    let ann = window_annihilator(ring, &cyl.window)?;
    let projected = cyl.len() - ann.len();
    Ok(MeasureResult::exact(value_for(ring.field(), &ann, &cyl.values, projected), projected))
}

/// Merges the translated cylinders `α^{-n}(A)`; `None` on conflicting values.
pub fn merge_events(events: &[(ExponentVec, CylinderSpec)]) -> Result<Option<CylinderSpec>> {
    let mut merged: BTreeMap<ExponentVec, u64> = BTreeMap::new();
    for (shift, cyl) in events {
        for (w, &v) in cyl.window.iter().zip(&cyl.values) {
            let at = w + shift;
            if let Some(&old) = merged.get(&at) {
                if old != v {
                    return Ok(None);
                }
            } else {
                merged.insert(at, v);
            }
        }
    }
    let (window, values) = merged.into_iter().unzip();
    CylinderSpec::new(window, values).map(Some)
}

/// Measure of the intersection of the shifted cylinders.
pub fn joint_measure(f: &LaurentPoly, events: &[(ExponentVec, CylinderSpec)]) -> Result<MeasureResult> {
    let ring = QuotientRing::new(f)?;
    joint_measure_in(&ring, events)
}

pub fn joint_measure_in(ring: &QuotientRing, events: &[(ExponentVec, CylinderSpec)]) -> Result<MeasureResult> {
    if events.is_empty() {
        return Err(Error::Invalid("no events".into()));
    }
    for (shift, cyl) in events {
        shift.check_dim(ring.dim())?;
        cyl.check_against(ring.modulus())?;
    }
    match merge_events(events)? {
        Some(cyl) => cylinder_measure_in(ring, &cyl),
        None => Ok(MeasureResult::exact(MeasureValue::Zero, 0)),
    }
}

/// The shifts used at each row of an experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Dilations `k · shape` for each listed `k`.
    Shape { shape: Vec<ExponentVec>, ks: Vec<i64> },
    /// Explicit tuples, indexed from 1.
    Tuples(Vec<Vec<ExponentVec>>),
}

impl Family {
    fn rows(&self) -> Vec<(i64, Vec<ExponentVec>)> {
        match self {
            Family::Shape { shape, ks } => {
                ks.iter().map(|&k| (k, shape.iter().map(|n| n.scale(&BigInt::from(k))).collect())).collect()
            }
            Family::Tuples(ts) => ts.iter().enumerate().map(|(j, t)| (j as i64 + 1, t.clone())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub k: i64,
    pub shifts: Vec<ExponentVec>,
    pub joint: Fraction,
    pub product: Fraction,
    pub gap: Fraction,
}

/// Joint measure versus product of marginals along a family of shifts.
/// `cylinders` holds either one cylinder per shift or a single cylinder
/// used at every shift.
pub fn mixing_experiment(f: &LaurentPoly, family: &Family, cylinders: &[CylinderSpec]) -> Result<Vec<ExperimentRow>> {
    let ring = QuotientRing::new(f)?;
    let mut out = Vec::new();
    for (k, shifts) in family.rows() {
        let cyls: Vec<&CylinderSpec> = match cylinders.len() {
            1 => vec![&cylinders[0]; shifts.len()],
            n if n == shifts.len() => cylinders.iter().collect(),
            n => {
                return Err(Error::Invalid(format!("{n} cylinders for {} shifts", shifts.len())));
            }
        };
        let events: Vec<(ExponentVec, CylinderSpec)> =
            shifts.iter().cloned().zip(cyls.iter().map(|c| (*c).clone())).collect();
        let joint = joint_measure_in(&ring, &events)?.fraction();
        let mut product = Fraction::one();
        for c in &cyls {
            product = Fraction(product.0 * cylinder_measure_in(&ring, c)?.fraction().0);
        }
        let gap = Fraction(&joint.0 - &product.0);
        out.push(ExperimentRow { k, shifts, joint, product, gap });
    }
    Ok(out)
}

/// Axis-aligned box `lo ≤ x ≤ hi` of lattice cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl LatticeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::Invalid("box has an empty side".into()));
        }
        Ok(LatticeBox { lo, hi })
    }

    /// Smallest box containing the points, padded by `margin`.
    pub fn around(points: &[ExponentVec], margin: i64) -> Result<Self> {
        let first = points.first().ok_or_else(|| Error::Invalid("no points".into()))?;
        let small = |p: &ExponentVec| p.to_i64s().ok_or_else(|| Error::Invalid(format!("point {p} is too large for a box")));
        let mut lo = small(first)?;
        let mut hi = lo.clone();
        for p in points {
            for (i, x) in small(p)?.into_iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        LatticeBox::new(lo.iter().map(|x| x - margin).collect(), hi.iter().map(|x| x + margin).collect())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Number of cells, saturating.
    pub fn cells(&self) -> u128 {
        self.lo.iter().zip(&self.hi).fold(1u128, |acc, (a, b)| acc.saturating_mul((b - a + 1) as u128))
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.dim() && p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (a, b))| a <= x && x <= b)
    }

    /// Cells with the last coordinate most significant.
    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = vec![vec![]];
        for i in 0..self.dim() {
            out = (self.lo[i]..=self.hi[i]).flat_map(|x| out.iter().map(move |v| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }
}

/// Incremental sparse row echelon form over `F_p`, keyed by leading column.
struct SparseEchelon {
    field: FieldSpec,
    rows: BTreeMap<usize, Vec<(usize, u64)>>,
}

impl SparseEchelon {
    fn new(field: FieldSpec) -> Self {
        SparseEchelon { field, rows: BTreeMap::new() }
    }

    fn insert(&mut self, mut row: Vec<(usize, u64)>) {
        let f = self.field;
        loop {
            let Some(&(lead, c)) = row.first() else { return };
            match self.rows.get(&lead) {
                Some(pivot) => {
                    let mut out = Vec::with_capacity(row.len() + pivot.len());
                    let (mut i, mut j) = (0, 0);
                    while i < row.len() || j < pivot.len() {
                        let take_row = j == pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
                        let take_piv = i == row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
                        if take_row {
                            out.push(row[i]);
                            i += 1;
                        } else if take_piv {
                            out.push((pivot[j].0, f.neg(f.mul(c, pivot[j].1))));
                            j += 1;
                        } else {
                            let v = f.sub(row[i].1, f.mul(c, pivot[j].1));
                            if v != 0 {
                                out.push((row[i].0, v));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    row = out;
                }
                None => {
                    let inv = f.inv(c);
                    for e in row.iter_mut() {
                        e.1 = f.mul(e.1, inv);
                    }
                    self.rows.insert(lead, row);
                    return;
                }
            }
        }
    }
}

/// Constraint system of `X_f` on a box, with chosen cells ordered last.
struct BoxSystem {
    cells: Vec<Vec<i64>>,
    echelon: SparseEchelon,
}

fn box_system(f: &LaurentPoly, bx: &LatticeBox, last: &[Vec<i64>], budget: &Budget) -> Result<BoxSystem> {
    if bx.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: bx.dim() });
    }
    if f.is_zero() || f.is_monomial() {
        return Err(Error::TrivialQuotient);
    }
    if bx.cells() > budget.cells as u128 {
        return Err(Error::BudgetExceeded(format!("box has {} cells, budget is {}", bx.cells(), budget.cells)));
    }
    let (g, _) = normalize(f)?;
    let support: Vec<(Vec<i64>, u64)> = g
        .terms()
        .iter()
        .map(|(e, &c)| e.to_i64s().map(|v| (v, c)).ok_or_else(|| Error::Invalid("support too large for a box".into())))
        .collect::<Result<_>>()?;
    let span: Vec<i64> = (0..f.dim()).map(|i| support.iter().map(|(e, _)| e[i]).max().unwrap_or(0)).collect();
    let last_set: HashSet<&Vec<i64>> = last.iter().collect();
    let mut cells: Vec<Vec<i64>> = bx.points().into_iter().filter(|p| !last_set.contains(p)).collect();
    for p in last {
        if !bx.contains(p) {
            return Err(Error::Invalid(format!("window cell {p:?} lies outside the box")));
        }
        cells.push(p.clone());
    }
    let index: HashMap<&Vec<i64>, usize> = cells.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut echelon = SparseEchelon::new(f.field());
    let inner_hi: Vec<i64> = bx.hi.iter().zip(&span).map(|(h, s)| h - s).collect();
    if bx.lo.iter().zip(&inner_hi).all(|(a, b)| a <= b) {
        let anchors = LatticeBox { lo: bx.lo.clone(), hi: inner_hi };
        for m in anchors.points() {
            let mut row: Vec<(usize, u64)> = support
                .iter()
                .map(|(e, c)| {
                    let cell: Vec<i64> = m.iter().zip(e).map(|(a, b)| a + b).collect();
                    (index[&cell], *c)
                })
                .collect();
            row.sort_unstable();
            echelon.insert(row);
        }
    }
    Ok(BoxSystem { cells, echelon })
}

/// Solutions of the constraints that fit entirely inside a box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionSpace {
    /// Cells of the box, last coordinate most significant.
    pub cells: Vec<Vec<i64>>,
    /// Basis vectors, each indexed like `cells`.
    pub basis: Vec<Vec<u64>>,
}

impl SolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn solution_space(f: &LaurentPoly, bx: &LatticeBox, budget: &Budget) -> Result<SolutionSpace> {
    let sys = box_system(f, bx, &[], budget)?;
    let field = f.field();
    let n = sys.cells.len();
    let free: Vec<usize> = (0..n).filter(|c| !sys.echelon.rows.contains_key(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut x = vec![0u64; n];
        x[fc] = 1;
        for (&lead, row) in sys.echelon.rows.iter().rev() {
            let s = row[1..].iter().fold(0u64, |acc, &(c, v)| field.add(acc, field.mul(v, x[c])));
            x[lead] = field.neg(s);
        }
        basis.push(x);
    }
    Ok(SolutionSpace { cells: sys.cells, basis })
}

/// Dimensions of the box solution space and of its projection to a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxProjection {
    pub solution_dimension: usize,
    pub projected_dimension: usize,
    pub consistent: bool,
}

pub fn box_projection(f: &LaurentPoly, cyl: &CylinderSpec, bx: &LatticeBox, budget: &Budget) -> Result<BoxProjection> {
    cyl.check_against(f)?;
    let window: Vec<Vec<i64>> = cyl
        .window
        .iter()
        .map(|w| w.to_i64s().ok_or_else(|| Error::Invalid(format!("window point {w} is too large for a box"))))
        .collect::<Result<_>>()?;
    let sys = box_system(f, bx, &window, budget)?;
    let n = sys.cells.len();
    let first_window = n - window.len();
    let field = f.field();
    let annihilator: Vec<Vec<u64>> = sys
        .echelon
        .rows
        .range(first_window..)
        .map(|(_, row)| {
            let mut b = vec![0u64; window.len()];
            for &(c, v) in row {
                b[c - first_window] = v;
            }
            b
        })
        .collect();
    let projected = window.len() - annihilator.len();
    let consistent = value_for(field, &annihilator, &cyl.values, projected) != MeasureValue::Zero;
    Ok(BoxProjection { solution_dimension: n - sys.echelon.rows.len(), projected_dimension: projected, consistent })
}

/// Box-growth estimate: start with a margin equal to the diameter of the
/// support and widen by one cell per step until the projected dimension is
/// unchanged over two consecutive steps, or the cell budget runs out (then
/// `stabilized` is false and the last value is reported).
pub fn cylinder_measure_boxed(f: &LaurentPoly, cyl: &CylinderSpec, budget: &Budget) -> Result<MeasureResult> {
    cyl.check_against(f)?;
    let (g, _) = normalize(f)?;
    let diameter = g
        .max_exponents()
        .map(|e| e.norm_inf())
        .and_then(|d| d.to_i64())
        .ok_or_else(|| Error::Invalid("support too large for a box".into()))?;
    let mut margin = diameter;
    let mut trace: Vec<usize> = Vec::new();
    let mut last: Option<BoxProjection> = None;
    loop {
        let bx = LatticeBox::around(&cyl.window, margin)?;
        if bx.cells() > budget.cells as u128 {
            let Some(proj) = last else {
                return Err(Error::BudgetExceeded(format!(
                    "smallest box around the window has {} cells, budget is {}",
                    bx.cells(),
                    budget.cells
                )));
            };
            return Ok(boxed_result(f.field(), &proj, margin - 1, false, trace));
        }
        let proj = box_projection(f, cyl, &bx, budget)?;
        if let Some(&prev) = trace.last() {
            if proj.projected_dimension > prev {
                return Err(Error::Internal("projected dimension grew with the box".into()));
            }
        }
        trace.push(proj.projected_dimension);
        let n = trace.len();
        if n >= 3 && trace[n - 1] == trace[n - 2] && trace[n - 2] == trace[n - 3] {
            return Ok(boxed_result(f.field(), &proj, margin, true, trace));
        }
        last = Some(proj);
        margin += 1;
    }
}

fn boxed_result(field: FieldSpec, proj: &BoxProjection, margin: i64, stabilized: bool, trace: Vec<usize>) -> MeasureResult {
    let value = if proj.consistent {
        MeasureValue::Power { p: field.p(), m: proj.projected_dimension as u32 }
    } else {
        MeasureValue::Zero
    };
    MeasureResult {
        value,
        projected_dimension: proj.projected_dimension,
        method: Method::Box,
        box_margin_used: Some(margin as u64),
        stabilized,
        dimension_trace: trace,
    }
}

/// Counts from enumerating every configuration on a box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteForce {
    /// Configurations satisfying every constraint inside the box.
    pub solutions: u64,
    /// Of those, the ones agreeing with the cylinder.
    pub matching: u64,
    /// `projected_dimension` is read off the distinct window restrictions.
    pub result: MeasureResult,
}

pub fn brute_force_measure(f: &LaurentPoly, cyl: &CylinderSpec, bx: &LatticeBox, budget: &Budget) -> Result<BruteForce> {
    cyl.check_against(f)?;
    if bx.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: bx.dim() });
    }
    let (g, _) = normalize(f)?;
    if g.is_monomial() {
        return Err(Error::TrivialQuotient);
    }
    let p = f.field().p();
    let ncells = bx.cells();
    let total = (p as u128).checked_pow(u32::try_from(ncells).unwrap_or(u32::MAX));
    let total = match total {
        Some(t) if t <= budget.enumeration as u128 => t as u64,
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "{p}^{ncells} configurations exceed the enumeration budget {}",
                budget.enumeration
            )))
        }
    };
    let cells = bx.points();
    let index: HashMap<&Vec<i64>, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut pinned = Vec::new();
    for (w, &v) in cyl.window.iter().zip(&cyl.values) {
        let w = w.to_i64s().filter(|w| bx.contains(w)).ok_or_else(|| Error::Invalid(format!("window point {w} lies outside the box")))?;
        pinned.push((index[&w], v));
    }
    let support: Vec<(Vec<i64>, u64)> =
        g.terms().iter().map(|(e, &c)| (e.to_i64s().expect("small support"), c)).collect();
    let mut constraints: Vec<Vec<(usize, u64)>> = Vec::new();
    for m in &cells {
        let row: Option<Vec<(usize, u64)>> = support
            .iter()
            .map(|(e, c)| {
                let cell: Vec<i64> = m.iter().zip(e).map(|(a, b)| a + b).collect();
                index.get(&cell).map(|&i| (i, *c))
            })
            .collect();
        if let Some(row) = row {
            constraints.push(row);
        }
    }
    let field = f.field();
    let mut config = vec![0u64; cells.len()];
    let (mut solutions, mut matching) = (0u64, 0u64);
    let mut patterns: HashSet<Vec<u64>> = HashSet::new();
    for code in 0..total {
        let mut c = code;
        for x in config.iter_mut() {
            *x = c % p;
            c /= p;
        }
        let ok = constraints
            .iter()
            .all(|row| row.iter().fold(0u64, |acc, &(i, v)| field.add(acc, field.mul(v, config[i]))) == 0);
        if ok {
            solutions += 1;
            patterns.insert(pinned.iter().map(|&(i, _)| config[i]).collect::<Vec<u64>>());
            if pinned.iter().all(|&(i, v)| config[i] == v) {
                matching += 1;
            }
        }
    }
    let value = MeasureValue::from_counts(p, matching, solutions)?;
    let projected = exact_log(p, patterns.len() as u64)
        .ok_or_else(|| Error::Internal("window restrictions do not form a subspace".into()))?;
    let projected = projected as usize;
    Ok(BruteForce {
        solutions,
        matching,
        result: MeasureResult {
            value,
            projected_dimension: projected,
            method: Method::BruteForce,
            box_margin_used: None,
            stabilized: false,
            dimension_trace: Vec::new(),
        },
    })
}

/// `log_p n` for an exact power of `p`.
pub fn exact_log(p: u64, n: u64) -> Option<u32> {
    let mut q = n;
    let mut m = 0;
    while q > 1 {
        if !q.is_multiple_of(p) {
            return None;
        }
        q /= p;
        m += 1;
    }
    (q == 1).then_some(m)
}

/// Sum of `cylinder_measure` over all `p^{|W|}` assignments on a window.
pub fn window_total(f: &LaurentPoly, window: &[ExponentVec]) -> Result<Fraction> {
    let ring = QuotientRing::new(f)?;
    let ann = window_annihilator(&ring, window)?;
    let p = f.field().p();
    let n = window.len();
    let count = (p as u128).checked_pow(n as u32).filter(|&c| c <= 1 << 20).ok_or_else(|| {
        Error::BudgetExceeded(format!("{p}^{n} assignments"))
    })? as u64;
    let projected = n - ann.len();
    let mut total = num_rational::BigRational::zero();
    let mut values = vec![0u64; n];
    for code in 0..count {
        let mut c = code;
        for v in values.iter_mut() {
            *v = c % p;
            c /= p;
        }
        total += value_for(f.field(), &ann, &values, projected).to_fraction().0;
    }
    Ok(Fraction(total))
}

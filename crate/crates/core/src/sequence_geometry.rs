//! Lattice geometry around non-mixing sequences: unimodular frames built on
//! an outward normal, monomial weights, and a detector that looks for a
//! parallel redrawing of `N(f)` inside a tuple of lattice points.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp_laurent::{ExponentVec, LaurentPoly};
use crate::fraction::Fraction;
use crate::linalg::rational_det;
use crate::newton_polytope::{hull, LatticePolytope, PrimitiveVector};

/// Largest perturbation radius the detector will search.
pub const MAX_TOLERANCE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnimodularFrame {
    pub columns: Vec<ExponentVec>,
}

impl UnimodularFrame {
    pub fn determinant(&self) -> BigInt {
        let rows: Vec<Vec<BigRational>> = (0..self.columns.len())
            .map(|i| self.columns.iter().map(|c| BigRational::from_integer(c.components()[i].clone())).collect())
            .collect();
        rational_det(&rows).to_integer()
    }
}

/// Completes `v1` to a basis of `Z^d` whose other columns all have negative
/// dot product with `v1`.
pub fn extend_basis(v1: &PrimitiveVector) -> UnimodularFrame {
    let d = v1.dim();
    let target = v1.as_vec();
    let mut v: Vec<BigInt> = target.components().to_vec();
    // cols[j] is column j of B; invariant B * v = v1 throughout
    let mut cols: Vec<Vec<BigInt>> =
        (0..d).map(|j| (0..d).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    loop {
        let nonzero: Vec<usize> = (0..d).filter(|&i| !v[i].is_zero()).collect();
        if nonzero.len() == 1 {
            let k = nonzero[0];
            v.swap(0, k);
            cols.swap(0, k);
            if v[0].is_negative() {
                v[0] = -v[0].clone();
                for x in cols[0].iter_mut() {
                    *x = -x.clone();
                }
            }
            break;
        }
        let j = *nonzero
            .iter()
            .rev()
            .min_by(|&&a, &&b| v[a].abs().cmp(&v[b].abs()))
            .expect("nonzero entry");
        for &i in &nonzero {
            if i == j {
                continue;
            }
            let q = &v[i] / &v[j];
            if q.is_zero() {
                continue;
            }
            v[i] = &v[i] - &q * &v[j];
            let ci = cols[i].clone();
            for (x, y) in cols[j].iter_mut().zip(&ci) {
                *x += &q * y;
            }
        }
    }
    let norm2 = target.dot(target);
    let mut columns = vec![target.clone()];
    for col in cols.into_iter().skip(1) {
        let c = ExponentVec::new(col);
        let m = target.dot(&c).div_floor(&norm2) + 1;
        columns.push(&c - &target.scale(&m));
    }
    UnimodularFrame { columns }
}

/// Exact weight `n · v1` of a monomial exponent along a normal direction.
pub fn monomial_weight(n: &ExponentVec, v1: &PrimitiveVector) -> Result<BigInt> {
    if n.dim() != v1.dim() {
        return Err(Error::DimensionMismatch { expected: v1.dim(), found: n.dim() });
    }
    Ok(n.dot(v1.as_vec()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgePairing {
    /// Edge of `N(f)` as a pair of vertex indices.
    pub edge: [usize; 2],
    /// Tuple indices realizing it, in the same orientation.
    pub points: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Homothety {
    pub scale: Fraction,
    pub translation: Vec<Fraction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RedrawMatch {
    pub tuple_index: usize,
    /// `assignment[a]` is the tuple index placed at vertex `a` of `N(f)`.
    pub assignment: Vec<usize>,
    pub pairing: Vec<EdgePairing>,
    /// Per vertex of `N(f)`, the integer shift applied to its tuple point.
    pub perturbations: Vec<ExponentVec>,
    #[serde(rename = "K")]
    pub k: u32,
    pub homothety: Option<Homothety>,
}

impl RedrawMatch {
    /// Perturbed positions, one per vertex of `N(f)`.
    pub fn placed_points(&self, tuple: &[ExponentVec]) -> Vec<ExponentVec> {
        self.assignment.iter().zip(&self.perturbations).map(|(&i, d)| &tuple[i] + d).collect()
    }
}

/// `diff` is a strictly positive multiple of `dir`.
fn positive_multiple(diff: &ExponentVec, dir: &ExponentVec) -> bool {
    let (a, b) = (diff.components(), dir.components());
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    diff.dot(dir).is_positive()
}

/// `q_a = λ p_a + t` for all vertices, with `λ > 0`.
fn homothety_of(poly: &LatticePolytope, placed: &[ExponentVec]) -> Option<Homothety> {
    let p0 = &poly.vertices[0];
    let q0 = &placed[0];
    let mut scale: Option<BigRational> = None;
    for (p, q) in poly.vertices.iter().zip(placed).skip(1) {
        let dp = p - p0;
        let dq = q - q0;
        if let Some(i) = dp.components().iter().position(|x| !x.is_zero()) {
            scale = Some(BigRational::new(dq.components()[i].clone(), dp.components()[i].clone()));
            break;
        }
    }
    let scale = scale?;
    if !scale.is_positive() {
        return None;
    }
    let translation: Vec<BigRational> = q0
        .components()
        .iter()
        .zip(p0.components())
        .map(|(q, p)| BigRational::from_integer(q.clone()) - &scale * BigRational::from_integer(p.clone()))
        .collect();
    for (p, q) in poly.vertices.iter().zip(placed) {
        for ((pi, qi), ti) in p.components().iter().zip(q.components()).zip(&translation) {
            if &scale * BigRational::from_integer(pi.clone()) + ti != BigRational::from_integer(qi.clone()) {
                return None;
            }
        }
    }
    Some(Homothety { scale: scale.into(), translation: translation.into_iter().map(Fraction::from).collect() })
}

/// Integer vectors with `‖δ‖∞ ≤ k`, ordered by norm then lexicographically.
fn perturbations(dim: usize, k: u32) -> Vec<ExponentVec> {
    let k = k as i64;
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|v| (-k..=k).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).max().unwrap_or(0), v.clone()));
    out.into_iter().map(ExponentVec::from).collect()
}

struct Search<'a> {
    poly: &'a LatticePolytope,
    tuple: &'a [ExponentVec],
    order: Vec<usize>,
    deltas: Vec<ExponentVec>,
    assignment: Vec<Option<usize>>,
    placed: Vec<Option<ExponentVec>>,
    shift: Vec<Option<ExponentVec>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn fits(&self, a: usize, q: &ExponentVec) -> bool {
        for &(s, t) in &self.poly.edges {
            let (other, forward) = if s == a {
                (t, false)
            } else if t == a {
                (s, true)
            } else {
                continue;
            };
            let Some(qo) = &self.placed[other] else { continue };
            let dir = &self.poly.vertices[t] - &self.poly.vertices[s];
            let diff = if forward { q - qo } else { qo - q };
            if !positive_multiple(&diff, &dir) {
                return false;
            }
        }
        true
    }

    fn place(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let a = self.order[depth];
        for idx in 0..self.tuple.len() {
            if self.used[idx] {
                continue;
            }
            let nd = if depth == 0 { 1 } else { self.deltas.len() };
            for di in 0..nd {
                let q = &self.tuple[idx] + &self.deltas[di];
                if !self.fits(a, &q) {
                    continue;
                }
                self.used[idx] = true;
                self.assignment[a] = Some(idx);
                self.placed[a] = Some(q);
                self.shift[a] = Some(self.deltas[di].clone());
                if self.place(depth + 1) {
                    return true;
                }
                self.used[idx] = false;
                self.assignment[a] = None;
                self.placed[a] = None;
                self.shift[a] = None;
            }
        }
        false
    }
}

fn bfs_order(poly: &LatticePolytope) -> Vec<usize> {
    let n = poly.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(a) = queue.pop_front() {
        order.push(a);
        for b in 0..n {
            if !seen[b] && poly.has_edge(a, b) {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    order
}

/// Searches for a parallel redrawing of `N(f)` among the points of `tuple`,
/// moving each point by at most `tolerance` in the sup norm. The first
/// vertex in breadth-first order is anchored unperturbed; the smallest
/// sufficient radius is reported as `k`.
pub fn detect_redrawing(f: &LaurentPoly, tuple: &[ExponentVec], tolerance: u32) -> Result<Option<RedrawMatch>> {
    let poly = hull(&f.support())?;
    detect_in_polytope(&poly, tuple, tolerance)
}

pub fn detect_in_polytope(poly: &LatticePolytope, tuple: &[ExponentVec], tolerance: u32) -> Result<Option<RedrawMatch>> {
    if !(2..=3).contains(&poly.affine_dim) {
        return Err(Error::Degenerate(format!(
            "Newton polytope has affine dimension {}, need 2 or 3",
            poly.affine_dim
        )));
    }
    if tolerance > MAX_TOLERANCE {
        return Err(Error::Invalid(format!("tolerance {tolerance} exceeds {MAX_TOLERANCE}")));
    }
    for p in tuple {
        p.check_dim(poly.dim)?;
    }
    let n = poly.vertex_count();
    if tuple.len() < n {
        return Err(Error::Invalid(format!("tuple has {} points, Newton polytope has {n} vertices", tuple.len())));
    }
    let order = bfs_order(poly);
    for k in 0..=tolerance {
        let mut search = Search {
            poly,
            tuple,
            order: order.clone(),
            deltas: perturbations(poly.dim, k),
            assignment: vec![None; n],
            placed: vec![None; n],
            shift: vec![None; n],
            used: vec![false; tuple.len()],
        };
        if search.place(0) {
            let assignment: Vec<usize> = search.assignment.into_iter().map(Option::unwrap).collect();
            let perturbations: Vec<ExponentVec> = search.shift.into_iter().map(Option::unwrap).collect();
            let placed: Vec<ExponentVec> = search.placed.into_iter().map(Option::unwrap).collect();
            let used_k = perturbations
                .iter()
                .map(|d| d.norm_inf())
                .max()
                .map(|m| u32::try_from(m).unwrap_or(u32::MAX))
                .unwrap_or(0);
            let pairing =
                poly.edges.iter().map(|&(s, t)| EdgePairing { edge: [s, t], points: [assignment[s], assignment[t]] }).collect();
            return Ok(Some(RedrawMatch {
                tuple_index: 0,
                homothety: homothety_of(poly, &placed),
                assignment,
                pairing,
                perturbations,
                k: used_k,
            }));
        }
    }
    Ok(None)
}

/// Runs the detector on each tuple of a sequence.
pub fn detect_along(f: &LaurentPoly, tuples: &[Vec<ExponentVec>], tolerance: u32) -> Result<Vec<Option<RedrawMatch>>> {
    let poly = hull(&f.support())?;
    tuples
        .iter()
        .enumerate()
        .map(|(j, t)| {
            Ok(detect_in_polytope(&poly, t, tolerance)?.map(|mut m| {
                m.tuple_index = j;
                m
            }))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnappedTuple {
    /// Perturbed points, one per vertex of `N(f)` in vertex order.
    pub points: Vec<ExponentVec>,
    pub homothety: Homothety,
}

/// Applies the match's perturbations and confirms the result is `λ N(f) + t`.
pub fn snap_to_homothety(m: &RedrawMatch, tuple: &[ExponentVec], f: &LaurentPoly) -> Result<SnappedTuple> {
    let poly = hull(&f.support())?;
    if m.assignment.len() != poly.vertex_count() || m.assignment.iter().any(|&i| i >= tuple.len()) {
        return Err(Error::Invalid("match does not fit this polynomial and tuple".into()));
    }
    let points = m.placed_points(tuple);
    for &(s, t) in &poly.edges {
        if !positive_multiple(&(&points[t] - &points[s]), &(&poly.vertices[t] - &poly.vertices[s])) {
            return Err(Error::Invalid("match is not a parallel redrawing".into()));
        }
    }
    let homothety = homothety_of(&poly, &points).ok_or(Error::NotHomothetic)?;
    Ok(SnappedTuple { points, homothety })
}

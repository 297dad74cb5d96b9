//! Parallel redrawings of a polytope's 1-skeleton.
//!
//! A redrawing assigns new positions `q_i` to the vertices so that every edge
//! `(s, t)` keeps its direction: `q_t - q_s` is parallel to `p_t - p_s`. For
//! each edge and each coordinate pair `a < b` this is the linear condition
//! `(q_t - q_s)_a D_b - (q_t - q_s)_b D_a = 0` with `D = p_t - p_s`, so the
//! redrawings form a linear space. Translations and uniform scaling always
//! lie in it, giving dimension at least `d + 1`; a polytope is tight exactly
//! when nothing else does.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::rational_rank;
use crate::newton_polytope::LatticePolytope;

/// Relative singular-value cutoff on the floating-point path.
pub const APPROX_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Positions {
    Exact(Vec<Vec<BigRational>>),
    Approx(Vec<Vec<f64>>),
}

impl Positions {
    fn len(&self) -> usize {
        match self {
            Positions::Exact(v) => v.len(),
            Positions::Approx(v) => v.len(),
        }
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        match self {
            Positions::Exact(v) => v
                .iter()
                .map(|p| p.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
                .collect(),
            Positions::Approx(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    dim: usize,
    positions: Positions,
    edges: Vec<(usize, usize)>,
}

impl Skeleton {
    pub fn new(dim: usize, positions: Positions, edges: Vec<(usize, usize)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if edges.is_empty() {
            return Err(Error::Degenerate("skeleton has no edges".into()));
        }
        let n = positions.len();
        let same = |a: usize, b: usize| match &positions {
            Positions::Exact(v) => v[a] == v[b],
            Positions::Approx(v) => v[a] == v[b],
        };
        for i in 0..n {
            let len = match &positions {
                Positions::Exact(v) => v[i].len(),
                Positions::Approx(v) => v[i].len(),
            };
            if len != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: len });
            }
        }
        for &(s, t) in &edges {
            if s >= n || t >= n {
                return Err(Error::Invalid(format!("edge ({s}, {t}) references a missing vertex")));
            }
            if s == t || same(s, t) {
                return Err(Error::Degenerate(format!("edge ({s}, {t}) has zero length")));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if same(i, j) {
                    return Err(Error::Degenerate(format!("vertices {i} and {j} coincide")));
                }
            }
        }
        Ok(Skeleton { dim, positions, edges })
    }

    pub fn exact(dim: usize, positions: Vec<Vec<BigRational>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(dim, Positions::Exact(positions), edges)
    }

    pub fn from_integers(dim: usize, positions: &[Vec<i64>], edges: Vec<(usize, usize)>) -> Result<Self> {
        let exact = positions
            .iter()
            .map(|p| p.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect();
        Self::exact(dim, exact, edges)
    }

    pub fn approx(dim: usize, positions: Vec<Vec<f64>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(dim, Positions::Approx(positions), edges)
    }

    /// The skeleton of a lattice polytope, in lattice coordinates of its
    /// affine hull (so `dim` is the polytope's affine dimension).
    pub fn from_polytope(poly: &LatticePolytope) -> Result<Self> {
        if poly.affine_dim == 0 || poly.affine_dim > 3 {
            return Err(Error::Degenerate(format!(
                "redrawings need affine dimension 1..=3, got {}",
                poly.affine_dim
            )));
        }
        let local = poly
            .local_vertices()
            .into_iter()
            .map(|p| p.into_iter().map(BigRational::from_integer).collect())
            .collect();
        Self::exact(poly.affine_dim, local, poly.edges.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positions(&self) -> &Positions {
        &self.positions
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    /// Same skeleton on the floating-point path.
    pub fn to_approx(&self) -> Skeleton {
        Skeleton { dim: self.dim, positions: Positions::Approx(self.positions.to_f64()), edges: self.edges.clone() }
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                out.push((a, b));
            }
        }
        out
    }

    /// Constraint matrix over the unknowns `q_{i,a}` (index `i * dim + a`).
    pub fn constraint_matrix_exact(&self) -> Result<Vec<Vec<BigRational>>> {
        let Positions::Exact(pos) = &self.positions else {
            return Err(Error::Invalid("skeleton has floating-point positions".into()));
        };
        let width = pos.len() * self.dim;
        let mut rows = Vec::new();
        for &(s, t) in &self.edges {
            let dir: Vec<BigRational> = pos[t].iter().zip(&pos[s]).map(|(x, y)| x - y).collect();
            for (a, b) in self.pairs() {
                let mut row = vec![BigRational::zero(); width];
                row[t * self.dim + a] += &dir[b];
                row[s * self.dim + a] -= &dir[b];
                row[t * self.dim + b] -= &dir[a];
                row[s * self.dim + b] += &dir[a];
                rows.push(row);
            }
        }
        Ok(rows)
    }

    fn constraint_matrix_f64(&self) -> DMatrix<f64> {
        let pos = self.positions.to_f64();
        let width = pos.len() * self.dim;
        let pairs = self.pairs();
        let mut m = DMatrix::<f64>::zeros(self.edges.len() * pairs.len(), width);
        let mut r = 0;
        for &(s, t) in &self.edges {
            let dir: Vec<f64> = pos[t].iter().zip(&pos[s]).map(|(x, y)| x - y).collect();
            for &(a, b) in &pairs {
                m[(r, t * self.dim + a)] += dir[b];
                m[(r, s * self.dim + a)] -= dir[b];
                m[(r, t * self.dim + b)] -= dir[a];
                m[(r, s * self.dim + b)] += dir[a];
                r += 1;
            }
        }
        m
    }

    /// The `d + 1` trivial redrawings: one translation per axis, then the
    /// scaling `q = p`.
    pub fn homothety_family(&self) -> Result<Vec<Vec<BigRational>>> {
        let Positions::Exact(pos) = &self.positions else {
            return Err(Error::Invalid("skeleton has floating-point positions".into()));
        };
        let n = pos.len();
        let mut family = Vec::new();
        for a in 0..self.dim {
            let mut v = vec![BigRational::zero(); n * self.dim];
            for i in 0..n {
                v[i * self.dim + a] = BigRational::one();
            }
            family.push(v);
        }
        family.push(pos.iter().flatten().cloned().collect());
        Ok(family)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Arithmetic {
    Exact,
    Approximate { tolerance: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RedrawSpace {
    pub dimension: usize,
    pub tight: bool,
    pub arithmetic: Arithmetic,
    pub constraint_rank: usize,
}

pub fn redraw_space(skeleton: &Skeleton) -> Result<RedrawSpace> {
    let unknowns = skeleton.vertex_count() * skeleton.dim;
    let (rank, arithmetic) = match &skeleton.positions {
        Positions::Exact(_) => (rational_rank(&skeleton.constraint_matrix_exact()?, unknowns), Arithmetic::Exact),
        Positions::Approx(_) => {
            let m = skeleton.constraint_matrix_f64();
            let rank = if m.nrows() == 0 {
                0
            } else {
                let sv = m.svd(false, false).singular_values;
                let top = sv.iter().cloned().fold(0.0f64, f64::max);
                sv.iter().filter(|&&s| s > APPROX_TOLERANCE * top).count()
            };
            (rank, Arithmetic::Approximate { tolerance: APPROX_TOLERANCE })
        }
    };
    let dimension = unknowns - rank;
    if dimension < skeleton.dim + 1 {
        return Err(Error::Internal(format!(
            "redraw space of dimension {dimension} misses the homothety family"
        )));
    }
    Ok(RedrawSpace { dimension, tight: dimension == skeleton.dim + 1, arithmetic, constraint_rank: rank })
}

pub fn is_tight(skeleton: &Skeleton) -> Result<bool> {
    Ok(redraw_space(skeleton)?.tight)
}

/// Skeleton JSON `{"dim", "vertices", "edges"}`; coordinates are integers,
/// `"a/b"` strings, or floats (which select the approximate path).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkeletonJson {
    pub dim: usize,
    pub vertices: Vec<Vec<Value>>,
    pub edges: Vec<[usize; 2]>,
}

enum Coord {
    Exact(BigRational),
    Approx(f64),
}

fn parse_coord(v: &Value) -> Result<Coord> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Coord::Exact(BigRational::from_integer(BigInt::from(i))))
            } else {
                let x = n.as_f64().ok_or_else(|| Error::Parse(format!("bad coordinate {n}")))?;
                Ok(Coord::Approx(x))
            }
        }
        Value::String(s) => {
            let s = s.trim();
            if let Some((a, b)) = s.split_once('/') {
                let num: BigInt = a.trim().parse().map_err(|_| Error::Parse(format!("bad fraction {s:?}")))?;
                let den: BigInt = b.trim().parse().map_err(|_| Error::Parse(format!("bad fraction {s:?}")))?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Coord::Exact(BigRational::new(num, den)))
            } else if let Ok(i) = s.parse::<BigInt>() {
                Ok(Coord::Exact(BigRational::from_integer(i)))
            } else {
                s.parse::<f64>().map(Coord::Approx).map_err(|_| Error::Parse(format!("bad coordinate {s:?}")))
            }
        }
        other => Err(Error::Parse(format!("bad coordinate {other}"))),
    }
}

impl TryFrom<SkeletonJson> for Skeleton {
    type Error = Error;
    fn try_from(j: SkeletonJson) -> Result<Self> {
        let parsed: Vec<Vec<Coord>> =
            j.vertices.iter().map(|v| v.iter().map(parse_coord).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        let edges = j.edges.iter().map(|e| (e[0], e[1])).collect();
        let any_approx = parsed.iter().flatten().any(|c| matches!(c, Coord::Approx(_)));
        if any_approx {
            let pos = parsed
                .into_iter()
                .map(|v| {
                    v.into_iter()
                        .map(|c| match c {
                            Coord::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
                            Coord::Approx(x) => x,
                        })
                        .collect()
                })
                .collect();
            Skeleton::approx(j.dim, pos, edges)
        } else {
            let pos = parsed
                .into_iter()
                .map(|v| {
                    v.into_iter()
                        .map(|c| match c {
                            Coord::Exact(r) => r,
                            Coord::Approx(_) => unreachable!(),
                        })
                        .collect()
                })
                .collect();
            Skeleton::exact(j.dim, pos, edges)
        }
    }
}

impl From<&Skeleton> for SkeletonJson {
    fn from(s: &Skeleton) -> Self {
        let vertices = match &s.positions {
            Positions::Exact(v) => v
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|x| {
                            if x.is_integer() {
                                x.to_integer().to_i64().map(Value::from).unwrap_or_else(|| Value::from(x.to_string()))
                            } else {
                                Value::from(x.to_string())
                            }
                        })
                        .collect()
                })
                .collect(),
            Positions::Approx(v) => v.iter().map(|p| p.iter().map(|&x| Value::from(x)).collect()).collect(),
        };
        SkeletonJson { dim: s.dim, vertices, edges: s.edges.iter().map(|&(a, b)| [a, b]).collect() }
    }
}

/// Named polytopes used for the tightness classification checks.
pub mod catalog {
    use super::*;
    use crate::fp_laurent::{ExponentVec, SupportSet};
    use crate::newton_polytope::hull;

    pub const NAMES: [&str; 8] =
        ["triangle", "square", "pentagon", "tetrahedron", "octahedron", "cube", "icosahedron", "dodecahedron"];

    fn lattice(dim: usize, pts: &[&[i64]]) -> Skeleton {
        let support = SupportSet::new(dim, pts.iter().map(|p| ExponentVec::from_i64s(p))).expect("catalog points");
        let poly = hull(&support).expect("catalog hull");
        let positions: Vec<Vec<i64>> =
            poly.vertices.iter().map(|v| v.to_i64s().expect("small coordinates")).collect();
        Skeleton::from_integers(dim, &positions, poly.edges.clone()).expect("catalog skeleton")
    }

    pub fn triangle() -> Skeleton {
        lattice(2, &[&[0, 0], &[1, 0], &[0, 1]])
    }

    pub fn square() -> Skeleton {
        lattice(2, &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])
    }

    /// A lattice pentagon (not regular, but with five independent edge directions).
    pub fn pentagon() -> Skeleton {
        lattice(2, &[&[0, 0], &[2, 0], &[3, 1], &[1, 3], &[-1, 1]])
    }

    pub fn tetrahedron() -> Skeleton {
        lattice(3, &[&[1, 1, 1], &[1, -1, -1], &[-1, 1, -1], &[-1, -1, 1]])
    }

    pub fn octahedron() -> Skeleton {
        lattice(3, &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]])
    }

    pub fn cube() -> Skeleton {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(vec![x, y, z]);
                }
            }
        }
        let refs: Vec<&[i64]> = pts.iter().map(Vec::as_slice).collect();
        lattice(3, &refs)
    }

    /// Joins every pair of points at the minimal pairwise distance.
    fn by_shortest_distance(points: Vec<Vec<f64>>) -> Skeleton {
        let d2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
        let mut best = f64::INFINITY;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                best = best.min(d2(&points[i], &points[j]));
            }
        }
        let mut edges = Vec::new();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if (d2(&points[i], &points[j]) - best).abs() <= 1e-9 * best {
                    edges.push((i, j));
                }
            }
        }
        Skeleton::approx(3, points, edges).expect("catalog skeleton")
    }

    fn cyclic(base: [f64; 3]) -> [[f64; 3]; 3] {
        [base, [base[2], base[0], base[1]], [base[1], base[2], base[0]]]
    }

    pub fn icosahedron() -> Skeleton {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut pts = Vec::new();
        for s1 in [-1.0, 1.0] {
            for s2 in [-1.0, 1.0] {
                for v in cyclic([0.0, s1, s2 * phi]) {
                    pts.push(v.to_vec());
                }
            }
        }
        by_shortest_distance(pts)
    }

    pub fn dodecahedron() -> Skeleton {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut pts = Vec::new();
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    pts.push(vec![sx, sy, sz]);
                }
            }
        }
        for s1 in [-1.0, 1.0] {
            for s2 in [-1.0, 1.0] {
                for v in cyclic([0.0, s1 / phi, s2 * phi]) {
                    pts.push(v.to_vec());
                }
            }
        }
        by_shortest_distance(pts)
    }

    pub fn by_name(name: &str) -> Option<Skeleton> {
        Some(match name {
            "triangle" => triangle(),
            "square" => square(),
            "pentagon" => pentagon(),
            "tetrahedron" => tetrahedron(),
            "octahedron" => octahedron(),
            "cube" => cube(),
            "icosahedron" => icosahedron(),
            "dodecahedron" => dodecahedron(),
            _ => return None,
        })
    }
}

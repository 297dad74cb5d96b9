//! Newton polytopes `N(f) = conv(S(f))` with exact integer predicates.
//!
//! Lower-dimensional supports are expressed in a lattice basis of their
//! affine hull before the face structure is computed. Edges are available
//! up to affine dimension 3, facets for affine dimension 3; beyond that only
//! the vertex set is computed (one exact LP per support point).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp_laurent::{ExponentVec, SupportSet};
use crate::linalg::{in_convex_hull, integer_nullspace, integer_rank, make_primitive};

/// Integer vector whose entries have gcd 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimitiveVector(ExponentVec);

impl PrimitiveVector {
    pub fn new(v: ExponentVec) -> Result<Self> {
        let g = v.components().iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_one() {
            return Err(Error::Invalid(format!("{v} is not a primitive vector")));
        }
        Ok(PrimitiveVector(v))
    }

    /// Divides out the content of a nonzero vector.
    pub fn from_nonzero(v: &[BigInt]) -> Result<Self> {
        if v.iter().all(Zero::is_zero) {
            return Err(Error::Invalid("zero vector has no primitive rescaling".into()));
        }
        Ok(PrimitiveVector(ExponentVec::new(make_primitive(v))))
    }

    pub fn as_vec(&self) -> &ExponentVec {
        &self.0
    }

    pub fn components(&self) -> &[BigInt] {
        self.0.components()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// An affine sublattice `origin + span_Z(basis)` containing a point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLattice {
    pub origin: ExponentVec,
    /// Rows in echelon form; the identity when the hull is full-dimensional.
    pub basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl AffineLattice {
    fn spanning(points: &[ExponentVec], dim: usize) -> Self {
        let origin = points[0].clone();
        let diffs: Vec<Vec<BigInt>> =
            points[1..].iter().map(|p| (p - &origin).into_components()).collect();
        let (basis, pivots) = integer_row_basis(diffs, dim);
        if basis.len() == dim {
            let identity = (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
                .collect();
            return AffineLattice { origin, basis: identity, pivots: (0..dim).collect() };
        }
        AffineLattice { origin, basis, pivots }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `p` in the lattice basis. `p` must lie in the lattice.
    pub fn coords(&self, p: &ExponentVec) -> Vec<BigInt> {
        let mut rest = (p - &self.origin).into_components();
        let mut out = Vec::with_capacity(self.basis.len());
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let x = &rest[pc] / &row[pc];
            for (r, b) in rest.iter_mut().zip(row) {
                *r -= &x * b;
            }
            out.push(x);
        }
        debug_assert!(rest.iter().all(Zero::is_zero), "point outside affine lattice");
        out
    }
}

/// Integer row echelon form; returns the nonzero rows and their pivot columns.
fn integer_row_basis(mut rows: Vec<Vec<BigInt>>, dim: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..dim {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Facet {
    /// Indices into the polytope's vertex list, ascending.
    pub vertices: Vec<usize>,
    pub inward_normal: PrimitiveVector,
}

/// The convex hull of a finite lattice point set.
#[derive(Debug, Clone)]
pub struct LatticePolytope {
    pub dim: usize,
    pub affine_dim: usize,
    /// Vertices in lexicographic order of their coordinates.
    pub vertices: Vec<ExponentVec>,
    /// Vertex index pairs `(i, j)` with `i < j`; empty when `affine_dim > 3`.
    pub edges: Vec<(usize, usize)>,
    /// Populated when `affine_dim == 3`.
    pub facets: Vec<Facet>,
    pub lattice: AffineLattice,
}

impl LatticePolytope {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        self.edges.contains(&key)
    }

    /// Vertex coordinates in the lattice basis of the affine hull.
    pub fn local_vertices(&self) -> Vec<Vec<BigInt>> {
        self.vertices.iter().map(|v| self.lattice.coords(v)).collect()
    }

    /// Exact membership of `q` in the polytope.
    pub fn contains(&self, q: &ExponentVec) -> bool {
        let pts: Vec<Vec<BigInt>> = self.vertices.iter().map(|v| v.components().to_vec()).collect();
        in_convex_hull(q.components(), &pts)
    }

    pub fn summary(&self) -> PolytopeJson {
        PolytopeJson {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            affine_dim: self.affine_dim,
        }
    }
}

/// Report form `{"vertices", "edges", "affine_dim"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub vertices: Vec<ExponentVec>,
    pub edges: Vec<[usize; 2]>,
    pub affine_dim: usize,
}

fn cross2(o: &[BigInt], a: &[BigInt], b: &[BigInt]) -> BigInt {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

fn cross3(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Counter-clockwise hull cycle of 2D points (strict vertices only).
fn hull_2d(local: &[Vec<BigInt>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..local.len()).collect();
    idx.sort_by(|&a, &b| local[a].cmp(&local[b]));
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && cross2(&local[lower[lower.len() - 2]], &local[lower[lower.len() - 1]], &local[i]) <= BigInt::zero()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross2(&local[upper[upper.len() - 2]], &local[upper[upper.len() - 1]], &local[i]) <= BigInt::zero()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Supporting planes of a full-dimensional 3D point set, keyed by primitive
/// outward normal, with the indices of the points on each plane.
fn facets_3d(local: &[Vec<BigInt>]) -> BTreeMap<Vec<BigInt>, BTreeSet<usize>> {
    let n = local.len();
    let mut found: BTreeMap<Vec<BigInt>, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let normal = cross3(&sub(&local[j], &local[i]), &sub(&local[k], &local[i]));
                if normal.iter().all(Zero::is_zero) {
                    continue;
                }
                let normal = make_primitive(&normal);
                for candidate in [normal.clone(), normal.iter().map(|x| -x).collect::<Vec<_>>()] {
                    if found.contains_key(&candidate) {
                        continue;
                    }
                    let base = dot(&candidate, &local[i]);
                    let mut on_plane = BTreeSet::new();
                    let supporting = local.iter().enumerate().all(|(m, p)| {
                        let s = dot(&candidate, p) - &base;
                        if s.is_zero() {
                            on_plane.insert(m);
                        }
                        !s.is_positive()
                    });
                    if supporting {
                        found.insert(candidate, on_plane);
                    }
                }
            }
        }
    }
    found
}

/// The vector in `span(basis)` orthogonal to every direction in `dirs`
/// (which must span a hyperplane of that span), made primitive.
fn in_span_normal(basis: &[Vec<BigInt>], dirs: &[Vec<BigInt>]) -> Result<Vec<BigInt>> {
    let k = basis.len();
    let rows: Vec<Vec<BigInt>> = dirs.iter().map(|d| basis.iter().map(|b| dot(b, d)).collect()).collect();
    let ns = integer_nullspace(&rows, k);
    if ns.len() != 1 {
        return Err(Error::Degenerate("directions do not span a hyperplane".into()));
    }
    let c = &ns[0];
    let dim = basis[0].len();
    let mut w = vec![BigInt::zero(); dim];
    for (ci, b) in c.iter().zip(basis) {
        for (wj, bj) in w.iter_mut().zip(b) {
            *wj += ci * bj;
        }
    }
    Ok(make_primitive(&w))
}

/// `N(S) = conv(S)`.
pub fn hull(support: &SupportSet) -> Result<LatticePolytope> {
    if support.is_empty() {
        return Err(Error::Degenerate("empty support".into()));
    }
    let dim = support.dim;
    let points: Vec<ExponentVec> = support.iter().cloned().collect();
    let lattice = AffineLattice::spanning(&points, dim);
    let affine_dim = lattice.rank();
    let local: Vec<Vec<BigInt>> = points.iter().map(|p| lattice.coords(p)).collect();

    // point indices of the vertices, plus edges/facets on point indices
    let (vertex_points, point_edges, point_facets): (Vec<usize>, Vec<(usize, usize)>, Vec<(Vec<BigInt>, Vec<usize>)>) =
        match affine_dim {
            0 => (vec![0], vec![], vec![]),
            1 => {
                let lo = (0..points.len()).min_by(|&a, &b| local[a].cmp(&local[b])).unwrap();
                let hi = (0..points.len()).max_by(|&a, &b| local[a].cmp(&local[b])).unwrap();
                (vec![lo, hi], vec![(lo, hi)], vec![])
            }
            2 => {
                let cycle = hull_2d(&local);
                let edges = (0..cycle.len()).map(|i| (cycle[i], cycle[(i + 1) % cycle.len()])).collect();
                (cycle, edges, vec![])
            }
            3 => {
                let planes = facets_3d(&local);
                // a point is a vertex iff the normals of the planes through it span R^3
                let mut verts = Vec::new();
                for m in 0..points.len() {
                    let through: Vec<Vec<BigInt>> =
                        planes.iter().filter(|(_, s)| s.contains(&m)).map(|(n, _)| n.clone()).collect();
                    if integer_rank(&through, 3) == 3
                    {
                        verts.push(m);
                    }
                }
                let vset: BTreeSet<usize> = verts.iter().copied().collect();
                let facets: Vec<(Vec<BigInt>, Vec<usize>)> = planes
                    .into_iter()
                    .map(|(n, s)| (n, s.into_iter().filter(|m| vset.contains(m)).collect()))
                    .collect();
                let mut edges = BTreeSet::new();
                for a in 0..facets.len() {
                    for b in a + 1..facets.len() {
                        let common: Vec<usize> =
                            facets[a].1.iter().filter(|m| facets[b].1.contains(m)).copied().collect();
                        if common.len() == 2 {
                            edges.insert((common[0], common[1]));
                        }
                    }
                }
                (verts, edges.into_iter().collect(), facets)
            }
            _ => {
                let all: Vec<Vec<BigInt>> = points.iter().map(|p| p.components().to_vec()).collect();
                let verts = (0..points.len())
                    .filter(|&m| {
                        let others: Vec<Vec<BigInt>> =
                            all.iter().enumerate().filter(|(o, _)| *o != m).map(|(_, p)| p.clone()).collect();
                        !in_convex_hull(&all[m], &others)
                    })
                    .collect();
                (verts, vec![], vec![])
            }
        };

    let mut order = vertex_points.clone();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]));
    let position: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let vertices: Vec<ExponentVec> = order.iter().map(|&m| points[m].clone()).collect();
    let mut edges: Vec<(usize, usize)> = point_edges
        .iter()
        .map(|(a, b)| {
            let (x, y) = (position[a], position[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort();
    edges.dedup();

    let mut facets = Vec::new();
    for (local_normal, members) in point_facets {
        let idx: Vec<usize> = {
            let mut v: Vec<usize> = members.iter().map(|m| position[m]).collect();
            v.sort();
            v
        };
        // ambient normal within the affine span, oriented inward
        let ambient = if affine_dim == dim {
            local_normal.iter().map(|x| -x).collect::<Vec<_>>()
        } else {
            let a = &vertices[idx[0]];
            let dirs: Vec<Vec<BigInt>> = idx[1..].iter().map(|&j| (&vertices[j] - a).into_components()).collect();
            let dirs = independent_pair(&dirs);
            let mut w = in_span_normal(&lattice.basis, &dirs)?;
            let inside = vertices.iter().find(|v| !dot(w.as_slice(), (*v - a).components()).is_zero()).unwrap();
            if dot(&w, (inside - a).components()).is_negative() {
                w = w.iter().map(|x| -x).collect();
            }
            w
        };
        facets.push(Facet { vertices: idx, inward_normal: PrimitiveVector::from_nonzero(&ambient)? });
    }
    facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));

    Ok(LatticePolytope { dim, affine_dim, vertices, edges, facets, lattice })
}

/// Picks two linearly independent vectors out of a facet's direction list.
fn independent_pair(dirs: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let rows = vec![dirs[i].clone(), dirs[j].clone()];
            if integer_rank(&rows, rows[0].len()) == 2 {
                return rows;
            }
        }
    }
    dirs.to_vec()
}

/// True iff `q` is not a convex combination of the other points of `support`.
pub fn is_vertex(q: &ExponentVec, support: &SupportSet) -> Result<bool> {
    if !support.contains(q) {
        return Err(Error::Invalid(format!("{q} is not in the support")));
    }
    let others: Vec<Vec<BigInt>> =
        support.iter().filter(|p| *p != q).map(|p| p.components().to_vec()).collect();
    Ok(!in_convex_hull(q.components(), &others))
}

/// Primitive outward normal of an edge: for a polygon the in-plane normal,
/// for a 3-polytope the primitive sum of the two adjacent facet normals.
pub fn outward_normal(poly: &LatticePolytope, edge: (usize, usize)) -> Result<PrimitiveVector> {
    let (i, j) = edge;
    if !poly.has_edge(i, j) {
        return Err(Error::Invalid(format!("({i}, {j}) is not an edge")));
    }
    match poly.affine_dim {
        2 => {
            let a = &poly.vertices[i];
            let dir = (&poly.vertices[j] - a).into_components();
            let mut w = in_span_normal(&poly.lattice.basis, &[dir])?;
            let off = poly
                .vertices
                .iter()
                .map(|v| dot(&w, (v - a).components()))
                .find(|s| !s.is_zero())
                .ok_or_else(|| Error::Degenerate("polygon has no vertex off the edge".into()))?;
            if off.is_positive() {
                w = w.iter().map(|x| -x).collect();
            }
            PrimitiveVector::from_nonzero(&w)
        }
        3 => {
            let adjacent: Vec<&Facet> =
                poly.facets.iter().filter(|f| f.vertices.contains(&i) && f.vertices.contains(&j)).collect();
            if adjacent.len() != 2 {
                return Err(Error::Internal(format!("edge ({i}, {j}) has {} adjacent facets", adjacent.len())));
            }
            let sum: Vec<BigInt> = adjacent[0]
                .inward_normal
                .components()
                .iter()
                .zip(adjacent[1].inward_normal.components())
                .map(|(a, b)| -(a + b))
                .collect();
            PrimitiveVector::from_nonzero(&sum)
        }
        k => Err(Error::Degenerate(format!("outward normals need affine dimension 2 or 3, got {k}"))),
    }
}

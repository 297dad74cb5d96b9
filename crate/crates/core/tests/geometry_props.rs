//! Randomized checks on hulls, redrawing spaces and the redrawing detector.

mod common;

use std::collections::BTreeSet;

use common::fixtures;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use polymix::newton_polytope::{hull, outward_normal, LatticePolytope, PrimitiveVector};
use polymix::parallel_redraw::{catalog, redraw_space, Positions, Skeleton};
use polymix::sequence_geometry::{detect_redrawing, extend_basis, monomial_weight, snap_to_homothety};
use polymix::{ExponentVec, SupportSet};
use proptest::prelude::*;

fn points(dim: usize, max: usize, r: i64) -> impl Strategy<Value = Vec<ExponentVec>> {
    prop::collection::vec(prop::collection::vec(-r..=r, dim), 1..=max)
        .prop_map(|ps| ps.iter().map(|p| ExponentVec::from_i64s(p)).collect())
}

fn support(dim: usize, ps: &[ExponentVec]) -> SupportSet {
    SupportSet::new(dim, ps.iter().cloned()).unwrap()
}

/// Random unimodular integer matrix built from elementary row operations.
fn unimodular(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0..dim, 0..dim, -2i64..=2, any::<bool>()), 0..6).prop_map(move |ops| {
        let mut m: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| (i == j) as i64).collect()).collect();
        for (i, j, c, flip) in ops {
            if i != j {
                let row = m[j].clone();
                for (x, y) in m[i].iter_mut().zip(row) {
                    *x += c * y;
                }
            }
            if flip {
                m.swap(0, dim - 1);
            }
        }
        m
    })
}

fn apply(m: &[Vec<i64>], p: &ExponentVec, t: &[i64]) -> ExponentVec {
    let x = p.components();
    ExponentVec::new(
        m.iter()
            .zip(t)
            .map(|(row, &ti)| row.iter().zip(x).map(|(&a, b)| BigInt::from(a) * b).sum::<BigInt>() + ti)
            .collect(),
    )
}

fn edge_set(poly: &LatticePolytope) -> BTreeSet<BTreeSet<ExponentVec>> {
    poly.edges.iter().map(|&(a, b)| [poly.vertices[a].clone(), poly.vertices[b].clone()].into()).collect()
}

proptest! {
    #[test]
    fn hull_vertices_come_from_support_and_contain_it(dim in 2usize..=3, seed in points(3, 9, 3)) {
        let ps: Vec<ExponentVec> = seed.iter().map(|p| ExponentVec::new(p.components()[..dim].to_vec())).collect();
        let s = support(dim, &ps);
        let poly = hull(&s).unwrap();
        prop_assert!(poly.vertices.iter().all(|v| s.contains(v)));
        prop_assert!(s.iter().all(|q| poly.contains(q)));
        prop_assert!(poly.vertex_count() <= s.len());
    }

    #[test]
    fn edge_normals_support_exactly_the_edge(dim in 2usize..=3, ps in points(3, 10, 3)) {
        let ps: Vec<ExponentVec> = ps.iter().map(|p| ExponentVec::new(p.components()[..dim].to_vec())).collect();
        let poly = hull(&support(dim, &ps)).unwrap();
        prop_assume!(poly.affine_dim == dim);
        for &(a, b) in &poly.edges {
            let w = outward_normal(&poly, (a, b)).unwrap();
            let top = monomial_weight(&poly.vertices[a], &w).unwrap();
            prop_assert_eq!(&monomial_weight(&poly.vertices[b], &w).unwrap(), &top);
            for (i, v) in poly.vertices.iter().enumerate() {
                if i != a && i != b {
                    prop_assert!(monomial_weight(v, &w).unwrap() < top);
                }
            }
        }
    }

    #[test]
    fn hull_is_unimodular_equivariant(
        ps in points(3, 8, 3),
        m in unimodular(3),
        t in prop::collection::vec(-50i64..=50, 3),
    ) {
        let poly = hull(&support(3, &ps)).unwrap();
        let moved: Vec<ExponentVec> = ps.iter().map(|p| apply(&m, p, &t)).collect();
        let image = hull(&support(3, &moved)).unwrap();
        let mapped: BTreeSet<ExponentVec> = poly.vertices.iter().map(|v| apply(&m, v, &t)).collect();
        prop_assert_eq!(image.vertices.iter().cloned().collect::<BTreeSet<_>>(), mapped);
        prop_assert_eq!(image.affine_dim, poly.affine_dim);
        let mapped_edges: BTreeSet<BTreeSet<ExponentVec>> = edge_set(&poly)
            .into_iter()
            .map(|e| e.iter().map(|v| apply(&m, v, &t)).collect())
            .collect();
        prop_assert_eq!(edge_set(&image), mapped_edges);
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn transform(sk: &Skeleton, m: &[Vec<i64>], scale: &BigRational, t: &[i64]) -> Skeleton {
    let Positions::Exact(pos) = sk.positions() else { unreachable!() };
    let moved = pos
        .iter()
        .map(|p| {
            m.iter()
                .zip(t)
                .map(|(row, &ti)| {
                    row.iter().zip(p).map(|(&a, x)| rat(a) * x).fold(BigRational::zero(), |s, y| s + y) * scale + rat(ti)
                })
                .collect()
        })
        .collect();
    Skeleton::exact(sk.dim(), moved, sk.edges().to_vec()).unwrap()
}

fn lattice_skeleton(dim: usize) -> impl Strategy<Value = Skeleton> {
    points(dim, 9, 3).prop_filter_map("needs a full-dimensional hull", move |ps| {
        let poly = hull(&support(dim, &ps)).ok()?;
        (poly.affine_dim == dim).then(|| Skeleton::from_polytope(&poly).unwrap())
    })
}

fn invertible(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), dim).prop_filter("singular", |m| {
        let rows: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        !polymix::linalg::rational_det(&rows).is_zero()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn redraw_dimension_is_affinely_invariant(
        (sk, m) in (2usize..=3).prop_flat_map(|d| (lattice_skeleton(d), invertible(d))),
        num in prop_oneof![-5i64..=-1, 1i64..=5],
        den in 1i64..=4,
        t in prop::collection::vec(-20i64..=20, 3),
    ) {
        let base = redraw_space(&sk).unwrap();
        prop_assert!(base.dimension > sk.dim());
        prop_assert_eq!(base.tight, base.dimension == sk.dim() + 1);
        let scale = BigRational::new(BigInt::from(num), BigInt::from(den));
        let moved = transform(&sk, &m, &scale, &t[..sk.dim()]);
        prop_assert_eq!(redraw_space(&moved).unwrap().dimension, base.dimension);
    }

    #[test]
    fn homothety_family_lies_in_the_kernel(sk in (2usize..=3).prop_flat_map(lattice_skeleton)) {
        let a = sk.constraint_matrix_exact().unwrap();
        for v in sk.homothety_family().unwrap() {
            for row in &a {
                let s = row.iter().zip(&v).fold(BigRational::zero(), |s, (x, y)| s + x * y);
                prop_assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn exact_and_approximate_paths_agree(sk in (2usize..=3).prop_flat_map(lattice_skeleton)) {
        prop_assert_eq!(redraw_space(&sk).unwrap().dimension, redraw_space(&sk.to_approx()).unwrap().dimension);
    }
}

#[test]
fn catalog_exact_and_approximate_agree() {
    for name in catalog::NAMES {
        let sk = catalog::by_name(name).unwrap();
        if matches!(sk.positions(), Positions::Exact(_)) {
            assert_eq!(
                redraw_space(&sk).unwrap().dimension,
                redraw_space(&sk.to_approx()).unwrap().dimension,
                "{name}"
            );
        }
    }
}

fn primitive(dim: usize) -> impl Strategy<Value = PrimitiveVector> {
    prop::collection::vec(-40i64..=40, dim).prop_filter_map("zero vector", |v| {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        PrimitiveVector::from_nonzero(&big).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn extend_basis_gives_an_obtuse_unimodular_frame(v in (2usize..=4).prop_flat_map(primitive)) {
        let frame = extend_basis(&v);
        prop_assert_eq!(frame.columns.len(), v.dim());
        prop_assert_eq!(&frame.columns[0], v.as_vec());
        prop_assert!(frame.determinant().abs().is_one());
        for c in &frame.columns {
            prop_assert!(PrimitiveVector::new(c.clone()).is_ok());
        }
        for c in &frame.columns[1..] {
            prop_assert!(c.dot(v.as_vec()).is_negative());
        }
    }
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dilated_polytopes_are_found_exactly(
        (i, order) in (0usize..3).prop_flat_map(|i| {
            let n = hull(&fixtures()[i].1.support()).unwrap().vertex_count();
            (Just(i), shuffled(n))
        }),
        k in 1i64..=1024,
        t in prop::collection::vec(-100i64..=100, 2),
    ) {
        let f = fixtures()[i].1.clone();
        let poly = hull(&f.support()).unwrap();
        let tuple: Vec<ExponentVec> = order
            .iter()
            .map(|&a| &poly.vertices[a].scale(&BigInt::from(k)) + &ExponentVec::from_i64s(&t))
            .collect();
        let m = detect_redrawing(&f, &tuple, 0).unwrap().expect("dilation is a redrawing");
        prop_assert_eq!(m.k, 0);
        let h = m.homothety.clone().expect("dilation is homothetic");
        prop_assert_eq!(&h.scale.0, &rat(k));
        let snapped = snap_to_homothety(&m, &tuple, &f).unwrap();
        prop_assert_eq!(snapped.points, m.placed_points(&tuple));
    }

    #[test]
    fn matches_realize_every_edge_direction(
        i in 0usize..3,
        k in 2i64..=40,
        noise in prop::collection::vec(prop::collection::vec(-1i64..=1, 2), 4),
        tol in 0u32..=2,
    ) {
        let f = fixtures()[i].1.clone();
        let poly = hull(&f.support()).unwrap();
        let tuple: Vec<ExponentVec> = poly
            .vertices
            .iter()
            .zip(&noise)
            .map(|(v, e)| &v.scale(&BigInt::from(k)) + &ExponentVec::from_i64s(e))
            .collect();
        let found = detect_redrawing(&f, &tuple, tol).unwrap();
        // moving every point back by its noise relative to the anchor costs at most 2
        prop_assert!(tol < 2 || found.is_some());
        if let Some(m) = found {
            prop_assert!(m.k <= tol);
            let placed = m.placed_points(&tuple);
            for d in &m.perturbations {
                prop_assert!(d.norm_inf() <= BigInt::from(m.k));
            }
            for &(a, b) in &poly.edges {
                let got = &placed[b] - &placed[a];
                let want = &poly.vertices[b] - &poly.vertices[a];
                let (g, w) = (got.components(), want.components());
                prop_assert!(&g[0] * &w[1] == &g[1] * &w[0]);
                prop_assert!(got.dot(&want).is_positive());
            }
        }
    }
}

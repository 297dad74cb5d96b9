//! Exact linear algebra: elimination over `F_p` and over `Q`, and a small
//! phase-one simplex for convex-hull membership.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fp_laurent::FieldSpec;

/// Row-reduces `rows` over `F_p` in place (reduced echelon form) and returns
/// the pivot columns.
pub fn fp_rref(rows: &mut [Vec<u64>], ncols: usize, field: FieldSpec) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = field.sub(*x, field.mul(factor, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn fp_rank(rows: &[Vec<u64>], ncols: usize, field: FieldSpec) -> usize {
    let mut work = rows.to_vec();
    fp_rref(&mut work, ncols, field).len()
}

/// Basis of `{x : M x = 0}` over `F_p`.
pub fn fp_nullspace(rows: &[Vec<u64>], ncols: usize, field: FieldSpec) -> Vec<Vec<u64>> {
    let mut work = rows.to_vec();
    let pivots = fp_rref(&mut work, ncols, field);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(work[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// Rank over `Q`.
pub fn rational_rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    let mut work = rows.to_vec();
    rational_rref(&mut work, ncols).len()
}

fn rational_rref(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &factor * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Determinant of a square rational matrix.
pub fn rational_det(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(found) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if found != c {
            m.swap(c, found);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        let pivot_row = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = &row[c] / &pivot;
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &factor * y;
            }
        }
    }
    det
}

pub fn integer_rank(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    let as_q: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    rational_rank(&as_q, ncols)
}

/// Basis of the rational nullspace, scaled to primitive integer vectors.
pub fn integer_nullspace(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut work: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let pivots = rational_rref(&mut work, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[row][free].clone();
        }
        basis.push(primitive_from_rational(&v));
    }
    basis
}

/// Clears denominators and divides by the content.
pub fn primitive_from_rational(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    make_primitive(&ints)
}

pub fn make_primitive(v: &[BigInt]) -> Vec<BigInt> {
    use num_integer::Integer;
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Exact test for `q ∈ conv(points)` by phase-one simplex over the
/// convex-combination weights, with Bland's rule.
pub fn in_convex_hull(q: &[BigInt], points: &[Vec<BigInt>]) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = q.len();
    let n = points.len();
    let m = d + 1;
    // rows: coordinates then the affine row sum(lambda) = 1
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(n + m + 1);
        for p in points {
            let a = if i < d { p[i].clone() } else { BigInt::one() };
            row.push(BigRational::from_integer(a));
        }
        for j in 0..m {
            row.push(if i == j { BigRational::one() } else { BigRational::zero() });
        }
        let b = if i < d { q[i].clone() } else { BigInt::one() };
        row.push(BigRational::from_integer(b));
        if row[n + m].is_negative() {
            for (j, x) in row.iter_mut().enumerate() {
                if j < n || j == n + m {
                    *x = -x.clone();
                }
            }
        }
        tab.push(row);
    }
    let width = n + m + 1;
    let mut cost = vec![BigRational::zero(); width];
    for row in &tab {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // unbounded cannot happen in phase one; bail out conservatively
            break;
        };
        let inv = tab[r][enter].recip();
        for x in tab[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let factor = row[enter].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * y;
            }
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for (x, y) in cost.iter_mut().zip(&pivot_row) {
                *x -= &factor * y;
            }
        }
        basis[r] = enter;
    }
    cost[width - 1].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fp_nullspace_of_single_equation() {
        let f2 = FieldSpec::new(2).unwrap();
        let rows = vec![vec![1, 1, 1, 0]];
        let ns = fp_nullspace(&rows, 4, f2);
        assert_eq!(ns.len(), 3);
        for v in &ns {
            assert_eq!((v[0] + v[1] + v[2]) % 2, 0);
        }
        assert_eq!(fp_rank(&rows, 4, f2), 1);
    }

    #[test]
    fn fp_rank_mod_three() {
        let f3 = FieldSpec::new(3).unwrap();
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]];
        // second row is twice the first mod 3
        assert_eq!(fp_rank(&rows, 3, f3), 2);
    }

    #[test]
    fn hull_membership() {
        let pts = vec![ints(&[0, 0]), ints(&[2, 0]), ints(&[0, 2])];
        assert!(in_convex_hull(&ints(&[1, 1]), &pts));
        assert!(in_convex_hull(&ints(&[0, 0]), &pts));
        assert!(!in_convex_hull(&ints(&[2, 1]), &pts));
        assert!(!in_convex_hull(&ints(&[-1, 0]), &pts));
        let four = vec![ints(&[0, 0, 0, 0]), ints(&[2, 0, 0, 0]), ints(&[0, 2, 0, 0]), ints(&[0, 0, 2, 0]), ints(&[0, 0, 0, 2])];
        // (1,1,1,1) has coordinate sum 4 > 2, outside the simplex
        assert!(!in_convex_hull(&ints(&[1, 1, 1, 1]), &four));
        assert!(in_convex_hull(&ints(&[1, 0, 1, 0]), &four));
    }

    #[test]
    fn integer_nullspace_is_primitive() {
        let rows = vec![ints(&[2, 4, 6])];
        let ns = integer_nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: BigInt = v.iter().zip(&rows[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }
}

//! Rank-revealing kernels behind the matrix backends.
//!
//! Exact scalars go through reduced row echelon form. Floats go through the
//! SVD (computed by faer), with singular values at or below
//! `tol * max(rows, cols) * sigma_max` treated as zero.

use nalgebra::DMatrix;

use super::mat::Mat;
use super::scalar::{Rational, Scalar};

pub trait LinearKernel: Scalar {
    fn rank(m: &Mat<Self>, tol: f64) -> usize;

    /// `m = left * right` with `left` of full column rank and `right` of full
    /// row rank; both have `rank(m)` as inner dimension.
    fn rank_factorization(m: &Mat<Self>, tol: f64) -> (Mat<Self>, Mat<Self>);

    /// Columns spanning `{x : m x = 0}`.
    fn null_space(m: &Mat<Self>, tol: f64) -> Mat<Self>;

    /// Columns spanning the column space of `m` (full column rank).
    fn column_basis(m: &Mat<Self>, tol: f64) -> Mat<Self>;

    /// Some `x` with `a x = b`, or `None` when the system is inconsistent.
    fn solve(a: &Mat<Self>, b: &Mat<Self>, tol: f64) -> Option<Mat<Self>>;

    /// Two-sided inverse of a square matrix of full rank.
    fn inverse(m: &Mat<Self>, tol: f64) -> Option<Mat<Self>> {
        if !m.is_square() || Self::rank(m, tol) != m.rows() {
            return None;
        }
        Self::solve(m, &Mat::identity(m.rows()), tol)
    }
}

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
fn rref<S: Scalar>(m: &Mat<S>) -> (Mat<S>, Vec<usize>) {
    let mut r = m.to_rows();
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..cols {
        if lead == rows {
            break;
        }
        let Some(pr) = (lead..rows).find(|&i| !r[i][col].is_zero()) else {
            continue;
        };
        r.swap(lead, pr);
        let inv = S::one().div(&r[lead][col]);
        for x in r[lead].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = r[lead].clone();
        for (i, row) in r.iter_mut().enumerate() {
            if i == lead || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.sub(&f.mul(p));
            }
        }
        pivots.push(col);
        lead += 1;
    }
    let out = if rows == 0 { Mat::zeros(0, cols) } else { Mat::from_rows(r).expect("rectangular") };
    (out, pivots)
}

impl LinearKernel for Rational {
    fn rank(m: &Mat<Self>, _tol: f64) -> usize {
        rref(m).1.len()
    }

    fn rank_factorization(m: &Mat<Self>, _tol: f64) -> (Mat<Self>, Mat<Self>) {
        let (r, pivots) = rref(m);
        let left = m.select_columns(&pivots);
        let right = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        (left, right)
    }

    fn null_space(m: &Mat<Self>, _tol: f64) -> Mat<Self> {
        let (r, pivots) = rref(m);
        let n = m.cols();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        Mat::from_fn(n, free.len(), |i, k| {
            let f = free[k];
            if i == f {
                Self::one()
            } else if let Some(pi) = pivots.iter().position(|&p| p == i) {
                r.get(pi, f).neg()
            } else {
                Self::zero()
            }
        })
    }

    fn column_basis(m: &Mat<Self>, _tol: f64) -> Mat<Self> {
        let (_, pivots) = rref(m);
        m.select_columns(&pivots)
    }

    fn solve(a: &Mat<Self>, b: &Mat<Self>, _tol: f64) -> Option<Mat<Self>> {
        let n = a.cols();
        let (r, pivots) = rref(&a.hstack(b));
        if pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = Mat::zeros(n, b.cols());
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols() {
                x.set(p, j, r.get(row, n + j).clone());
            }
        }
        Some(x)
    }
}

struct Svd {
    u: DMatrix<f64>,
    sigma: Vec<f64>,
    vt: DMatrix<f64>,
    rank: usize,
}

/// Full SVD (square `u` and `vt`), singular values in nonincreasing order.
fn svd(m: &Mat<f64>, tol: f64) -> Svd {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Svd {
            u: DMatrix::identity(rows, rows),
            sigma: vec![],
            vt: DMatrix::identity(cols, cols),
            rank: 0,
        };
    }
    let fm = faer::Mat::<f64>::from_fn(rows, cols, |i, j| *m.get(i, j));
    let dec = fm.svd().expect("svd converges");
    let (fu, fv) = (dec.U(), dec.V());
    let u = DMatrix::from_fn(rows, rows, |i, j| fu[(i, j)]);
    let vt = DMatrix::from_fn(cols, cols, |i, j| fv[(j, i)]);
    let sv = dec.S().column_vector();
    let sigma: Vec<f64> = (0..rows.min(cols)).map(|i| sv[i]).collect();
    debug_assert!(sigma.windows(2).all(|w| w[0] >= w[1]));
    let smax = sigma.first().cloned().unwrap_or(0.0);
    let threshold = tol * rows.max(cols) as f64 * smax;
    let rank = sigma.iter().filter(|&&s| s > threshold && s > 0.0).count();
    Svd { u, sigma, vt, rank }
}

fn from_na(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

impl LinearKernel for f64 {
    fn rank(m: &Mat<Self>, tol: f64) -> usize {
        svd(m, tol).rank
    }

    fn rank_factorization(m: &Mat<Self>, tol: f64) -> (Mat<Self>, Mat<Self>) {
        let s = svd(m, tol);
        let r = s.rank;
        let left = Mat::from_fn(m.rows(), r, |i, j| s.u[(i, j)] * s.sigma[j]);
        let right = Mat::from_fn(r, m.cols(), |i, j| s.vt[(i, j)]);
        (left, right)
    }

    fn null_space(m: &Mat<Self>, tol: f64) -> Mat<Self> {
        let s = svd(m, tol);
        let n = m.cols();
        Mat::from_fn(n, n - s.rank, |i, k| s.vt[(s.rank + k, i)])
    }

    fn column_basis(m: &Mat<Self>, tol: f64) -> Mat<Self> {
        let s = svd(m, tol);
        Mat::from_fn(m.rows(), s.rank, |i, j| s.u[(i, j)])
    }

    fn solve(a: &Mat<Self>, b: &Mat<Self>, tol: f64) -> Option<Mat<Self>> {
        let s = svd(a, tol);
        // minimum-norm least-squares solution x = V_r S_r^{-1} U_r^T b
        let r = s.rank;
        let bn = from_na(&b.to_nalgebra());
        let ut_b = Mat::from_fn(r, b.cols(), |i, j| {
            (0..a.rows()).map(|k| s.u[(k, i)] * bn.get(k, j)).sum::<f64>() / s.sigma[i]
        });
        let x = Mat::from_fn(a.cols(), b.cols(), |i, j| {
            (0..r).map(|k| s.vt[(k, i)] * ut_b.get(k, j)).sum::<f64>()
        });
        let resid = a.mul(&x).sub(b).frobenius();
        let scale = a.frobenius() * x.frobenius() + b.frobenius();
        let accept = 1e3 * f64::EPSILON.max(tol) * (1.0 + scale);
        (resid <= accept).then_some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_i64_rows(rows)
    }

    #[test]
    fn exact_rank_and_factorization() {
        let a = q(&[&[1, 1], &[1, 1]]);
        assert_eq!(Rational::rank(&a, 0.0), 1);
        let (b, c) = Rational::rank_factorization(&a, 0.0);
        assert_eq!(b.shape(), (2, 1));
        assert_eq!(c.shape(), (1, 2));
        assert_eq!(b.mul(&c), a);
    }

    #[test]
    fn zero_matrix_has_empty_factors() {
        let z = q(&[&[0, 0], &[0, 0]]);
        let (b, c) = Rational::rank_factorization(&z, 0.0);
        assert_eq!(b.shape(), (2, 0));
        assert_eq!(c.shape(), (0, 2));
        assert_eq!(b.mul(&c), z);
        let (bf, cf) = f64::rank_factorization(&z.to_f64(), 1e-10);
        assert_eq!(bf.cols(), 0);
        assert_eq!(bf.mul(&cf), z.to_f64());
    }

    #[test]
    fn float_factorization_round_trip() {
        let a = Mat::<f64>::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let (b, c) = f64::rank_factorization(&a, 1e-10);
        assert_eq!(b.cols(), 1);
        assert!(b.mul(&c).sub(&a).frobenius() <= 1e-12);
    }

    #[test]
    fn null_spaces_annihilate() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let n = Rational::null_space(&a, 0.0);
        assert_eq!(n.cols(), 2);
        assert!(a.mul(&n).is_zero());
        let nf = f64::null_space(&a.to_f64(), 1e-10);
        assert_eq!(nf.cols(), 2);
        assert!(a.to_f64().mul(&nf).frobenius() < 1e-12);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = q(&[&[1, 0], &[0, 0]]);
        assert!(Rational::solve(&a, &q(&[&[1], &[1]]), 0.0).is_none());
        assert_eq!(Rational::solve(&a, &q(&[&[3], &[0]]), 0.0).unwrap(), q(&[&[3], &[0]]));
        assert!(f64::solve(&a.to_f64(), &q(&[&[1], &[1]]).to_f64(), 1e-10).is_none());
    }

    #[test]
    fn inverses() {
        let a = q(&[&[2, 1], &[1, 1]]);
        let inv = Rational::inverse(&a, 0.0).unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert!(Rational::inverse(&q(&[&[1, 1], &[1, 1]]), 0.0).is_none());
        let invf = f64::inverse(&a.to_f64(), 1e-10).unwrap();
        assert!(a.to_f64().mul(&invf).sub(&Mat::identity(2)).frobenius() < 1e-12);
    }
}

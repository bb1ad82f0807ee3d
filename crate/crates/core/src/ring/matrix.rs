//! Full matrix algebras `M_n(Q)` and `M_n(R)`.

use std::marker::PhantomData;

use super::finite::parse_unit_literal;
use super::linalg::LinearKernel;
use super::mat::{parse_nested, Mat};
use super::scalar::Rational;
use super::{IdealRepresentation, Ring, RingDescriptor, RingKind, Side, DEFAULT_FLOAT_TOL};
use crate::error::{Error, Result};

/// Verdict tolerance for float residuals: a residual passes when its norm is
/// at most this times `1 + scale`.
pub const FLOAT_VERDICT_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct MatrixAlgebra<S> {
    n: usize,
    descriptor: RingDescriptor,
    verdict_tol: f64,
    _scalar: PhantomData<S>,
}

impl MatrixAlgebra<Rational> {
    pub fn rational(n: usize) -> Result<Self> {
        Self::new(RingDescriptor::rational(n)?)
    }
}

impl MatrixAlgebra<f64> {
    pub fn float(n: usize) -> Result<Self> {
        Self::new(RingDescriptor::float(n, DEFAULT_FLOAT_TOL)?)
    }

    pub fn float_with_tolerance(n: usize, tol: f64) -> Result<Self> {
        Self::new(RingDescriptor::float(n, tol)?)
    }
}

impl<S: LinearKernel> MatrixAlgebra<S> {
    pub fn new(descriptor: RingDescriptor) -> Result<Self> {
        let n = match (descriptor.kind, S::EXACT) {
            (RingKind::RationalMatrix { k }, true) | (RingKind::FloatMatrix { k }, false) => k,
            _ => {
                return Err(Error::InvalidDescriptor(format!(
                    "{descriptor} does not match the scalar type of this backend"
                )))
            }
        };
        Ok(MatrixAlgebra { n, descriptor, verdict_tol: FLOAT_VERDICT_TOL, _scalar: PhantomData })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Tolerance used for rank decisions (0 for exact scalars).
    pub fn rank_tol(&self) -> f64 {
        self.descriptor.tolerance
    }

    pub fn verdict_tol(&self) -> f64 {
        self.verdict_tol
    }

    pub fn rank(&self, x: &Mat<S>) -> usize {
        S::rank(x, self.rank_tol())
    }

    pub fn rank_factorization(&self, x: &Mat<S>) -> (Mat<S>, Mat<S>) {
        S::rank_factorization(x, self.rank_tol())
    }

    pub fn column_basis(&self, x: &Mat<S>) -> Mat<S> {
        S::column_basis(x, self.rank_tol())
    }

    pub fn null_space(&self, x: &Mat<S>) -> Mat<S> {
        S::null_space(x, self.rank_tol())
    }

    pub fn solve(&self, a: &Mat<S>, b: &Mat<S>) -> Option<Mat<S>> {
        S::solve(a, b, self.rank_tol())
    }

    pub fn square_inverse(&self, m: &Mat<S>) -> Option<Mat<S>> {
        S::inverse(m, self.rank_tol())
    }

    /// `C^T (C C^T)^{-1} (B^T B)^{-1} B^T` from the factorization `b = B C`.
    pub fn canonical_inner_inverse(&self, b: &Mat<S>) -> Mat<S> {
        let (f, g) = self.rank_factorization(b);
        if f.cols() == 0 {
            return Mat::zeros(self.n, self.n);
        }
        let ft = f.transpose();
        let gt = g.transpose();
        let left = self.square_inverse(&ft.mul(&f)).expect("full column rank factor");
        let right = self.square_inverse(&g.mul(&gt)).expect("full row rank factor");
        gt.mul(&right).mul(&left).mul(&ft)
    }

    fn check(&self, x: &Mat<S>) -> Result<()> {
        if x.shape() != (self.n, self.n) {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n}, got {}x{}",
                x.rows(),
                x.cols(),
                n = self.n
            )));
        }
        Ok(())
    }

    /// Group inverse through `x = F G`: `x^# = F (G F)^{-2} G`.
    pub fn factored_group_inverse(&self, x: &Mat<S>) -> Result<Mat<S>> {
        self.check(x)?;
        let (f, g) = self.rank_factorization(x);
        if f.cols() == 0 {
            return Ok(self.zero());
        }
        let gf = g.mul(&f);
        let m = self
            .square_inverse(&gf)
            .ok_or_else(|| Error::InverseAbsent("rank(x^2) < rank(x): no group inverse".into()))?;
        let y = f.mul(&m).mul(&m).mul(&g);
        let s = self.norm(x) * self.norm(&y);
        let ok = self.residual_ok(&self.sub(&self.product(&[x, &y, x]), x), s * self.norm(x))
            && self.residual_ok(&self.sub(&self.product(&[&y, x, &y]), &y), s * self.norm(&y))
            && self.residual_ok(&self.sub(&x.mul(&y), &y.mul(x)), s);
        if !ok {
            return Err(Error::InverseAbsent("group inverse equations not met".into()));
        }
        Ok(y)
    }

    /// The outer inverse with range spanned by the columns of `t` and null
    /// space spanned by the columns of `s`.
    pub fn ats_outer_inverse(&self, a: &Mat<S>, t: &Mat<S>, s: &Mat<S>) -> Result<Mat<S>> {
        self.check(a)?;
        if t.rows() != self.n || s.rows() != self.n {
            return Err(Error::DimensionMismatch("subspace bases must have n rows".into()));
        }
        let bt = self.column_basis(t);
        let cs = self.null_space(&s.transpose()).transpose();
        if bt.cols() != cs.rows() {
            return Err(Error::DimensionMismatch(format!(
                "dim T = {} but codim S = {}; no direct sum A(T) + S = X",
                bt.cols(),
                cs.rows()
            )));
        }
        if bt.cols() == 0 {
            return Ok(self.zero());
        }
        let middle = cs.mul(a).mul(&bt);
        let m = self
            .square_inverse(&middle)
            .ok_or_else(|| Error::InverseAbsent("A restricted to T is not onto a complement of S".into()))?;
        Ok(bt.mul(&m).mul(&cs))
    }

    /// Reads `[[..],..]`, `Eij`, `diag(..)`, `I`/`1` or `0`.
    pub fn parse_element(&self, text: &str) -> Result<Mat<S>> {
        let t = text.trim();
        let n = self.n;
        let m = match t {
            "I" | "1" => Mat::identity(n),
            "0" => Mat::zeros(n, n),
            _ => {
                if let Some((i, j)) = parse_unit_literal(t, n)? {
                    Mat::unit(n, n, i, j)
                } else if let Some(body) = t.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
                    let entries = body.split(',').map(S::parse).collect::<Result<Vec<S>>>()?;
                    Mat::diag(&entries)
                } else {
                    parse_nested(t)?
                }
            }
        };
        self.check(&m)?;
        Ok(m)
    }

    fn row_target(side: Side, y: &Mat<S>) -> Mat<S> {
        match side {
            Side::ImageRight | Side::KernelRight => y.clone(),
            Side::ImageLeft | Side::KernelLeft => y.transpose(),
        }
    }

    fn span_contains(&self, basis: &Mat<S>, target: &Mat<S>) -> bool {
        if target.cols() == 0 {
            return true;
        }
        self.rank(&basis.hstack(target)) == basis.cols()
    }
}

impl<S: LinearKernel> Ring for MatrixAlgebra<S> {
    type Elem = Mat<S>;

    fn descriptor(&self) -> RingDescriptor {
        self.descriptor
    }
    fn zero(&self) -> Mat<S> {
        Mat::zeros(self.n, self.n)
    }
    fn one(&self) -> Mat<S> {
        Mat::identity(self.n)
    }
    fn add(&self, x: &Mat<S>, y: &Mat<S>) -> Mat<S> {
        x.add(y)
    }
    fn neg(&self, x: &Mat<S>) -> Mat<S> {
        x.neg()
    }
    fn mul(&self, x: &Mat<S>, y: &Mat<S>) -> Mat<S> {
        x.mul(y)
    }
    fn eq(&self, x: &Mat<S>, y: &Mat<S>) -> bool {
        if S::EXACT {
            return x == y;
        }
        let (nx, ny) = (x.frobenius(), y.frobenius());
        x.sub(y).frobenius() <= self.descriptor.tolerance * 1f64.max(nx).max(ny)
    }
    fn norm(&self, x: &Mat<S>) -> f64 {
        x.spectral_norm()
    }
    fn residual_ok(&self, residual: &Mat<S>, scale: f64) -> bool {
        if S::EXACT {
            residual.is_zero()
        } else {
            residual.spectral_norm() <= self.verdict_tol * (1.0 + scale)
        }
    }
    fn invert(&self, x: &Mat<S>) -> Result<Mat<S>> {
        self.square_inverse(x).ok_or(Error::NotInvertible)
    }
    fn is_unit(&self, x: &Mat<S>) -> bool {
        self.rank(x) == self.n
    }
    fn is_right_invertible(&self, x: &Mat<S>) -> bool {
        self.rank(x) == self.n
    }
    fn is_left_invertible(&self, x: &Mat<S>) -> bool {
        self.rank(x) == self.n
    }
    fn inner_inverses(&self, b: &Mat<S>) -> Result<Vec<Mat<S>>> {
        Ok(vec![self.canonical_inner_inverse(b)])
    }
    fn ideal(&self, x: &Mat<S>, side: Side) -> IdealRepresentation<Mat<S>> {
        let basis = match side {
            Side::ImageRight => self.column_basis(x),
            Side::ImageLeft => self.column_basis(&x.transpose()),
            Side::KernelRight => self.null_space(x),
            Side::KernelLeft => self.null_space(&x.transpose()),
        };
        IdealRepresentation::Subspace { side, basis }
    }
    fn ideal_contains(&self, ideal: &IdealRepresentation<Mat<S>>, y: &Mat<S>) -> bool {
        match ideal {
            IdealRepresentation::Subspace { side, basis } => {
                self.span_contains(basis, &Self::row_target(*side, y))
            }
            IdealRepresentation::Elements(set) => set.iter().any(|e| self.eq(e, y)),
        }
    }
    fn ideal_subset(&self, i: &IdealRepresentation<Mat<S>>, j: &IdealRepresentation<Mat<S>>) -> bool {
        match (i, j) {
            (
                IdealRepresentation::Subspace { side: si, basis: bi },
                IdealRepresentation::Subspace { side: sj, basis: bj },
            ) => si == sj && self.span_contains(bj, bi),
            _ => false,
        }
    }
    fn transpose(&self, x: &Mat<S>) -> Option<Mat<S>> {
        Some(x.transpose())
    }
}

//! The operator `H` and the distance between the (b,c)-inverse and the
//! regularized products `v (λ + a v)^{-1}` and `(λ + v a)^{-1} v`.
//!
//! `H` vanishes on `(1 - bg)R` and inverts left multiplication by `v` from
//! `vR` onto `avR`. On a matrix algebra it is left multiplication by
//! `w = (a v)^# a p`; the defining properties are checked numerically
//! rather than taken for granted. The right-sided operator comes from the
//! same construction on transposes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectrum::spectrum;
use crate::error::{Error, Result};
use crate::inverse::{bc_inverse, residual, CornerFrame, InverseBackend, Method, Residual};
use crate::ring::{Mat, MatrixAlgebra, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSide {
    /// `v (λ + a v)^{-1}`
    Left,
    /// `(λ + v a)^{-1} v`
    Right,
}

#[derive(Debug, Clone)]
pub struct HOperator {
    pub side: BoundSide,
    /// `H x = w x` on the left side, `x w` on the right side.
    pub w: Mat<f64>,
    /// Spectral norm of `w`, equal to the induced norm of the multiplier.
    pub norm: f64,
    pub residuals: Vec<Residual>,
}

/// Inputs shared by `H` and the bounds: `v` from the frame and the inverse.
#[derive(Debug, Clone)]
pub struct BanachSetting {
    pub a: Mat<f64>,
    pub frame: CornerFrame<Mat<f64>>,
    pub v: Mat<f64>,
    pub y: Mat<f64>,
}

impl BanachSetting {
    pub fn new(alg: &MatrixAlgebra<f64>, a: &Mat<f64>, frame: &CornerFrame<Mat<f64>>) -> Result<Self> {
        let needs = |e: Error| match e {
            Error::InverseAbsent(m) => Error::PreconditionFailed(format!("requires an existing (b,c)-inverse: {m}")),
            other => other,
        };
        let v = alg.build_v(frame).map_err(needs)?;
        let y = bc_inverse(alg, a, frame, Method::Factor).map_err(needs)?;
        Ok(BanachSetting { a: a.clone(), frame: frame.clone(), v, y })
    }

    fn transposed(&self, alg: &MatrixAlgebra<f64>) -> Self {
        BanachSetting {
            a: self.a.transpose(),
            frame: self.frame.transposed(alg).expect("matrix algebras are transposable"),
            v: self.v.transpose(),
            y: self.y.transpose(),
        }
    }
}

/// A few unit-norm multiplicands; the identity attains the norm of `w`.
fn unit_samples(n: usize) -> Vec<Mat<f64>> {
    let u: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let uu: f64 = u.iter().map(|x| x * x).sum();
    vec![
        Mat::identity(n),
        Mat::from_fn(n, n, |i, j| if i + j + 1 == n { 1.0 } else { 0.0 }),
        Mat::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - 2.0 * u[i] * u[j] / uu),
        Mat::unit(n, n, 0, 0),
    ]
}

fn left_h(alg: &MatrixAlgebra<f64>, s: &BanachSetting) -> Result<HOperator> {
    let (a, v, y, p) = (&s.a, &s.v, &s.y, &s.frame.p);
    let av = a.mul(v);
    let g = spectrum(alg, &av)
        .group_inverse
        .ok_or_else(|| Error::PreconditionFailed("a v is not group invertible".into()))?;
    let w = alg.product(&[&g, a, p]);
    let n = |x: &Mat<f64>| x.spectral_norm();
    let nw = n(&w);
    let mut residuals = vec![
        residual(alg, "w (1 - p)", &w.mul(&alg.one_minus(p)), nw * (1.0 + n(p))),
        residual(alg, "w v - (av)^# a v", &w.mul(v).sub(&alg.product(&[&g, a, v])), nw * n(v) + n(&g) * n(a) * n(v)),
        residual(alg, "w y - (av)^#", &w.mul(y).sub(&g), nw * n(y) + n(&g)),
    ];
    let induced = unit_samples(alg.dim()).iter().map(|x| n(&w.mul(x))).fold(0.0, f64::max);
    let gap = (induced - nw).abs();
    residuals.push(Residual {
        name: "max ‖w x‖ over unit samples - ‖w‖",
        norm: gap,
        scale: nw,
        ok: gap <= 1e-12 * (1.0 + nw),
    });
    if let Some(bad) = residuals.iter().find(|r| !r.ok) {
        return Err(Error::InvariantViolated(format!("H certification failed: {} = {:.3e}", bad.name, bad.norm)));
    }
    Ok(HOperator { side: BoundSide::Left, w, norm: nw, residuals })
}

pub fn build_h(alg: &MatrixAlgebra<f64>, s: &BanachSetting, side: BoundSide) -> Result<HOperator> {
    match side {
        BoundSide::Left => left_h(alg, s),
        BoundSide::Right => {
            let h = left_h(alg, &s.transposed(alg))?;
            Ok(HOperator { side, w: h.w.transpose(), ..h })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub side: BoundSide,
    pub lambda_re: f64,
    pub lambda_im: f64,
    /// `‖a^-(b,c) - v (λ + a v)^{-1}‖` (or the right-sided product).
    pub measured: f64,
    pub bound: f64,
    /// `1 / (‖a‖ ‖a^-(b,c)‖² ‖H‖)`.
    pub radius: f64,
    /// `radius - |λ|`.
    pub margin: f64,
    pub norm_a: f64,
    pub norm_v: f64,
    pub norm_y: f64,
    pub norm_h: f64,
    /// `‖a‖ ‖a^-(b,c)‖ ‖H‖ = 0`: the deviation vanishes and no bound is needed.
    pub degenerate: bool,
    pub holds: bool,
}

impl BoundReport {
    pub fn ratio(&self) -> f64 {
        if self.bound > 0.0 {
            self.measured / self.bound
        } else {
            0.0
        }
    }
}

fn complex_mat(x: &Mat<f64>, shift: Complex64) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(x.rows(), x.cols(), |i, j| {
        Complex64::new(*x.get(i, j), 0.0) + if i == j { shift } else { Complex64::new(0.0, 0.0) }
    })
}

fn complex_norm(m: &faer::Mat<Complex64>) -> f64 {
    m.singular_values().expect("svd converges").first().copied().unwrap_or(0.0)
}

/// `‖y - v (λ + a v)^{-1}‖` or `‖y - (λ + v a)^{-1} v‖` in complex arithmetic.
pub fn resolvent_deviation(s: &BanachSetting, lambda: Complex64, side: BoundSide) -> f64 {
    use faer::linalg::solvers::DenseSolveCore;
    let (a, v) = (&s.a, &s.v);
    let zero = Complex64::new(0.0, 0.0);
    let (shifted, vc, yc) = match side {
        BoundSide::Left => (a.mul(v), complex_mat(v, zero), complex_mat(&s.y, zero)),
        BoundSide::Right => (v.mul(a), complex_mat(v, zero), complex_mat(&s.y, zero)),
    };
    let inv = complex_mat(&shifted, lambda).partial_piv_lu().inverse();
    let prod = match side {
        BoundSide::Left => &vc * &inv,
        BoundSide::Right => &inv * &vc,
    };
    complex_norm(&(&yc - &prod))
}

pub fn perturbation_bound(
    alg: &MatrixAlgebra<f64>,
    s: &BanachSetting,
    lambda: Complex64,
    side: BoundSide,
) -> Result<BoundReport> {
    let n = |x: &Mat<f64>| x.spectral_norm();
    let h = build_h(alg, s, side)?;
    let (norm_a, norm_v, norm_y, norm_h) = (n(&s.a), n(&s.v), n(&s.y), h.norm);
    let modulus = lambda.norm();
    let mut report = BoundReport {
        side,
        lambda_re: lambda.re,
        lambda_im: lambda.im,
        measured: 0.0,
        bound: 0.0,
        radius: f64::INFINITY,
        margin: f64::INFINITY,
        norm_a,
        norm_v,
        norm_y,
        norm_h,
        degenerate: true,
        holds: true,
    };
    if norm_a * norm_y * norm_h == 0.0 {
        return Ok(report);
    }
    report.degenerate = false;
    report.radius = 1.0 / (norm_a * norm_y * norm_y * norm_h);
    report.margin = report.radius - modulus;
    if report.margin <= 0.0 {
        return Err(Error::PreconditionFailed(format!(
            "|λ| = {modulus} is outside the admissible radius {:.6}",
            report.radius
        )));
    }
    if modulus == 0.0 {
        // the product tends to the inverse as λ → 0; both sides are 0
        return Ok(report);
    }
    let x = match side {
        BoundSide::Left => s.a.mul(&s.v),
        BoundSide::Right => s.v.mul(&s.a),
    };
    let sx = spectrum(alg, &x);
    if let Some(e) = sx.nonzero().iter().find(|e| (lambda.re + e.re).hypot(lambda.im + e.im) < 1e-12 * (1.0 + e.modulus())) {
        return Err(Error::PreconditionFailed(format!("λ lies in the spectrum of -{x:?} (eigenvalue {e:?})")));
    }
    report.measured = resolvent_deviation(s, lambda, side);
    let t = modulus * norm_a * norm_y * norm_y * norm_h;
    report.bound = modulus * norm_v * norm_a * norm_y.powi(3) * norm_h * norm_h / (1.0 - t);
    report.holds = report.measured <= report.bound * (1.0 + 1e-9) + 1e-13 * norm_y;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    /// `(1 - p_va) v`, `v (1 - p_av)`, `(va)^# v - v (av)^#`.
    pub residuals: Vec<Residual>,
    /// Matching distance between the nonzero spectra of `a v` and `v a`.
    pub spectral_gap: f64,
    pub nonzero_eigenvalues: usize,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(|r| r.ok)
    }
}

/// The identities behind the group route: annihilation of `v` by the
/// complementary group projections, the push-through of the group inverse,
/// and equality of the nonzero spectra of `a v` and `v a`.
pub fn group_identities(alg: &MatrixAlgebra<f64>, a: &Mat<f64>, v: &Mat<f64>) -> Result<IdentityReport> {
    let (av, va) = (a.mul(v), v.mul(a));
    let (sa, sv) = (spectrum(alg, &av), spectrum(alg, &va));
    let (Some(ga), Some(gv)) = (sa.group_inverse.clone(), sv.group_inverse.clone()) else {
        return Err(Error::PreconditionFailed("a v and v a must be group invertible".into()));
    };
    let n = |x: &Mat<f64>| x.spectral_norm();
    let (pa, pv) = (av.mul(&ga), va.mul(&gv));
    let nv = n(v);
    let residuals = vec![
        residual(alg, "(1 - p_va) v", &alg.one_minus(&pv).mul(v), nv * (1.0 + n(&pv))),
        residual(alg, "v (1 - p_av)", &v.mul(&alg.one_minus(&pa)), nv * (1.0 + n(&pa))),
        residual(alg, "(va)^# v - v (av)^#", &gv.mul(v).sub(&v.mul(&ga)), nv * (n(&ga) + n(&gv))),
    ];
    let (za, zv) = (sa.zero_multiplicity, sv.zero_multiplicity);
    let spectral_gap = if za == zv {
        super::spectrum::spectral_gap(sa.nonzero(), sv.nonzero())
    } else {
        f64::INFINITY
    };
    Ok(IdentityReport { residuals, spectral_gap, nonzero_eigenvalues: sa.nonzero().len() })
}

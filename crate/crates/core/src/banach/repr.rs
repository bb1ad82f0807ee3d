//! The (b,c)-inverse as an integral, a series and a resolvent limit, each
//! built from `a` and a `v` with `vR = bR` and `v^{-1}(0) = c^{-1}(0)`.
//!
//! Every routine also evaluates the mirrored form (`v` moved to the other
//! side) and fails with [`Error::InvariantViolated`] if the two disagree.

use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::DMatrix;
use serde::Serialize;

use super::spectrum::{spectrum, SpectralReport};
use crate::error::{Error, Result};
use crate::exec::{pairwise_sum, Execution};
use crate::ring::{Mat, MatrixAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RepresentationDetail {
    Integral { horizon: f64, rho: f64 },
    Series { beta: f64, ratio: f64 },
    Limit { lambda0: f64, last_lambda: f64 },
}

#[derive(Debug, Clone)]
pub struct Representation {
    pub y: Mat<f64>,
    pub mirrored: Mat<f64>,
    /// `‖y - mirrored‖ / max(‖y‖, 1e-300)`.
    pub mirror_gap: f64,
    pub error_estimate: f64,
    /// Integrand evaluations, series terms or resolvent solves.
    pub work: u64,
    pub detail: RepresentationDetail,
}

fn norm(x: &Mat<f64>) -> f64 {
    x.spectral_norm()
}

fn relative_gap(x: &Mat<f64>, y: &Mat<f64>) -> f64 {
    norm(&x.sub(y)) / norm(x).max(1e-300)
}

fn check_mirror(what: &str, y: &Mat<f64>, mirrored: &Mat<f64>, tol: f64) -> Result<f64> {
    let gap = relative_gap(y, mirrored);
    if gap > tol {
        return Err(Error::InvariantViolated(format!(
            "{what}: the two one-sided forms differ by {gap:.3e} (relative)"
        )));
    }
    Ok(gap)
}

fn group_data(alg: &MatrixAlgebra<f64>, x: &Mat<f64>, name: &str) -> Result<SpectralReport> {
    let s = spectrum(alg, x);
    if !s.group_invertible() {
        return Err(Error::InverseAbsent(format!("{name} is not group invertible, so no (b,c)-inverse exists")));
    }
    Ok(s)
}

// ---------------------------------------------------------------- integral

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Target relative error.
    pub tol: f64,
    /// Initial uniform panels on `[0, T]`; each is refined independently.
    pub panels: usize,
    pub max_depth: u32,
    /// Integrand evaluations after which panels stop refining. Only reached
    /// when the tolerance is out of reach, and then which panels got refined
    /// depends on scheduling.
    pub max_evals: u64,
    /// Largest admissible `ρ T`.
    pub max_decay: f64,
    pub exec: Execution,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            tol: 1e-10,
            panels: 16,
            max_depth: 30,
            max_evals: 2_000_000,
            max_decay: 200.0,
            exec: Execution::default(),
        }
    }
}

const GAUSS_ORDER: usize = 10;

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

struct Quadrature<'a> {
    integrand: &'a (dyn Fn(f64) -> DMatrix<f64> + Sync),
    rule: Vec<(f64, f64)>,
    /// Absolute error allowed per unit length.
    density: f64,
    max_depth: u32,
    max_evals: u64,
    /// Rounding error of the integrand per unit length; differences
    /// below it are noise.
    noise: f64,
    evals: AtomicU64,
}

struct Panel {
    value: DMatrix<f64>,
    error: f64,
    evals: u64,
}

impl Quadrature<'_> {
    fn rule(&self, t0: f64, t1: f64) -> DMatrix<f64> {
        self.evals.fetch_add(self.rule.len() as u64, Ordering::Relaxed);
        let (mid, half) = ((t0 + t1) / 2.0, (t1 - t0) / 2.0);
        let mut acc: Option<DMatrix<f64>> = None;
        for &(x, w) in &self.rule {
            let f = (self.integrand)(mid + half * x) * (w * half);
            acc = Some(match acc {
                Some(s) => s + f,
                None => f,
            });
        }
        acc.expect("nonempty rule")
    }

    fn adapt(&self, t0: f64, t1: f64, whole: DMatrix<f64>, depth: u32) -> Panel {
        let mid = (t0 + t1) / 2.0;
        let (l, r) = (self.rule(t0, mid), self.rule(mid, t1));
        let refined = &l + &r;
        let error = (&refined - &whole).norm();
        let evals = 2 * self.rule.len() as u64;
        let floor = self.noise * (t1 - t0);
        let spent = self.evals.load(Ordering::Relaxed) >= self.max_evals;
        if error <= (self.density * (t1 - t0)).max(floor) || depth >= self.max_depth || spent {
            return Panel { value: refined, error, evals };
        }
        let (pl, pr) = (self.adapt(t0, mid, l, depth + 1), self.adapt(mid, t1, r, depth + 1));
        Panel { value: pl.value + pr.value, error: pl.error + pr.error, evals: evals + pl.evals + pr.evals }
    }

    fn integrate(&self, horizon: f64, panels: usize, exec: Execution) -> Panel {
        let h = horizon / panels as f64;
        let parts = exec.map(0..panels, |i| {
            let (t0, t1) = (i as f64 * h, (i + 1) as f64 * h);
            let whole = self.rule(t0, t1);
            let mut p = self.adapt(t0, t1, whole, 0);
            p.evals += self.rule.len() as u64;
            p
        });
        let values: Vec<DMatrix<f64>> = parts.iter().map(|p| p.value.clone()).collect();
        let zero = DMatrix::zeros(values[0].nrows(), values[0].ncols());
        Panel {
            value: pairwise_sum(&values, &zero, &|x, y| x + y),
            error: parts.iter().map(|p| p.error).sum(),
            evals: parts.iter().map(|p| p.evals).sum(),
        }
    }
}

/// `∫_0^∞ v e^{-(a v) t} dt`, with `∫_0^∞ e^{-(v a) t} v dt` as the mirror.
///
/// Requires every nonzero eigenvalue of `a v` to have positive real part.
/// A nonzero eigenvalue on the imaginary axis makes the integral diverge,
/// so the weaker condition `Re >= 0` is not accepted.
pub fn integral_representation(
    alg: &MatrixAlgebra<f64>,
    a: &Mat<f64>,
    v: &Mat<f64>,
    cfg: &QuadratureConfig,
) -> Result<Representation> {
    let av = a.mul(v);
    let va = v.mul(a);
    let s = group_data(alg, &av, "a v")?;
    if let Some(bad) = s.nonzero().iter().find(|e| e.re <= 0.0) {
        return Err(Error::SpectralPreconditionFailed(format!(
            "a v has the nonzero eigenvalue {:.6}{:+.6}i; the integral needs Re > 0 on every nonzero \
             eigenvalue (Re >= 0 is not enough when an eigenvalue sits on the imaginary axis)",
            bad.re, bad.im
        )));
    }
    let n = alg.dim();
    let Some(rho) = s.min_nonzero_real_part else {
        // a v = 0 with a group inverse forces v = v (1 - p_av) = 0
        let z = Mat::zeros(n, n);
        let detail = RepresentationDetail::Integral { horizon: 0.0, rho: 0.0 };
        return Ok(Representation { y: z.clone(), mirrored: z, mirror_gap: 0.0, error_estimate: 0.0, work: 0, detail });
    };

    let (av_na, va_na, v_na) = (av.to_nalgebra(), va.to_nalgebra(), v.to_nalgebra());
    let scale = v_na.norm() / rho;
    let target = cfg.tol * scale;

    // grow the horizon until the measured decay makes the tail negligible
    let tail = |t: f64| (&v_na * (&av_na * -t).exp()).norm() / rho;
    let mut horizon = (1.0 / cfg.tol).ln() / rho;
    while tail(horizon) > target / 4.0 {
        horizon *= 2.0;
        if rho * horizon > cfg.max_decay {
            return Err(Error::ConvergenceFailure(format!(
                "integrand still of size {:.3e} at t = {horizon:.3e}",
                tail(horizon) * rho
            )));
        }
    }

    let rule = gauss_legendre(GAUSS_ORDER);
    // v e^{-a v t} is small through cancellation, so its rounding error
    // follows ‖v‖ ‖e^{-a v t}‖ <= ‖v‖ (1 + ‖a v‖ / ρ) rather than its own size
    let noise = 256.0 * f64::EPSILON * v_na.norm() * (1.0 + av_na.norm().max(va_na.norm()) / rho);
    let density = target / (2.0 * horizon);
    let left = |t: f64| &v_na * (&av_na * -t).exp();
    let right = |t: f64| (&va_na * -t).exp() * &v_na;
    let run = |f: &(dyn Fn(f64) -> DMatrix<f64> + Sync)| {
        Quadrature {
            integrand: f,
            rule: rule.clone(),
            density,
            max_depth: cfg.max_depth,
            max_evals: cfg.max_evals,
            noise,
            evals: AtomicU64::new(0),
        }
            .integrate(horizon, cfg.panels.max(1), cfg.exec)
    };
    let (l, r) = (run(&left), run(&right));
    let error_estimate = (l.error + tail(horizon)) / scale.max(1e-300);
    if error_estimate > cfg.tol * 10.0 {
        return Err(Error::ConvergenceFailure(format!(
            "quadrature error estimate {error_estimate:.3e} above tolerance {:.1e}",
            cfg.tol
        )));
    }
    let y = Mat::from_nalgebra(&l.value);
    let mirrored = Mat::from_nalgebra(&r.value);
    let mirror_gap = check_mirror("integral", &y, &mirrored, (1e3 * cfg.tol).max(1e-9))?;
    Ok(Representation {
        y,
        mirrored,
        mirror_gap,
        error_estimate,
        work: l.evals + r.evals,
        detail: RepresentationDetail::Integral { horizon, rho },
    })
}

// ------------------------------------------------------------------ series

#[derive(Debug, Clone, Copy)]
pub struct SeriesConfig {
    pub tol: f64,
    pub max_terms: u64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { tol: 1e-12, max_terms: 1_000_000 }
    }
}

/// `‖p_va - β v a‖`, the contraction ratio governing the series.
pub fn series_ratio(alg: &MatrixAlgebra<f64>, a: &Mat<f64>, v: &Mat<f64>, beta: f64) -> Result<f64> {
    let va = v.mul(a);
    let s = group_data(alg, &va, "v a")?;
    let p = s.group_projection.expect("group invertible");
    Ok(norm(&p.sub(&va.scale(&beta))))
}

/// Real `β` minimizing `‖p_va - β v a‖` by golden-section search (the
/// function is convex), together with the attained ratio. Fails when the
/// minimum is not below 1.
pub fn choose_beta(alg: &MatrixAlgebra<f64>, a: &Mat<f64>, v: &Mat<f64>) -> Result<(f64, f64)> {
    let va = v.mul(a);
    let s = group_data(alg, &va, "v a")?;
    let p = s.group_projection.expect("group invertible");
    let r = alg.rank(&va);
    if r == 0 {
        return Ok((1.0, norm(&p)));
    }
    let f64m = faer::Mat::<f64>::from_fn(va.rows(), va.cols(), |i, j| *va.get(i, j));
    let sigma = f64m.singular_values().expect("svd converges");
    // f(β) >= |β| σ_r - ‖p‖, so the minimizer lies in [-L, L]
    let bound = 2.0 * (norm(&p) + 1.0) / sigma[r - 1];
    let f = |beta: f64| norm(&p.sub(&va.scale(&beta)));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (-bound, bound);
    let (mut x1, mut x2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-14 * bound {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let (beta, ratio) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if ratio >= 1.0 {
        return Err(Error::PreconditionFailed(format!(
            "no real β gives ‖p_va - β v a‖ < 1 (best β = {beta:.6e} gives {ratio:.6})"
        )));
    }
    Ok((beta, ratio))
}

/// `β Σ (1 - β v a)^n v`, mirrored by `β Σ v (1 - β a v)^n`.
///
/// The tail after `N` terms is bounded by `|β| ‖v‖ r^{N+1} / (1 - r)` with
/// `r = ‖p_va - β v a‖`. The mirror is summed over the same number of
/// terms: its terms coincide with the original ones, so its own ratio
/// `‖p_av - β a v‖` is not needed.
pub fn series_representation(
    alg: &MatrixAlgebra<f64>,
    a: &Mat<f64>,
    v: &Mat<f64>,
    beta: Option<f64>,
    cfg: &SeriesConfig,
) -> Result<Representation> {
    let (beta, ratio) = match beta {
        Some(b) => (b, series_ratio(alg, a, v, b)?),
        None => choose_beta(alg, a, v)?,
    };
    if ratio >= 1.0 {
        return Err(Error::PreconditionFailed(format!(
            "‖p_va - β v a‖ = {ratio:.6} >= 1 for β = {beta}"
        )));
    }
    let n = alg.dim();
    let one = Mat::identity(n);
    let step = one.sub(&v.mul(a).scale(&beta));
    let mirror_step = one.sub(&a.mul(v).scale(&beta));
    let nv = norm(v);
    let mut term = v.clone();
    let mut sum = Mat::zeros(n, n);
    let mut terms = 0u64;
    let mut tail;
    loop {
        sum = sum.add(&term);
        terms += 1;
        tail = beta.abs() * nv * ratio.powf(terms as f64) / (1.0 - ratio);
        if tail <= cfg.tol * (beta.abs() * norm(&sum)).max(1e-300) || nv == 0.0 {
            break;
        }
        if terms >= cfg.max_terms {
            return Err(Error::ConvergenceFailure(format!(
                "series tail bound {tail:.3e} after {terms} terms (ratio {ratio:.6})"
            )));
        }
        term = step.mul(&term);
    }
    let y = sum.scale(&beta);

    let mut mterm = v.clone();
    let mut msum = Mat::zeros(n, n);
    for k in 0..terms {
        msum = msum.add(&mterm);
        if k + 1 < terms {
            mterm = mterm.mul(&mirror_step);
        }
    }
    let mirrored = msum.scale(&beta);
    let mirror_gap = check_mirror("series", &y, &mirrored, (1e3 * cfg.tol).max(1e-9))?;
    Ok(Representation {
        error_estimate: tail / norm(&y).max(1e-300),
        y,
        mirrored,
        mirror_gap,
        work: 2 * terms,
        detail: RepresentationDetail::Series { beta, ratio },
    })
}

// ------------------------------------------------------------------- limit

#[derive(Debug, Clone, Copy)]
pub struct LimitConfig {
    /// Stop as soon as successive extrapolated values agree to this.
    pub tol: f64,
    /// Once rounding dominates, the best estimate is returned if its
    /// relative change is below this; otherwise the run fails.
    pub accept: f64,
    /// First point of the schedule `λ_k = λ0 2^{-k}`; by default
    /// `min(1, ρ/2)` with `ρ` the smallest nonzero modulus in `σ(a v)`.
    pub lambda0: Option<f64>,
    pub max_steps: usize,
    /// Columns of the Richardson table.
    pub extrapolation_depth: usize,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig { tol: 1e-12, accept: 1e-8, lambda0: None, max_steps: 48, extrapolation_depth: 8 }
    }
}

fn resolvent_sides(x: &Mat<f64>, lambda: f64) -> Option<Mat<f64>> {
    let n = x.rows();
    let m = faer::Mat::<f64>::from_fn(n, n, |i, j| *x.get(i, j) + if i == j { lambda } else { 0.0 });
    use faer::linalg::solvers::DenseSolveCore;
    let inv = m.partial_piv_lu().inverse();
    let out = Mat::from_fn(n, n, |i, j| inv[(i, j)]);
    out.data().iter().all(|z| z.is_finite()).then_some(out)
}

struct Richardson {
    rows: Vec<Vec<Mat<f64>>>,
    depth: usize,
}

impl Richardson {
    /// Adds `f(λ_k)` and returns the new diagonal estimate.
    fn push(&mut self, f: Mat<f64>) -> Mat<f64> {
        let mut row = vec![f];
        if let Some(prev) = self.rows.last() {
            for j in 1..=prev.len().min(self.depth) {
                let w = 2f64.powi(j as i32);
                let next = row[j - 1].scale(&w).sub(&prev[j - 1]).scale(&(1.0 / (w - 1.0)));
                row.push(next);
            }
        }
        let best = row.last().expect("nonempty").clone();
        self.rows.push(row);
        best
    }
}

/// `lim v (λ + a v)^{-1}` as `λ → 0` along `λ_k = λ0 2^{-k}`, accelerated
/// by Richardson extrapolation in `λ`; mirrored by `(λ + v a)^{-1} v`.
///
/// When no (b,c)-inverse exists the iterates grow like `1/λ` and the
/// extrapolated values never settle, which is reported as
/// [`Error::ConvergenceFailure`].
pub fn limit_representation(
    alg: &MatrixAlgebra<f64>,
    a: &Mat<f64>,
    v: &Mat<f64>,
    cfg: &LimitConfig,
) -> Result<Representation> {
    let av = a.mul(v);
    let va = v.mul(a);
    let s = spectrum(alg, &av);
    let rho = s.min_nonzero_modulus.unwrap_or(2.0);
    let mut lambda0 = cfg.lambda0.unwrap_or_else(|| (rho / 2.0).min(1.0));
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::PreconditionFailed(format!("λ0 must be positive, got {lambda0}")));
    }
    // keep the whole schedule away from σ(-a v)
    let hits = |l0: f64| {
        (0..cfg.max_steps).any(|k| {
            let l = l0 / 2f64.powi(k as i32);
            s.nonzero().iter().any(|e| (l + e.re).hypot(e.im) < 1e-12 * (1.0 + e.modulus()))
        })
    };
    let mut adjust = 0;
    while hits(lambda0) {
        lambda0 *= 0.9;
        adjust += 1;
        if adjust > 100 {
            return Err(Error::PreconditionFailed("cannot place the λ schedule off σ(-a v)".into()));
        }
    }

    let mut left = Richardson { rows: Vec::new(), depth: cfg.extrapolation_depth };
    let mut right = Richardson { rows: Vec::new(), depth: cfg.extrapolation_depth };
    let mut prev: Option<Mat<f64>> = None;
    // (relative change, left, right, step, λ) of the best extrapolated value
    let mut best: Option<(f64, Mat<f64>, Mat<f64>, usize, f64)> = None;
    let mut first_norm = None;
    for k in 0..cfg.max_steps {
        let lambda = lambda0 / 2f64.powi(k as i32);
        let (Some(ra), Some(rv)) = (resolvent_sides(&av, lambda), resolvent_sides(&va, lambda)) else {
            break;
        };
        let f = v.mul(&ra);
        let g = rv.mul(v);
        let fnorm = norm(&f);
        let f0 = *first_norm.get_or_insert(fnorm);
        if fnorm * lambda > 1e-3 * (f0 * lambda0).max(1e-300) && fnorm > 1e8 * f0.max(1e-300) {
            return Err(Error::ConvergenceFailure(format!(
                "resolvent iterates grow like 1/λ: ‖v (λ + a v)^-1‖ = {fnorm:.3e} at λ = {lambda:.3e}"
            )));
        }
        let (ly, ry) = (left.push(f), right.push(g));
        if let Some(py) = &prev {
            let change = norm(&ly.sub(py)) / norm(&ly).max(1e-300);
            if k >= 2 && best.as_ref().is_none_or(|b| change < b.0) {
                best = Some((change, ly.clone(), ry.clone(), k, lambda));
            }
            let (b, ..) = best.as_ref().map_or((f64::INFINITY, ()), |b| (b.0, ()));
            // converged, or rounding has taken over
            if k >= 2 && (change <= cfg.tol || (b <= cfg.accept && change > 1e3 * b)) {
                break;
            }
        }
        prev = Some(ly);
    }
    match best {
        Some((change, y, mirrored, k, lambda)) if change <= cfg.accept => {
            let mirror_gap = check_mirror("limit", &y, &mirrored, (1e2 * cfg.accept).max(1e-9))?;
            Ok(Representation {
                error_estimate: change,
                y,
                mirrored,
                mirror_gap,
                work: 2 * (k as u64 + 1),
                detail: RepresentationDetail::Limit { lambda0, last_lambda: lambda },
            })
        }
        _ => Err(Error::ConvergenceFailure(format!(
            "no convergence after {} halvings of λ (best relative change {:.3e}, λ0 = {lambda0:.3e})",
            cfg.max_steps,
            best.map_or(f64::INFINITY, |b| b.0)
        ))),
    }
}

//! The three-term difference identity between two (b,c)-inverses and the
//! numerical continuity experiment built on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::inverse::{bc_inverse_default, CornerFrame, InverseBackend};
use crate::ring::{Mat, MatrixAlgebra, Ring};

pub const DIFFERENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceReport {
    /// `‖(y2 - y1) - (T1 + T2 + T3)‖`.
    pub residual: f64,
    pub scale: f64,
    pub relative: f64,
    /// Norms of `T1 = y2 (q2 - q1)(1 - a1 y1)`, `T2 = (1 - y2 a2)(p2 - p1) y1`
    /// and `T3 = y2 (a1 - a2) y1`.
    pub terms: [f64; 3],
    /// `‖y2 - y1‖`.
    pub difference: f64,
    /// Residual of `T1 - T2 + T3`, the variant with the middle term
    /// subtracted. It only vanishes when `T2 = 0`, e.g. for equal `p`.
    pub subtracted_variant_residual: f64,
    pub holds: bool,
}

/// Evaluates both sides of
/// `y2 - y1 = y2 (q2 - q1)(1 - a1 y1) + (1 - y2 a2)(p2 - p1) y1 + y2 (a1 - a2) y1`
/// where `y_i` is the (b_i,c_i)-inverse of `a_i` and `p_i`, `q_i` come from
/// the frames.
///
/// The middle term enters with a plus sign: `y2 a2 p2 = p2` and `y1 = p1 y1`
/// give `y2 a2 y1 - y1 = (1 - y2 a2)(p2 - p1) y1`.
pub fn difference_identity<R: InverseBackend>(
    ring: &R,
    a1: &R::Elem,
    f1: &CornerFrame<R::Elem>,
    a2: &R::Elem,
    f2: &CornerFrame<R::Elem>,
) -> Result<DifferenceReport> {
    let inverse = |a, f| {
        bc_inverse_default(ring, a, f).map_err(|e| match e {
            Error::InverseAbsent(m) => Error::PreconditionFailed(format!("both inverses must exist: {m}")),
            other => other,
        })
    };
    let (y1, y2) = (inverse(a1, f1)?, inverse(a2, f2)?);
    let n = |x: &R::Elem| ring.norm(x);
    let t1 = ring.product(&[&y2, &ring.sub(&f2.q, &f1.q), &ring.one_minus(&ring.mul(a1, &y1))]);
    let t2 = ring.product(&[&ring.one_minus(&ring.mul(&y2, a2)), &ring.sub(&f2.p, &f1.p), &y1]);
    let t3 = ring.product(&[&y2, &ring.sub(a1, a2), &y1]);
    let lhs = ring.sub(&y2, &y1);
    let rhs = ring.add(&ring.add(&t1, &t2), &t3);
    let r = ring.sub(&lhs, &rhs);
    let subtracted = ring.sub(&lhs, &ring.add(&ring.sub(&t1, &t2), &t3));
    let (ny1, ny2) = (n(&y1), n(&y2));
    let scale = ny1
        + ny2
        + ny2 * (n(&f1.q) + n(&f2.q)) * (1.0 + n(a1) * ny1)
        + (1.0 + ny2 * n(a2)) * (n(&f1.p) + n(&f2.p)) * ny1
        + ny2 * (n(a1) + n(a2)) * ny1;
    let residual = n(&r);
    let relative = if scale > 0.0 { residual / scale } else { residual };
    Ok(DifferenceReport {
        residual,
        scale,
        relative,
        terms: [n(&t1), n(&t2), n(&t3)],
        difference: n(&lhs),
        subtracted_variant_residual: n(&subtracted),
        holds: ring.residual_ok(&r, scale) && relative <= DIFFERENCE_TOL.max(ring_tol(ring)),
    })
}

fn ring_tol<R: Ring>(ring: &R) -> f64 {
    if ring.descriptor().is_exact() {
        0.0
    } else {
        DIFFERENCE_TOL
    }
}

/// `a_n = a + da / n`, `b_n = b + db / n`, `c_n = c + dc / n` with canonical
/// inner inverses, sampled at `indices`.
#[derive(Debug, Clone)]
pub struct SequenceSpec {
    pub a: Mat<f64>,
    pub da: Mat<f64>,
    pub b: Mat<f64>,
    pub db: Mat<f64>,
    pub c: Mat<f64>,
    pub dc: Mat<f64>,
    pub indices: Vec<u64>,
}

impl SequenceSpec {
    /// A sequence that only moves `a`, sampled at `1..=last`.
    pub fn moving_a(a: Mat<f64>, da: Mat<f64>, b: Mat<f64>, c: Mat<f64>, last: u64) -> Self {
        let z = Mat::zeros(a.rows(), a.cols());
        SequenceSpec { a, da, b, db: z.clone(), c, dc: z, indices: (1..=last).collect() }
    }

    pub fn term(&self, n: u64) -> (Mat<f64>, Mat<f64>, Mat<f64>) {
        let s = 1.0 / n as f64;
        (self.a.add(&self.da.scale(&s)), self.b.add(&self.db.scale(&s)), self.c.add(&self.dc.scale(&s)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityTerm {
    pub n: u64,
    /// `‖a_n^-(b_n,c_n)‖`, absent when that inverse does not exist.
    pub inverse_norm: Option<f64>,
    /// `‖a_n^-(b_n,c_n) - a^-(b,c)‖` when both exist.
    pub deviation: Option<f64>,
    /// `max(‖a_n - a‖, ‖p_n - p‖, ‖q_n - q‖)`.
    pub input_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub terms: Vec<ContinuityTerm>,
    pub limit_exists: bool,
    pub limit_norm: Option<f64>,
    pub inputs_converge: bool,
    /// Log-log slope of the inverse norms over the later half of the run.
    pub norm_growth: f64,
    pub norms_bounded: bool,
    pub deviations_vanish: bool,
    pub deviations_monotone: bool,
    /// Bounded norms iff vanishing deviations; `None` when the limit inverse
    /// is missing or the inputs do not converge, so nothing is claimed.
    pub equivalence: Option<bool>,
    pub verdict: Verdict,
}

/// Growth below this log-log slope counts as bounded; decay beyond its
/// negative counts as convergence to 0.
const SLOPE_THRESHOLD: f64 = 0.25;

/// Least-squares slope of `ln y` against `ln n` over the later half.
fn log_slope(points: &[(u64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points[points.len() / 2..]
        .iter()
        .filter(|(_, y)| *y > 0.0)
        .map(|&(n, y)| ((n as f64).ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn vanishes(points: &[(u64, f64)], scale: f64) -> bool {
    let Some(&(_, last)) = points.last() else { return false };
    if last <= 1e-10 * scale {
        return true;
    }
    let first = points[0].1;
    last < first && log_slope(points).is_some_and(|s| s <= -SLOPE_THRESHOLD)
}

pub fn continuity_experiment(
    alg: &MatrixAlgebra<f64>,
    spec: &SequenceSpec,
    exec: Execution,
) -> Result<ContinuityReport> {
    if spec.indices.is_empty() || spec.indices.contains(&0) {
        return Err(Error::PreconditionFailed("indices must be a nonempty list of positive integers".into()));
    }
    let limit = CornerFrame::canonical(alg, spec.b.clone(), spec.c.clone())?;
    let terms = exec.map_slice(&spec.indices, |&n| {
        let (a, b, c) = spec.term(n);
        CornerFrame::canonical(alg, b, c).map(|f| (n, a, f))
    });
    let terms = terms.into_iter().collect::<Result<Vec<_>>>()?;
    continuity_from_terms(alg, &spec.a, &limit, &terms, exec)
}

/// The experiment for an arbitrary sampled sequence `(n, a_n, frame_n)`.
pub fn continuity_from_terms(
    alg: &MatrixAlgebra<f64>,
    a: &Mat<f64>,
    frame: &CornerFrame<Mat<f64>>,
    terms: &[(u64, Mat<f64>, CornerFrame<Mat<f64>>)],
    exec: Execution,
) -> Result<ContinuityReport> {
    let n = |x: &Mat<f64>| x.spectral_norm();
    let limit = bc_inverse_default(alg, a, frame).ok();
    let rows = exec.map_slice(terms, |(k, ak, fk)| {
        let yk = bc_inverse_default(alg, ak, fk).ok();
        ContinuityTerm {
            n: *k,
            inverse_norm: yk.as_ref().map(n),
            deviation: yk.as_ref().zip(limit.as_ref()).map(|(yk, y)| n(&yk.sub(y))),
            input_gap: n(&ak.sub(a)).max(n(&fk.p.sub(&frame.p))).max(n(&fk.q.sub(&frame.q))),
        }
    });

    let norms: Vec<(u64, f64)> = rows.iter().filter_map(|t| t.inverse_norm.map(|x| (t.n, x))).collect();
    let all_exist = norms.len() == rows.len();
    let norm_growth = log_slope(&norms).unwrap_or(0.0);
    let norms_bounded = all_exist && norm_growth <= SLOPE_THRESHOLD;

    let gaps: Vec<(u64, f64)> = rows.iter().map(|t| (t.n, t.input_gap)).collect();
    let inputs_converge = vanishes(&gaps, 1.0 + n(a));

    let limit_norm = limit.as_ref().map(n);
    let devs: Vec<(u64, f64)> = rows.iter().filter_map(|t| t.deviation.map(|d| (t.n, d))).collect();
    let deviations_vanish =
        limit.is_some() && devs.len() == rows.len() && vanishes(&devs, 1.0 + limit_norm.unwrap_or(0.0));
    let deviations_monotone = devs.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9) + 1e-15);

    let equivalence = (limit.is_some() && inputs_converge).then_some(norms_bounded == deviations_vanish);
    let verdict = if deviations_vanish {
        Verdict::Convergent
    } else if !norms_bounded {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    };
    Ok(ContinuityReport {
        terms: rows,
        limit_exists: limit.is_some(),
        limit_norm,
        inputs_converge,
        norm_growth,
        norms_bounded,
        deviations_vanish,
        deviations_monotone,
        equivalence,
        verdict,
    })
}

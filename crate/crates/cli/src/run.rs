//! Maps a [`JobSpec`] onto the library and collects the findings.

use serde::Serialize;
use serde_json::{json, Value};

use bcinv::banach::{
    build_h, continuity_experiment, difference_identity, group_identities, integral_representation,
    limit_representation, perturbation_bound, series_representation, spectrum, BanachSetting, BoundSide,
    Complex64, LimitConfig, QuadratureConfig, Representation, SequenceSpec, SeriesConfig,
};
use bcinv::inverse::{
    all_methods, bc_inverse_certified, bc_inverse_default, residual, reverse_order_law_check, verify_bc_inverse,
    CornerFrame, InverseBackend, Method,
};
use bcinv::lab::{run_suite, LabConfig, Suite};
use bcinv::ring::{AnyRing, FiniteRing, Literal, Mat, MatrixAlgebra, RingDescriptor};
use bcinv::{Error, Execution, Result};

use crate::job::{Command, FrameNames, JobSpec, MethodChoice};
use crate::report::{Diagnostic, Findings, Report, ResidualRecord};

/// Relative agreement required between a representation and the algebraic inverse.
pub const REPRESENTATION_AGREEMENT: f64 = 1e-6;

const DEFAULT_LAST: u64 = 1000;

pub fn execute(job: &JobSpec) -> Report {
    let mut f = Findings::default();
    if let Err(e) = job.validate().and_then(|()| dispatch(job, &mut f)) {
        f.failure = Some(e);
    }
    f.into_report(job.clone())
}

fn exec(job: &JobSpec) -> Execution {
    if job.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn ring_of(job: &JobSpec) -> Result<AnyRing> {
    let mut d: RingDescriptor = job.ring.parse()?;
    if let Some(tol) = job.tol {
        d = d.with_tolerance(tol)?;
    }
    AnyRing::new(d)
}

fn needs_float(job: &JobSpec, ring: AnyRing) -> Result<MatrixAlgebra<f64>> {
    match ring {
        AnyRing::Float(alg) => Ok(alg),
        other => Err(Error::PreconditionFailed(format!(
            "`{}` needs a real matrix ring (R:n), got {}",
            job.command,
            other.descriptor()
        ))),
    }
}

fn dispatch(job: &JobSpec, f: &mut Findings) -> Result<()> {
    let ring = ring_of(job)?;
    f.output("ring", ring.descriptor().to_string());
    match job.command {
        Command::Compute if job.method.is_some_and(MethodChoice::is_representation) => match ring {
            AnyRing::Float(alg) => compute_representation(&alg, job, f),
            other => Err(Error::UnsupportedMethod {
                method: job.method.map(MethodChoice::name).unwrap_or_default().into(),
                ring: other.descriptor().to_string(),
            }),
        },
        Command::Compute => on_any(&ring, |r| r.compute(job, f)),
        Command::Verify => on_any(&ring, |r| r.verify(job, f)),
        Command::Rol => on_any(&ring, |r| r.rol(job, f)),
        Command::Lab => match ring {
            AnyRing::Finite(r) => lab(&r, job, f),
            other => Err(Error::PreconditionFailed(format!("`lab` needs a finite ring, got {}", other.descriptor()))),
        },
        Command::Banach => banach(&needs_float(job, ring)?, job, f),
        Command::Continuity => continuity(&needs_float(job, ring)?, job, f),
    }
}

/// Runs a generic command on whichever backend the descriptor selected.
fn on_any<F>(ring: &AnyRing, mut run: F) -> Result<()>
where
    F: FnMut(&dyn Backend) -> Result<()>,
{
    match ring {
        AnyRing::Finite(r) => run(r),
        AnyRing::Rational(r) => run(r),
        AnyRing::Float(r) => run(r),
    }
}

/// The object-safe slice of the library a generic command needs.
trait Backend {
    fn compute(&self, job: &JobSpec, f: &mut Findings) -> Result<()>;
    fn verify(&self, job: &JobSpec, f: &mut Findings) -> Result<()>;
    fn rol(&self, job: &JobSpec, f: &mut Findings) -> Result<()>;
}

impl<R: InverseBackend + Literal> Backend for R {
    fn compute(&self, job: &JobSpec, f: &mut Findings) -> Result<()> {
        compute_on(self, job, f)
    }
    fn verify(&self, job: &JobSpec, f: &mut Findings) -> Result<()> {
        verify_on(self, job, f)
    }
    fn rol(&self, job: &JobSpec, f: &mut Findings) -> Result<()> {
        rol_on(self, job, f)
    }
}

// ------------------------------------------------------------------ inputs

fn element<R: Literal>(r: &R, job: &JobSpec, name: &str) -> Result<R::Elem> {
    let text = job.element(name)?;
    r.parse_literal(text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("element `{name}`: {m}")),
        other => other,
    })
}

fn optional_element<R: Literal>(r: &R, job: &JobSpec, name: &str) -> Result<Option<R::Elem>> {
    if job.elements.contains_key(name) {
        element(r, job, name).map(Some)
    } else {
        Ok(None)
    }
}

fn frame_from<R: InverseBackend + Literal>(
    r: &R,
    job: &JobSpec,
    names: &FrameNames,
) -> Result<CornerFrame<R::Elem>> {
    let b = element(r, job, &names.b)?;
    let c = element(r, job, &names.c)?;
    if names.g.is_none() && names.h.is_none() {
        return CornerFrame::canonical(r, b, c);
    }
    let canonical = || CornerFrame::canonical(r, b.clone(), c.clone());
    let g = match &names.g {
        Some(n) => element(r, job, n)?,
        None => canonical()?.g,
    };
    let h = match &names.h {
        Some(n) => element(r, job, n)?,
        None => canonical()?.h,
    };
    CornerFrame::new(r, b, c, g, h)
}

#[derive(Serialize)]
struct RenderedFrame {
    b: String,
    c: String,
    g: String,
    h: String,
    p: String,
    q: String,
}

fn render_frame<R: Literal>(r: &R, fr: &CornerFrame<R::Elem>) -> RenderedFrame {
    RenderedFrame {
        b: r.render(&fr.b),
        c: r.render(&fr.c),
        g: r.render(&fr.g),
        h: r.render(&fr.h),
        p: r.render(&fr.p),
        q: r.render(&fr.q),
    }
}

fn method_choice(m: Method) -> MethodChoice {
    match m {
        Method::CornerSolve => MethodChoice::Corner,
        Method::Factor => MethodChoice::Factor,
        Method::Group => MethodChoice::Group,
        Method::Exhaustive => MethodChoice::Exhaustive,
    }
}

// ----------------------------------------------------------------- compute

fn compute_on<R: InverseBackend + Literal>(r: &R, job: &JobSpec, f: &mut Findings) -> Result<()> {
    let a = element(r, job, "a")?;
    let frame = frame_from(r, job, &job.primary_frame()?)?;
    f.output("frame", render_frame(r, &frame));

    let requested = job.method.and_then(MethodChoice::algebraic);
    let method = requested.unwrap_or_else(|| r.default_method());
    f.output("method", method_choice(method));
    let cert = bc_inverse_certified(r, &a, &frame, method);

    // Without an explicit method, every available method is run and compared.
    if requested.is_none() {
        let runs = all_methods(r, &a, &frame);
        let listed: Vec<Value> = runs
            .iter()
            .map(|(m, res)| match res {
                Ok(y) => json!({ "method": method_choice(*m), "y": r.render(y) }),
                Err(e) => json!({ "method": method_choice(*m), "error": Diagnostic::of(e) }),
            })
            .collect();
        f.output("methods", listed);
        let agree = match &cert {
            Ok(c) => runs.iter().all(|(_, res)| res.as_ref().is_ok_and(|y| r.eq(y, &c.y))),
            Err(_) => runs.iter().all(|(_, res)| res.is_err()),
        };
        f.verdict("every method gives the same answer", agree, None);
    }

    let cert = cert?;
    f.output("y", r.render(&cert.y));
    f.residuals("", &cert.residuals);
    f.verdict("y satisfies the defining equations", cert.verdict, None);
    Ok(())
}

fn representation_output(method: MethodChoice, rep: &Representation, reference: Option<&Mat<f64>>) -> Value {
    let deviation = reference.map(|y| y.sub(&rep.y).spectral_norm() / y.spectral_norm().max(1e-300));
    json!({
        "method": method,
        "y": rep.y.to_string(),
        "mirror_gap": rep.mirror_gap,
        "error_estimate": rep.error_estimate,
        "work": rep.work,
        "detail": rep.detail,
        "deviation_from_algebraic": deviation,
    })
}

fn representation(
    alg: &MatrixAlgebra<f64>,
    job: &JobSpec,
    method: MethodChoice,
    a: &Mat<f64>,
    v: &Mat<f64>,
) -> Result<Representation> {
    match method {
        MethodChoice::Series => series_representation(alg, a, v, job.beta, &SeriesConfig::default()),
        MethodChoice::Integral => {
            integral_representation(alg, a, v, &QuadratureConfig { exec: exec(job), ..QuadratureConfig::default() })
        }
        MethodChoice::Limit => {
            limit_representation(alg, a, v, &LimitConfig { lambda0: job.lambda0, ..LimitConfig::default() })
        }
        other => Err(Error::Parse(format!("`{}` is not a representation", other.name()))),
    }
}

fn compute_representation(alg: &MatrixAlgebra<f64>, job: &JobSpec, f: &mut Findings) -> Result<()> {
    let method = job.method.expect("dispatched on a method");
    let a = element(alg, job, "a")?;
    let frame = frame_from(alg, job, &job.primary_frame()?)?;
    f.output("frame", render_frame(alg, &frame));
    f.output("method", method);
    let v = alg.build_v(&frame)?;
    f.output("v", v.to_string());
    let reference = bc_inverse_default(alg, &a, &frame).ok();
    let rep = representation(alg, job, method, &a, &v)?;
    f.output("representation", representation_output(method, &rep, reference.as_ref()));
    let cert = verify_bc_inverse(alg, &a, &frame, &rep.y);
    f.output("y", rep.y.to_string());
    f.residuals("", &cert.residuals);
    f.verdict("y satisfies the defining equations", cert.verdict, None);
    Ok(())
}

// ------------------------------------------------------------------ verify

fn verify_on<R: InverseBackend + Literal>(r: &R, job: &JobSpec, f: &mut Findings) -> Result<()> {
    let a = element(r, job, "a")?;
    let y = element(r, job, "y")?;
    let frame = frame_from(r, job, &job.primary_frame()?)?;
    f.output("frame", render_frame(r, &frame));
    let cert = verify_bc_inverse(r, &a, &frame, &y);
    f.output("y", r.render(&y));
    f.residuals("", &cert.residuals);
    let worst = cert.worst().filter(|w| !w.ok).map(|w| format!("{} = {:e}", w.name, w.norm));
    f.verdict("y satisfies the defining equations", cert.verdict, worst);
    match bc_inverse_default(r, &a, &frame) {
        Ok(z) => {
            f.output("computed", r.render(&z));
            if cert.verdict {
                f.verdict("y equals the computed inverse", r.eq(&y, &z), None);
            }
        }
        Err(e) => f.output("computed_error", Diagnostic::of(&e)),
    }
    Ok(())
}

// --------------------------------------------------------------------- rol

fn rol_on<R: InverseBackend + Literal>(r: &R, job: &JobSpec, f: &mut Findings) -> Result<()> {
    let a1 = element(r, job, "a")?;
    let a2 = element(r, job, "a2")?;
    let f1 = frame_from(r, job, &job.primary_frame()?)?;
    let f2 = frame_from(r, job, &job.secondary_frame()?)?;
    f.output("frame", render_frame(r, &f1));
    f.output("frame2", render_frame(r, &f2));
    let out = reverse_order_law_check(r, &a1, &f1, &a2, &f2)?;
    let not_p1 = r.one_minus(&f1.p);
    let scale: f64 = [&f1.q, &a1, &not_p1, &a2, &f2.p].iter().map(|x| r.norm(x)).product();
    let obstruction = residual(r, "q1 a1 (1-p1) a2 p2", &out.obstruction, scale);
    f.residuals("", [&obstruction]);
    f.output("condition", out.condition);
    f.output("obstruction", r.render(&out.obstruction));
    f.output("law_holds", out.law_holds);
    f.output("product_inverse", out.product_inverse.as_ref().map(|w| r.render(w)));
    f.output("reversed_product", r.render(&out.reversed_product));
    if let Some(w) = &out.product_inverse {
        let gap = r.sub(w, &out.reversed_product);
        let scale = r.norm(w).max(r.norm(&out.reversed_product));
        f.residuals("", [&residual(r, "(a1 a2)^- - a2^- a1^-", &gap, scale)]);
    }
    f.verdict("obstruction vanishes iff the reverse order law holds", true, None);
    let witness = (!out.law_holds).then(|| format!("obstruction = {}", r.render(&out.obstruction)));
    f.verdict("reverse order law", out.law_holds, witness);
    Ok(())
}

// --------------------------------------------------------------------- lab

fn lab(r: &FiniteRing, job: &JobSpec, f: &mut Findings) -> Result<()> {
    let config = LabConfig { exec: exec(job), ..LabConfig::default() };
    let suites: Vec<Suite> = job.suite.map_or_else(|| Suite::ALL.to_vec(), |s| vec![s]);
    let mut reports = Vec::with_capacity(suites.len());
    for suite in suites {
        let report = run_suite(r, suite, &config)?;
        let detail = format!(
            "{} tuples, {} applicable, {} counterexamples",
            report.tuples_examined, report.applicable, report.counterexamples_total
        );
        f.verdict(format!("{suite}: no counterexamples"), report.certified, Some(detail));
        reports.push(report);
    }
    f.output("reports", reports);
    Ok(())
}

// ------------------------------------------------------------------ banach

fn banach(alg: &MatrixAlgebra<f64>, job: &JobSpec, f: &mut Findings) -> Result<()> {
    let a = element(alg, job, "a")?;
    let frame = frame_from(alg, job, &job.primary_frame()?)?;
    f.output("frame", render_frame(alg, &frame));
    let setting = BanachSetting::new(alg, &a, &frame)?;
    f.output("y", setting.y.to_string());
    f.output("v", setting.v.to_string());

    let s = spectrum(alg, &a.mul(&setting.v));
    f.output(
        "spectrum_av",
        json!({
            "eigenvalues": s.eigenvalues,
            "zero_multiplicity": s.zero_multiplicity,
            "spectral_radius": s.spectral_radius,
            "min_nonzero_real_part": s.min_nonzero_real_part,
        }),
    );

    let ids = group_identities(alg, &a, &setting.v)?;
    f.residuals("identities", &ids.residuals);
    f.output("spectral_gap_av_va", ids.spectral_gap);
    f.verdict("annihilation and push-through identities", ids.holds(), None);

    let methods = match job.method {
        None => vec![MethodChoice::Series, MethodChoice::Integral, MethodChoice::Limit],
        Some(m) if m.is_representation() => vec![m],
        Some(m) => return Err(Error::Parse(format!("`banach` takes series|integral|limit, not `{}`", m.name()))),
    };
    let mut reps = Vec::new();
    for m in methods {
        match representation(alg, job, m, &a, &setting.v) {
            Ok(rep) => {
                let gap = setting.y.sub(&rep.y);
                let scale = setting.y.spectral_norm();
                let rel = gap.spectral_norm() / scale.max(1e-300);
                f.residuals.push(ResidualRecord {
                    name: format!("{}: y - y_algebraic", m.name()),
                    norm: gap.spectral_norm(),
                    scale,
                    ok: rel <= REPRESENTATION_AGREEMENT,
                });
                f.verdict(format!("{} agrees with the algebraic inverse", m.name()), rel <= REPRESENTATION_AGREEMENT, None);
                reps.push(representation_output(m, &rep, Some(&setting.y)));
            }
            // A representation whose hypotheses fail is reported, not counted
            // against the job, unless it was the one requested.
            Err(e) if job.method.is_none() && !matches!(e, Error::InvariantViolated(_)) => {
                reps.push(json!({ "method": m, "error": Diagnostic::of(&e) }));
            }
            Err(e) => return Err(e),
        }
    }
    f.output("representations", reps);

    let side = job.side.unwrap_or(BoundSide::Left);
    let h = build_h(alg, &setting, side)?;
    f.residuals("h", &h.residuals);
    f.output("h", json!({ "side": side, "w": h.w.to_string(), "norm": h.norm }));

    let lambda = match job.lambda {
        Some(re) => Complex64::new(re, job.lambda_im.unwrap_or(0.0)),
        None => {
            let probe = perturbation_bound(alg, &setting, Complex64::new(0.0, 0.0), side)?;
            let re = if probe.radius.is_finite() { probe.radius / 2.0 } else { 0.1 };
            Complex64::new(re, job.lambda_im.unwrap_or(0.0))
        }
    };
    let bound = perturbation_bound(alg, &setting, lambda, side)?;
    let detail = format!("measured {:.6e}, bound {:.6e}", bound.measured, bound.bound);
    f.verdict("perturbation bound", bound.holds, Some(detail));
    f.output("bound", &bound);

    if job.elements.contains_key("a2") {
        let a2 = element(alg, job, "a2")?;
        let f2 = frame_from(alg, job, &job.secondary_frame()?)?;
        let d = difference_identity(alg, &a, &frame, &a2, &f2)?;
        f.residuals.push(ResidualRecord {
            name: "difference identity".into(),
            norm: d.residual,
            scale: d.scale,
            ok: d.holds,
        });
        f.verdict("difference identity", d.holds, Some(format!("relative residual {:e}", d.relative)));
        f.output("difference", &d);
    }
    Ok(())
}

// -------------------------------------------------------------- continuity

fn continuity(alg: &MatrixAlgebra<f64>, job: &JobSpec, f: &mut Findings) -> Result<()> {
    let n = alg.dim();
    let zero = || Mat::zeros(n, n);
    let a = element(alg, job, "a")?;
    let b = element(alg, job, "b")?;
    let c = element(alg, job, "c")?;
    let spec = SequenceSpec {
        a,
        da: optional_element(alg, job, "da")?.unwrap_or_else(zero),
        b,
        db: optional_element(alg, job, "db")?.unwrap_or_else(zero),
        c,
        dc: optional_element(alg, job, "dc")?.unwrap_or_else(zero),
        indices: (1..=job.last.unwrap_or(DEFAULT_LAST)).collect(),
    };
    let report = continuity_experiment(alg, &spec, exec(job))?;
    if let Some(eq) = report.equivalence {
        let detail = format!(
            "norms bounded: {}, deviations vanish: {}",
            report.norms_bounded, report.deviations_vanish
        );
        f.verdict("bounded norms iff vanishing deviations", eq, Some(detail));
    }
    f.output("verdict", report.verdict);
    f.output("continuity", &report);
    Ok(())
}

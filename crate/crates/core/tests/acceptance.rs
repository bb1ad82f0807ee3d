//! The eight acceptance criteria. Runs without the libtest harness so that one
//! pass/fail line per criterion is always printed; exits non-zero on failure.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bcinv::banach::{
    continuity_experiment, difference_identity, group_identities, integral_representation, limit_representation,
    perturbation_bound, series_representation, BanachSetting, BoundSide, Complex64, LimitConfig,
    QuadratureConfig, SequenceSpec, SeriesConfig, Verdict,
};
use bcinv::inverse::{
    all_methods, bc_inverse, bc_inverse_default, decompose_bc_invertible, inverse_of_inverse, perturb_invariant,
    reverse_order_law_check, scale_corner, verify_bc_inverse, CornerFrame, Method,
};
use bcinv::lab::{finite_ring, run_suite, LabConfig, Suite, DEFAULT_RINGS};
use bcinv::ring::{FiniteRing, Mat, MatrixAlgebra, Ring};
use bcinv::Error;
use common::{float_instances, rel, rng, FloatInstance, Shape};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- 1

fn exhaustive_certification() -> Outcome {
    let config = LabConfig::default();
    let mut slowest = (Duration::ZERO, String::new());
    let mut evaluated = 0u64;
    for name in DEFAULT_RINGS {
        let ring = finite_ring(name).map_err(|e| e.to_string())?;
        let limit = if ring.size() > 12 { Duration::from_secs(300) } else { Duration::from_secs(60) };
        for suite in Suite::ALL {
            let start = Instant::now();
            let report = run_suite(&ring, suite, &config).map_err(|e| format!("{suite} on {name}: {e}"))?;
            let took = start.elapsed();
            ensure(report.certified, || {
                format!("{suite} on {name}: {} counterexamples, first {:?}", report.counterexamples_total, report.counterexamples.first())
            })?;
            ensure(report.tuples_examined == report.enumeration_space, || format!("{suite} on {name} skipped tuples"))?;
            ensure(took < limit, || format!("{suite} on {name} took {took:?} (limit {limit:?})"))?;
            evaluated += report.tuples_examined;
            if took > slowest.0 {
                slowest = (took, format!("{suite} on {name}"));
            }
        }
    }
    Ok(format!("24 suite runs, {evaluated} tuples, 0 counterexamples; slowest {} in {:.2?}", slowest.1, slowest.0))
}

// ---------------------------------------------------------------- 2

fn worked_exact_instance() -> Outcome {
    let r = finite_ring("Zn:6").map_err(|e| e.to_string())?;
    let e = |k| r.elt(k);
    let (a, four) = (e(5), e(4));
    let frame = CornerFrame::canonical(&r, four, four).map_err(|e| e.to_string())?;

    // Independent oracle: every y satisfying the definition by brute force.
    let solutions: Vec<_> = r
        .all()
        .filter(|y| {
            let in_b_r_y = r.all().any(|t| r.product(&[&four, &t, y]) == *y);
            let in_y_r_c = r.all().any(|t| r.product(&[y, &t, &four]) == *y);
            in_b_r_y && in_y_r_c && r.product(&[y, &a, &four]) == four && r.product(&[&four, &a, y]) == four
        })
        .collect();
    ensure(solutions == vec![e(2)], || format!("oracle found {solutions:?}"))?;

    let methods = all_methods(&r, &a, &frame);
    for (m, y) in &methods {
        ensure(y.as_ref().ok() == Some(&e(2)), || format!("{m} gave {y:?}"))?;
    }
    let d = decompose_bc_invertible(&r, &a, &frame).map_err(|e| e.to_string())?;
    ensure(d.unit.x == e(2) && d.m == e(3), || format!("decomposition {:?} + {:?}", d.unit.x, d.m))?;
    ensure(r.product(&[&four, &d.m, &four]) == e(0), || "4 * 3 * 4 != 0".into())?;
    ensure(d.unit.z == e(2), || "corner unit witness differs from the inverse".into())?;
    Ok(format!("y = 2 by {} methods and the brute-force oracle; 5 = 2 + 3 with 4*3*4 = 0", methods.len()))
}

// ---------------------------------------------------------------- 3

struct Agreement {
    algebraic: f64,
    representation: f64,
    applied: [usize; 3],
}

fn cross_method(instances: &[FloatInstance]) -> Result<Agreement, String> {
    let mut worst = Agreement { algebraic: 0.0, representation: 0.0, applied: [0; 3] };
    for (i, inst) in instances.iter().enumerate() {
        let alg = &inst.alg;
        let mut ys = Vec::new();
        for m in [Method::CornerSolve, Method::Factor, Method::Group] {
            let y = bc_inverse(alg, &inst.a, &inst.frame, m).map_err(|e| format!("instance {i}: {m}: {e}"))?;
            ys.push(y);
        }
        for x in &ys {
            for y in &ys {
                worst.algebraic = worst.algebraic.max(rel(x, y));
            }
        }
        let reps = [
            series_representation(alg, &inst.a, &inst.v, None, &SeriesConfig::default()),
            integral_representation(alg, &inst.a, &inst.v, &QuadratureConfig::default()),
            limit_representation(alg, &inst.a, &inst.v, &LimitConfig::default()),
        ];
        for (k, rep) in reps.into_iter().enumerate() {
            match rep {
                Ok(rep) => {
                    worst.applied[k] += 1;
                    for y in &ys {
                        worst.representation = worst.representation.max(rel(&rep.y, y));
                    }
                }
                // Hypotheses of that representation fail for this instance.
                Err(Error::PreconditionFailed(_) | Error::SpectralPreconditionFailed(_)) => {}
                Err(e) => return Err(format!("instance {i} (n = {}, {:?}): representation {k}: {e}", inst.n, inst.shape)),
            }
        }
    }
    Ok(worst)
}

fn cross_method_agreement(instances: &[FloatInstance]) -> Outcome {
    let w = cross_method(instances)?;
    ensure(w.algebraic <= 1e-8, || format!("algebraic methods differ by {:e}", w.algebraic))?;
    ensure(w.representation <= 1e-6, || format!("representations differ by {:e}", w.representation))?;
    ensure(w.applied.iter().all(|&k| k > 0), || format!("some representation never applied: {:?}", w.applied))?;
    Ok(format!(
        "{} instances; corner/factor/group within {:.1e}; series/integral/limit applied {}/{}/{} times, within {:.1e}",
        instances.len(),
        w.algebraic,
        w.applied[0],
        w.applied[1],
        w.applied[2],
        w.representation
    ))
}

// ---------------------------------------------------------------- 4

fn hand_pair() -> Result<(f64, f64), String> {
    let alg = MatrixAlgebra::float(2).unwrap();
    let e11 = Mat::unit(2, 2, 0, 0);
    let frame = CornerFrame::canonical(&alg, e11.clone(), e11).unwrap();
    let s = BanachSetting::new(&alg, &Mat::diag(&[2.0, 3.0]), &frame).map_err(|e| e.to_string())?;
    let b = perturbation_bound(&alg, &s, Complex64::new(0.1, 0.0), BoundSide::Left).map_err(|e| e.to_string())?;
    Ok((b.measured, b.bound))
}

fn bound_suite(instances: &[FloatInstance]) -> Outcome {
    let mut g = rng(44);
    let (mut checked, mut skipped, mut worst) = (0usize, 0usize, 0.0f64);
    for (i, inst) in instances.iter().enumerate() {
        let s = BanachSetting::new(&inst.alg, &inst.a, &inst.frame).map_err(|e| format!("instance {i}: {e}"))?;
        for k in 0..20 {
            let side = if k % 2 == 0 { BoundSide::Left } else { BoundSide::Right };
            let probe = perturbation_bound(&inst.alg, &s, Complex64::new(0.0, 0.0), side).map_err(|e| e.to_string())?;
            let radius = if probe.radius.is_finite() { probe.radius } else { 1.0 };
            let lambda = Complex64::from_polar(radius * g.random_range(0.01..0.95), g.random_range(0.0..std::f64::consts::TAU));
            match perturbation_bound(&inst.alg, &s, lambda, side) {
                Ok(b) => {
                    checked += 1;
                    ensure(b.holds, || format!("instance {i}, λ = {lambda}: measured {:e} > bound {:e}", b.measured, b.bound))?;
                    if b.bound > 0.0 {
                        worst = worst.max(b.ratio());
                    }
                }
                // λ on the spectrum of -av.
                Err(Error::PreconditionFailed(_)) => skipped += 1,
                Err(e) => return Err(format!("instance {i}: {e}")),
            }
        }
    }
    ensure(worst <= 1.0, || format!("ratio {worst}"))?;
    let (measured, bound) = hand_pair()?;
    ensure((measured - 1.0 / 42.0).abs() < 1e-6 && (bound - 3.0 / 74.0).abs() < 1e-6, || {
        format!("hand pair ({measured}, {bound})")
    })?;
    Ok(format!(
        "{checked} (instance, λ) pairs, {skipped} on the spectrum, max ratio {worst:.4}; hand pair ({measured:.5}, {bound:.5})"
    ))
}

// ---------------------------------------------------------------- 5

fn identity_suite(instances: &[FloatInstance]) -> Outcome {
    let mut g = rng(55);
    let mut worst_difference = 0.0f64;
    let mut shared = 0;
    for (i, inst) in instances.iter().take(100).enumerate() {
        let alg = &inst.alg;
        let n = inst.n;
        let a2 = inst.a.add(&common::uniform(&mut g, n, n).scale(&0.01));
        let f2 = if i % 2 == 0 {
            shared += 1;
            inst.frame.clone()
        } else {
            // Same rank, different ideals.
            let b2 = inst.frame.b.add(&common::rank_r(&mut g, n, inst.r).scale(&0.05));
            let c2 = inst.frame.c.add(&common::rank_r(&mut g, n, inst.r).scale(&0.05));
            let b2 = truncate(&b2, inst.r);
            let c2 = truncate(&c2, inst.r);
            CornerFrame::canonical(alg, b2, c2).map_err(|e| e.to_string())?
        };
        let d = difference_identity(alg, &inst.a, &inst.frame, &a2, &f2).map_err(|e| format!("pair {i}: {e}"))?;
        ensure(d.relative <= 1e-10, || format!("pair {i}: relative residual {:e}", d.relative))?;
        worst_difference = worst_difference.max(d.relative);
    }
    let mut worst_annihilation = 0.0f64;
    for (i, inst) in instances.iter().enumerate() {
        let ids = group_identities(&inst.alg, &inst.a, &inst.v).map_err(|e| format!("instance {i}: {e}"))?;
        for r in &ids.residuals[..2] {
            let relative = r.norm / r.scale.max(1e-300);
            ensure(relative <= 1e-10, || format!("instance {i}: {} = {:e}", r.name, relative))?;
            worst_annihilation = worst_annihilation.max(relative);
        }
    }
    Ok(format!(
        "difference identity on 100 pairs ({shared} shared frames) within {worst_difference:.1e}; annihilation on {} instances within {worst_annihilation:.1e}",
        instances.len()
    ))
}

/// Best rank-`r` approximation, so perturbed `b`, `c` keep their rank.
fn truncate(x: &Mat<f64>, r: usize) -> Mat<f64> {
    let m = faer::Mat::<f64>::from_fn(x.rows(), x.cols(), |i, j| *x.get(i, j));
    let svd = m.thin_svd().expect("svd converges");
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    Mat::from_fn(x.rows(), x.cols(), |i, j| (0..r).map(|k| u[(i, k)] * s[k] * v[(j, k)]).sum())
}

// ---------------------------------------------------------------- 6

fn reverse_order_law() -> Outcome {
    let ring = finite_ring("M2F2").map_err(|e| e.to_string())?;
    let report = run_suite(&ring, Suite::Rol, &LabConfig::default()).map_err(|e| e.to_string())?;
    ensure(report.certified, || format!("{} violations on M2F2", report.counterexamples_total))?;
    let failing = report.observation("obstruction nonzero, law fails");
    ensure(failing > 0, || "no failing case observed on M2F2".into())?;

    let p = |s: &str| ring.parse_element(s).unwrap();
    let f = CornerFrame::canonical(&ring, p("E11"), p("E11")).unwrap();
    let w = reverse_order_law_check(&ring, &p("[[1,1],[0,1]]"), &f, &p("[[1,0],[1,1]]"), &f).map_err(|e| e.to_string())?;
    ensure(!w.condition && !w.law_holds && !ring.is_zero(&w.obstruction), || "witness instance does not fail".into())?;

    let (holds, fails) = float_rol(100)?;
    Ok(format!(
        "M2F2: {} chained pairs, 0 violations, {failing} failures; witness obstruction {}; floats: {holds} hold, {fails} fail, 0 violations",
        report.applicable,
        ring.label(w.obstruction)
    ))
}

/// Chained float frames with `h2 c2 = b1 g1`: `c2 = h2 = p1`.
fn float_rol(count: usize) -> Result<(usize, usize), String> {
    let mut g = rng(66);
    let (mut holds, mut fails) = (0, 0);
    while holds + fails < count {
        let n = g.random_range(2..=6);
        let alg = MatrixAlgebra::float(n).unwrap();
        let r1 = g.random_range(1..n);
        let r2 = g.random_range(1..n);
        let f1 = CornerFrame::canonical(&alg, common::rank_r(&mut g, n, r1), common::rank_r(&mut g, n, r1)).unwrap();
        let b2 = common::rank_r(&mut g, n, r2);
        let g2 = alg.canonical_inner_inverse(&b2);
        let Ok(f2) = CornerFrame::new(&alg, b2, f1.p.clone(), g2, f1.p.clone()) else { continue };
        let a1 = common::uniform(&mut g, n, n);
        let mut a2 = common::uniform(&mut g, n, n);
        if (holds + fails) % 2 == 0 {
            // Force (1 - p1) a2 p2 = 0, so the obstruction vanishes.
            a2 = a2.sub(&alg.one_minus(&f1.p).mul(&a2).mul(&f2.p));
        }
        let well_posed = |a: &Mat<f64>, f: &CornerFrame<Mat<f64>>, r| common::relative_gap(&f.c.mul(a).mul(&f.b), r) > common::WELL_POSED;
        if !well_posed(&a1, &f1, r1) || !well_posed(&a2, &f2, alg.rank(&f2.b).min(alg.rank(&f2.c))) {
            continue;
        }
        match reverse_order_law_check(&alg, &a1, &f1, &a2, &f2) {
            Ok(o) if o.law_holds => holds += 1,
            Ok(_) => fails += 1,
            Err(Error::PreconditionFailed(_)) => continue,
            Err(e) => return Err(format!("float instance {}: {e}", holds + fails)),
        }
    }
    ensure(holds > 0 && fails > 0, || format!("only one side exercised: {holds} hold, {fails} fail"))?;
    Ok((holds, fails))
}

// ---------------------------------------------------------------- 7

fn continuity() -> Outcome {
    let alg = MatrixAlgebra::float(2).unwrap();
    let e11 = Mat::unit(2, 2, 0, 0);
    let bounded = SequenceSpec::moving_a(Mat::diag(&[2.0, 3.0]), Mat::diag(&[1.0, 0.0]), e11.clone(), e11.clone(), 1000);
    let r = continuity_experiment(&alg, &bounded, Default::default()).map_err(|e| e.to_string())?;
    for t in &r.terms {
        let exact = (1.0 / (2.0 + 1.0 / t.n as f64) - 0.5).abs();
        let d = t.deviation.ok_or_else(|| format!("term {} missing", t.n))?;
        ensure((d - exact).abs() <= 1e-12, || format!("n = {}: deviation {d:e}, closed form {exact:e}", t.n))?;
    }
    let last = r.terms.last().and_then(|t| t.deviation).unwrap();
    ensure(r.deviations_monotone && r.deviations_vanish, || "bounded sequence not monotone to 0".into())?;
    ensure(last <= 1e-3 * 0.5, || format!("last deviation {last:e}"))?;
    ensure(r.verdict == Verdict::Convergent && r.equivalence == Some(true), || format!("{:?}", r.verdict))?;

    let unbounded = SequenceSpec::moving_a(Mat::diag(&[0.0, 3.0]), Mat::diag(&[1.0, 0.0]), e11.clone(), e11, 1000);
    let u = continuity_experiment(&alg, &unbounded, Default::default()).map_err(|e| e.to_string())?;
    ensure(u.verdict == Verdict::Divergent, || format!("unbounded sequence classified {:?}", u.verdict))?;
    ensure((u.norm_growth - 1.0).abs() < 0.05, || format!("norm growth {}", u.norm_growth))?;
    Ok(format!(
        "bounded: 1000 terms match the closed form, last deviation {last:.2e}; unbounded: divergent, growth exponent {:.3}",
        u.norm_growth
    ))
}

// ---------------------------------------------------------------- 8

#[derive(Default)]
struct Tally {
    frames: u64,
    perturbations: u64,
    scalings: u64,
    inverse_of_inverse: u64,
    transposes: u64,
}

fn exact_invariance(ring: &FiniteRing, t: &mut Tally) -> Result<(), String> {
    let all: Vec<_> = ring.all().collect();
    let fail = |what: &str, detail: String| format!("{what} on {}: {detail}", ring.descriptor());
    for &b in &all {
        let gs = ring.inner_inverses(&b).unwrap_or_default();
        if gs.is_empty() {
            continue;
        }
        for &c in &all {
            let hs = ring.inner_inverses(&c).unwrap_or_default();
            if hs.is_empty() {
                continue;
            }
            let f = CornerFrame::canonical(ring, b, c).unwrap();
            let idem = CornerFrame::idempotent(ring, f.p, f.q).unwrap();
            let zero_lmr = |l: &_, m: &_, r: &_| ring.is_zero(&ring.product(&[l, m, r]));
            let pq_units = |e: &_| -> Vec<_> {
                all.iter().copied().filter(|u| ring.product(&[e, u, e]) == *u && corner_inverse_exists(ring, u, e)).collect()
            };
            let (p_units, q_units) = (pq_units(&f.p), pq_units(&f.q));
            for &a in &all {
                let y = bc_inverse_default(ring, &a, &f).ok();
                // Frame replacement: every choice of inner inverses, and the idempotent frame.
                for &g in &gs {
                    for &h in &hs {
                        let other = CornerFrame::new(ring, b, c, g, h).unwrap();
                        let z = bc_inverse_default(ring, &a, &other).ok();
                        ensure(z == y, || fail("frame replacement", format!("a={a} b={b} c={c} g={g} h={h}")))?;
                        t.frames += 1;
                    }
                }
                ensure(bc_inverse_default(ring, &a, &idem).ok() == y, || fail("idempotent frame", format!("a={a}")))?;
                // Transpose duality.
                let ft = f.transposed(ring).unwrap();
                let yt = bc_inverse_default(ring, &ring.transpose(&a).unwrap(), &ft).ok();
                ensure(yt == y.map(|y| ring.transpose(&y).unwrap()), || fail("transpose", format!("a={a} b={b} c={c}")))?;
                t.transposes += 1;

                let Some(_) = y else { continue };
                let unit = decompose_bc_invertible(ring, &a, &f).map_err(|e| fail("decomposition", e.to_string()))?.unit;
                for &m in &all {
                    if zero_lmr(&f.q, &m, &f.p) {
                        perturb_invariant(ring, &a, &f, &m).map_err(|e| fail("perturbation", format!("a={a} m={m}: {e}")))?;
                        t.perturbations += 1;
                        for &u in &p_units {
                            for &v in &q_units {
                                scale_corner(ring, &unit, &u, &v, &f, &m)
                                    .map_err(|e| fail("corner scaling", format!("a={a} u={u} v={v} m={m}: {e}")))?;
                                t.scalings += 1;
                            }
                        }
                    }
                    if zero_lmr(&f.p, &m, &f.q) {
                        inverse_of_inverse(ring, &a, &f, &m)
                            .map_err(|e| fail("inverse of inverse", format!("a={a} m={m}: {e}")))?;
                        t.inverse_of_inverse += 1;
                    }
                }
            }
        }
    }
    Ok(())
}

fn corner_inverse_exists(ring: &FiniteRing, u: &bcinv::ring::Elt, e: &bcinv::ring::Elt) -> bool {
    ring.all().any(|w| ring.product(&[e, &w, e]) == w && ring.mul(u, &w) == *e && ring.mul(&w, u) == *e)
}

fn float_invariance(instances: &[FloatInstance]) -> Result<f64, String> {
    let mut g = rng(88);
    let mut worst = 0.0f64;
    for (i, inst) in instances.iter().take(100).enumerate() {
        let alg = MatrixAlgebra::float_with_tolerance(inst.n, 1e-8).unwrap();
        let f = &inst.frame;
        let y = &inst.y;
        let err = |what: &str, e: Error| format!("instance {i}: {what}: {e}");
        let mut track = |z: &Mat<f64>| worst = worst.max(rel(z, y));

        let g2 = common::other_inner_inverse(&mut g, &f.b, &f.g);
        let h2 = common::other_inner_inverse(&mut g, &f.c, &f.h);
        let other = CornerFrame::new(&alg, f.b.clone(), f.c.clone(), g2, h2).map_err(|e| err("frame", e))?;
        track(&bc_inverse_default(&alg, &inst.a, &other).map_err(|e| err("frame replacement", e))?);
        let idem = CornerFrame::idempotent(&alg, f.p.clone(), f.q.clone()).map_err(|e| err("frame", e))?;
        track(&bc_inverse_default(&alg, &inst.a, &idem).map_err(|e| err("idempotent frame", e))?);

        let m = common::twisted(&mut g, &f.q, &f.p, 0.5);
        track(&perturb_invariant(&alg, &inst.a, f, &m).map_err(|e| err("perturbation", e))?);

        let unit = decompose_bc_invertible(&alg, &inst.a, f).map_err(|e| err("decomposition", e))?.unit;
        let u = common::corner_unit(&mut g, &f.p);
        let v = common::corner_unit(&mut g, &f.q);
        scale_corner(&alg, &unit, &u, &v, f, &m).map_err(|e| err("corner scaling", e))?;
        ensure(verify_bc_inverse(&alg, &unit.x.add(&m), f, &unit.z).verdict, || format!("instance {i}: corner witness"))?;

        let m2 = common::twisted(&mut g, &f.p, &f.q, 0.5);
        let w = inverse_of_inverse(&alg, &inst.a, f, &m2).map_err(|e| err("inverse of inverse", e))?;
        worst = worst.max(rel(&w, &f.q.mul(&inst.a).mul(&f.p)));

        let ft = f.transposed(&alg).unwrap();
        let yt = bc_inverse_default(&alg, &inst.a.transpose(), &ft).map_err(|e| err("transpose", e))?;
        worst = worst.max(rel(&yt.transpose(), y));
    }
    ensure(worst <= 1e-8, || format!("worst relative deviation {worst:e}"))?;
    Ok(worst)
}

fn invariance_suite(instances: &[FloatInstance]) -> Outcome {
    let mut t = Tally::default();
    for name in DEFAULT_RINGS {
        exact_invariance(&finite_ring(name).map_err(|e| e.to_string())?, &mut t)?;
    }
    let rational = rational_invariance()?;
    let worst = float_invariance(instances)?;
    Ok(format!(
        "finite rings: {} frame choices, {} perturbations, {} corner scalings, {} inverse-of-inverse, {} transposes; Q:3 {rational} draws; 100 floats within {worst:.1e}",
        t.frames, t.perturbations, t.scalings, t.inverse_of_inverse, t.transposes
    ))
}

/// Rational matrices cannot be enumerated; a fixed pseudo-random sample of
/// small-integer instances is checked exactly instead.
fn rational_invariance() -> Result<usize, String> {
    use bcinv::ring::Rational;
    let q = MatrixAlgebra::<Rational>::rational(3).unwrap();
    let mut g = rng(89);
    let small = |g: &mut rand_chacha::ChaCha8Rng| Mat::<Rational>::from_fn(3, 3, |_, _| Rational::from_integer(g.random_range(-2i64..=2).into()));
    let mut done = 0;
    while done < 100 {
        let (a, b, c) = (small(&mut g), small(&mut g), small(&mut g));
        let Ok(f) = CornerFrame::canonical(&q, b, c) else { continue };
        let Ok(y) = bc_inverse_default(&q, &a, &f) else { continue };
        let m = {
            let x = small(&mut g);
            let z = small(&mut g);
            q.product(&[&f.q, &x, &q.one_minus(&f.p)]).add(&q.one_minus(&f.q).mul(&z))
        };
        let z = perturb_invariant(&q, &a, &f, &m).map_err(|e| format!("Q:3 perturbation: {e}"))?;
        ensure(z == y, || "Q:3 perturbation changed the inverse".into())?;
        let m2 = q.product(&[&f.p, &small(&mut g), &q.one_minus(&f.q)]);
        inverse_of_inverse(&q, &a, &f, &m2).map_err(|e| format!("Q:3 inverse of inverse: {e}"))?;
        let idem = CornerFrame::idempotent(&q, f.p.clone(), f.q.clone()).unwrap();
        ensure(bc_inverse_default(&q, &a, &idem).ok() == Some(y.clone()), || "Q:3 idempotent frame".into())?;
        let ft = f.transposed(&q).unwrap();
        ensure(bc_inverse_default(&q, &a.transpose(), &ft).ok() == Some(y.transpose()), || "Q:3 transpose".into())?;
        done += 1;
    }
    Ok(done)
}

// ---------------------------------------------------------------- driver

fn run(number: usize, label: &str, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let took = start.elapsed();
    match &outcome {
        Ok(detail) => println!("[PASS] criterion {number}: {label} ({took:.1?}): {detail}"),
        Err(why) => println!("[FAIL] criterion {number}: {label} ({took:.1?}): {why}"),
    }
    outcome.is_ok()
}

fn main() {
    // `cargo test -- --list` and filters are not meaningful here.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let instances = float_instances(2024, 200);
    let aligned = instances.iter().filter(|i| i.shape == Shape::Aligned).count();
    println!("acceptance: {} float instances ({aligned} aligned), n in 2..=8", instances.len());

    let results = [
        run(1, "exhaustive certification", exhaustive_certification),
        run(2, "worked exact instance", worked_exact_instance),
        run(3, "cross-method agreement", || cross_method_agreement(&instances)),
        run(4, "perturbation bound suite", || bound_suite(&instances)),
        run(5, "identity suite", || identity_suite(&instances)),
        run(6, "reverse order law iff", reverse_order_law),
        run(7, "continuity", continuity),
        run(8, "invariance suite", || invariance_suite(&instances)),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}

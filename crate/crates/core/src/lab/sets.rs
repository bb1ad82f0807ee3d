//! The set of (b,c)-invertible elements: corner units plus the perturbation
//! set, corner scaling, and the pointwise consequences, over every frame.

use super::tables::{bit, Frame, Set, Tables};
use super::{finish, prepare, within_budget, LabConfig, LabReport, Suite, SuiteShape, Tally};
use crate::error::Result;
use crate::inverse::{bc_inverse_agreed, CornerFrame};
use crate::ring::{Elt, FiniteRing};

const CHECKS: [&str; 12] = [
    "invertible set = corner units + qR(1-p) + (1-q)R",
    "qR(1-p) + (1-q)R = {m : q m p = 0}",
    "invertible <=> corner unit plus v with q v p = 0",
    "corner units closed under corner-ring units on both sides",
    "(v x u + m)^-(b,c) = u^-1 x^-(b,c) v^-1",
    "(a + m)^-(b,c) = a^-(b,c) for q m p = 0",
    "a, qa, ap, qap share existence and inverse",
    "(a^-(b,c) + m)^-(q,p) = q a p for p m q = 0",
    "invertible <=> z in bRc with p = z q a p, q = q a p z",
    "a^-(b,c) = a^-(p,q)",
    "library inverse matches the table oracle",
    "corner unit witness is the (b,c)-inverse",
];

const OBSERVATIONS: [&str; 2] = ["frames", "invertible pairs"];

pub fn verify_set_decomposition(ring: &FiniteRing, config: &LabConfig) -> Result<LabReport> {
    let t = prepare(ring, config)?;
    let frames = t.frames();
    let n = t.n as u64;
    within_budget(ring, config, Suite::Sets, frames.len() as u64 * n.pow(3))?;
    let labels: Vec<String> = CHECKS.iter().map(|s| s.to_string()).collect();
    let parts = config.exec.map_slice(&frames, |f| frame_checks(ring, &t, *f));
    Ok(finish(
        ring,
        SuiteShape {
            suite: Suite::Sets,
            checks: &labels,
            observations: &OBSERVATIONS,
            slots: &["b", "c", "p", "q", "a", "m"],
            enumeration_space: frames.len() as u64 * n,
        },
        parts,
    ))
}

/// `{x ∈ qRp : ∃ z ∈ bRc, z x = p, x z = q}` with its witnesses.
fn corner_units(t: &Tables, f: Frame) -> Vec<(u16, u16)> {
    let brc = t.sandwich(f.b, f.c);
    t.members(t.sandwich(f.q, f.p))
        .filter_map(|x| t.members(brc).find(|&z| t.mul(z, x) == f.p && t.mul(x, z) == f.q).map(|z| (x, z)))
        .collect()
}

fn sumset(t: &Tables, x: Set, y: Set) -> Set {
    let mut out = 0;
    for u in t.members(x) {
        for v in t.members(y) {
            out |= bit(t.add(u, v));
        }
    }
    out
}

fn frame_checks(ring: &FiniteRing, t: &Tables, f: Frame) -> Tally {
    let mut tally = Tally::new(CHECKS.len(), OBSERVATIONS.len());
    tally.observe(0);
    let Frame { b, c, p, q, g, h } = f;
    let key = |a: u16, m: u16| vec![b, c, p, q, a, m];
    let (np, nq) = (t.one_minus(p), t.one_minus(q));

    let invertible: Set = t.elements().filter(|&a| t.bc(a, b, c).is_some()).fold(0, |s, a| s | bit(a));
    let units = corner_units(t, f);
    let unit_set: Set = units.iter().fold(0, |s, &(x, _)| s | bit(x));
    let perturb = sumset(t, t.sandwich(q, np), t.img_r[nq as usize]);
    let killed: Set = t.elements().filter(|&m| t.mul3(q, m, p) == t.zero).fold(0, |s, m| s | bit(m));

    tally.check(0, invertible == sumset(t, unit_set, perturb), || key(t.zero, t.zero));
    tally.check(1, perturb == killed, || key(t.zero, t.zero));
    tally.check(2, invertible == sumset(t, unit_set, killed), || key(t.zero, t.zero));

    for &(x, z) in &units {
        tally.check(11, t.bc(x, b, c) == Some(z), || key(x, t.zero));
    }

    // Corner scaling, in both directions.
    let pu = t.corner_units(p);
    let qv = t.corner_units(q);
    let mut scaled: Set = 0;
    for &(x, z) in &units {
        for &(u, ui) in &pu {
            for &(v, vi) in &qv {
                let vxu = t.prod(&[v, x, u]);
                scaled |= bit(vxu);
                let expect = t.prod(&[ui, z, vi]);
                for m in t.members(killed) {
                    let ok = t.bc(t.add(vxu, m), b, c) == Some(expect);
                    tally.check(4, ok, || key(vxu, m));
                }
            }
        }
    }
    tally.check(3, scaled == unit_set, || key(t.zero, t.zero));

    let swapped_killed: Set = t.elements().filter(|&m| t.mul3(p, m, q) == t.zero).fold(0, |s, m| s | bit(m));
    let library = CornerFrame { b: Elt(b), c: Elt(c), g: Elt(g), h: Elt(h), p: Elt(p), q: Elt(q) };
    for a in t.elements() {
        tally.examined(1);
        let y = t.bc(a, b, c);
        let lib = bc_inverse_agreed(ring, &Elt(a), &library).ok().map(|e| e.0);
        tally.check(10, lib == y, || key(a, t.zero));
        tally.check(9, t.bc(a, p, q) == y, || key(a, t.zero));

        let qap = t.prod(&[q, a, p]);
        let corner: Vec<u16> = t
            .members(t.sandwich(b, c))
            .filter(|&z| t.prod(&[z, q, a, p]) == p && t.prod(&[q, a, p, z]) == q)
            .collect();
        tally.check(8, corner == y.into_iter().collect::<Vec<_>>(), || key(a, t.zero));

        let variants = [t.mul(q, a), t.mul(a, p), qap];
        tally.check(6, variants.iter().all(|&v| t.bc(v, b, c) == y), || key(a, t.zero));

        let Some(y) = y else { continue };
        tally.applicable();
        tally.observe(1);
        for m in t.members(killed) {
            tally.check(5, t.bc(t.add(a, m), b, c) == Some(y), || key(a, m));
        }
        for m in t.members(swapped_killed) {
            tally.check(7, t.bc(t.add(y, m), q, p) == Some(qap), || key(a, m));
        }
    }
    tally
}

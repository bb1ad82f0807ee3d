//! Bott-Duffin inverses against ordinary invertibility, for every pair of
//! idempotents and every element intertwining them.

use super::tables::Tables;
use super::{finish, prepare, within_budget, LabConfig, LabReport, Suite, SuiteShape, Tally};
use crate::error::Result;
use crate::inverse::bott_duffin_split_inverse;
use crate::ring::{Elt, FiniteRing};

const CHECKS: [&str; 7] = [
    "a p = q a: a invertible <=> a^-(p,q) and a^-(1-p,1-q) exist",
    "a p = q a: a^-1 = a^-(p,q) + a^-(1-p,1-q)",
    "a p = q a: a invertible <=> block equations solvable, solution a^-1",
    "defining equations of a^-(p,q) agree with the (p,q)-inverse",
    "a^-(b,c) = a^-(bg,hc) for every frame",
    "a b g = h c a: a invertible <=> a^-(b,c) and a^-(1-bg,1-hc) exist, summing to a^-1",
    "library split inverse matches the table oracle",
];

const OBSERVATIONS: [&str; 2] = ["idempotent pairs", "invertible intertwiners"];

pub fn verify_bott_duffin_section(ring: &FiniteRing, config: &LabConfig) -> Result<LabReport> {
    let t = prepare(ring, config)?;
    let n = t.n as u64;
    let idem: Vec<u16> = t.elements().filter(|&e| t.idempotent[e as usize]).collect();
    let pairs: Vec<(u16, u16)> = idem.iter().flat_map(|&p| idem.iter().map(move |&q| (p, q))).collect();
    let frames = t.frames();
    within_budget(ring, config, Suite::BottDuffin, (pairs.len() as u64 + frames.len() as u64) * n * n)?;
    let labels: Vec<String> = CHECKS.iter().map(|s| s.to_string()).collect();

    let mut parts = config.exec.map_slice(&pairs, |&(p, q)| idempotent_pair(ring, &t, p, q));
    parts.extend(config.exec.map_slice(&frames, |f| {
        let mut tally = Tally::new(CHECKS.len(), OBSERVATIONS.len());
        let (p, q) = (f.p, f.q);
        let (np, nq) = (t.one_minus(p), t.one_minus(q));
        for a in t.elements() {
            tally.examined(1);
            let key = || vec![f.b, f.c, p, q, a];
            tally.check(4, t.bc(a, f.b, f.c) == t.bott_duffin(a, p, q), key);
            if t.mul(a, p) != t.mul(q, a) {
                continue;
            }
            tally.applicable();
            let invertible = t.unit_inverse[a as usize];
            let parts = t.bc(a, f.b, f.c).zip(t.bott_duffin(a, np, nq));
            let ok = match (invertible, parts) {
                (Some(inv), Some((y1, y2))) => t.add(y1, y2) == inv,
                (None, None) => true,
                _ => false,
            };
            tally.check(5, ok, key);
        }
        tally
    }));
    Ok(finish(
        ring,
        SuiteShape {
            suite: Suite::BottDuffin,
            checks: &labels,
            observations: &OBSERVATIONS,
            slots: &["b", "c", "p", "q", "a"],
            enumeration_space: (pairs.len() as u64 + frames.len() as u64) * n,
        },
        parts,
    ))
}

/// Solutions `z` of `z q = p z` and the four block equations.
fn block_solutions(t: &Tables, a: u16, p: u16, q: u16) -> Vec<u16> {
    let (np, nq) = (t.one_minus(p), t.one_minus(q));
    t.elements()
        .filter(|&z| {
            t.mul(z, q) == t.mul(p, z)
                && t.prod(&[p, z, q, a, p]) == p
                && t.prod(&[np, z, nq, a, np]) == np
                && t.prod(&[q, a, p, z, q]) == q
                && t.prod(&[nq, a, np, z, nq]) == nq
        })
        .collect()
}

fn idempotent_pair(ring: &FiniteRing, t: &Tables, p: u16, q: u16) -> Tally {
    let mut tally = Tally::new(CHECKS.len(), OBSERVATIONS.len());
    tally.observe(0);
    let (np, nq) = (t.one_minus(p), t.one_minus(q));
    for a in t.elements() {
        tally.examined(1);
        let key = || vec![p, q, p, q, a];
        let direct = t.bott_duffin(a, p, q);
        tally.check(3, direct == t.bc(a, p, q), key);
        if t.mul(a, p) != t.mul(q, a) {
            continue;
        }
        tally.applicable();
        let inv = t.unit_inverse[a as usize];
        if inv.is_some() {
            tally.observe(1);
        }
        let first = direct;
        let second = t.bott_duffin(a, np, nq);
        tally.check(0, inv.is_some() == (first.is_some() && second.is_some()), key);
        if let (Some(inv), Some(y1), Some(y2)) = (inv, first, second) {
            tally.check(1, t.add(y1, y2) == inv, key);
        }
        let blocks = block_solutions(t, a, p, q);
        tally.check(2, blocks == inv.into_iter().collect::<Vec<_>>(), key);

        let lib = bott_duffin_split_inverse(ring, &Elt(a), &Elt(p), &Elt(q));
        let ok = match (lib, inv) {
            (Ok(s), Some(inv)) => s.0 == inv,
            (Err(crate::Error::InverseAbsent(_)), None) => true,
            _ => false,
        };
        tally.check(6, ok, key);
    }
    tally
}

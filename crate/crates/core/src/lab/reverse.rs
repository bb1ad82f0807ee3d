//! Reverse order law for chained frames (`h2 c2 = b1 g1`), every pair of
//! elements with both constituent inverses.

use super::tables::Frame;
use super::{finish, prepare, within_budget, LabConfig, LabReport, Suite, SuiteShape, Tally};
use crate::error::Result;
use crate::inverse::{reverse_order_law_check, CornerFrame};
use crate::ring::{Elt, FiniteRing};

const CHECKS: [&str; 3] = [
    "q1 a1 (1-p1) a2 p2 = 0 => (a1 a2)^-(b2,c1) = a2^-(b2,c2) a1^-(b1,c1)",
    "(a1 a2)^-(b2,c1) = a2^-(b2,c2) a1^-(b1,c1) => q1 a1 (1-p1) a2 p2 = 0",
    "library verdict matches the table oracle (idempotent frames)",
];

const OBSERVATIONS: [&str; 3] = ["chained frame pairs", "obstruction zero, law holds", "obstruction nonzero, law fails"];

pub fn verify_reverse_order(ring: &FiniteRing, config: &LabConfig) -> Result<LabReport> {
    let t = prepare(ring, config)?;
    let n = t.n as u64;
    let frames = t.frames();
    let chained: u64 = frames
        .iter()
        .map(|f1| frames.iter().filter(|f2| f2.q == f1.p).count() as u64)
        .sum();
    within_budget(ring, config, Suite::Rol, chained * n * n)?;
    let labels: Vec<String> = CHECKS.iter().map(|s| s.to_string()).collect();

    let parts = config.exec.map_slice(&frames, |f1| {
        let mut tally = Tally::new(CHECKS.len(), OBSERVATIONS.len());
        let np1 = t.one_minus(f1.p);
        for f2 in frames.iter().filter(|f2| f2.q == f1.p) {
            tally.observe(0);
            let idempotent = [f1, f2].iter().all(|f| f.b == f.p && f.c == f.q);
            for a1 in t.elements() {
                for a2 in t.elements() {
                    tally.examined(1);
                    let (Some(y1), Some(y2)) = (t.bc(a1, f1.b, f1.c), t.bc(a2, f2.b, f2.c)) else {
                        continue;
                    };
                    tally.applicable();
                    let key = || vec![f1.b, f1.c, f1.p, f1.q, f2.b, f2.c, f2.p, f2.q, a1, a2];
                    let condition = t.prod(&[f1.q, a1, np1, a2, f2.p]) == t.zero;
                    let law = t.bc(t.mul(a1, a2), f2.b, f1.c) == Some(t.mul(y2, y1));
                    if condition {
                        tally.check(0, law, key);
                    }
                    if law {
                        tally.check(1, condition, key);
                    }
                    match (condition, law) {
                        (true, true) => tally.observe(1),
                        (false, false) => tally.observe(2),
                        _ => {}
                    }
                    if idempotent {
                        let lib = reverse_order_law_check(
                            ring,
                            &Elt(a1),
                            &library_frame(f1),
                            &Elt(a2),
                            &library_frame(f2),
                        );
                        let ok = lib.is_ok_and(|o| o.condition == condition && o.law_holds == law);
                        tally.check(2, ok, key);
                    }
                }
            }
        }
        tally
    });
    Ok(finish(
        ring,
        SuiteShape {
            suite: Suite::Rol,
            checks: &labels,
            observations: &OBSERVATIONS,
            slots: &["b1", "c1", "p1", "q1", "b2", "c2", "p2", "q2", "a1", "a2"],
            enumeration_space: chained * n * n,
        },
        parts,
    ))
}

fn library_frame(f: &Frame) -> CornerFrame<Elt> {
    CornerFrame { b: Elt(f.b), c: Elt(f.c), g: Elt(f.g), h: Elt(f.h), p: Elt(f.p), q: Elt(f.q) }
}

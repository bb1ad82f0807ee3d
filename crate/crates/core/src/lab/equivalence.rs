//! Ideal and annihilator characterizations of the (b,c)-inverse among outer
//! inverses, checked over every `(a, b, c, y)` with `y a y = y`.

use super::tables::{subset, Tables};
use super::{finish, prepare, within_budget, LabConfig, LabReport, Suite, SuiteShape, Tally};
use crate::error::Result;
use crate::ring::FiniteRing;

/// One comparison between ideals of `y` and of `b` or `c`. `lann(x)` is
/// `{z : z x = 0}` and `rann(x)` is `{z : x z = 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    RyEqRc,
    RyInRc,
    RcInRy,
    YrEqBr,
    YrInBr,
    BrInYr,
    LannYEqLannB,
    LannYInLannB,
    LannBInLannY,
    RannYEqRannC,
    RannYInRannC,
    RannCInRannY,
}

impl Atom {
    pub fn label(self) -> &'static str {
        match self {
            Atom::RyEqRc => "Ry = Rc",
            Atom::RyInRc => "Ry <= Rc",
            Atom::RcInRy => "Rc <= Ry",
            Atom::YrEqBr => "yR = bR",
            Atom::YrInBr => "yR <= bR",
            Atom::BrInYr => "bR <= yR",
            Atom::LannYEqLannB => "lann(y) = lann(b)",
            Atom::LannYInLannB => "lann(y) <= lann(b)",
            Atom::LannBInLannY => "lann(b) <= lann(y)",
            Atom::RannYEqRannC => "rann(y) = rann(c)",
            Atom::RannYInRannC => "rann(y) <= rann(c)",
            Atom::RannCInRannY => "rann(c) <= rann(y)",
        }
    }

    fn eval(self, t: &Tables, b: u16, c: u16, y: u16) -> bool {
        let (b, c, y) = (b as usize, c as usize, y as usize);
        match self {
            Atom::RyEqRc => t.img_l[y] == t.img_l[c],
            Atom::RyInRc => subset(t.img_l[y], t.img_l[c]),
            Atom::RcInRy => subset(t.img_l[c], t.img_l[y]),
            Atom::YrEqBr => t.img_r[y] == t.img_r[b],
            Atom::YrInBr => subset(t.img_r[y], t.img_r[b]),
            Atom::BrInYr => subset(t.img_r[b], t.img_r[y]),
            Atom::LannYEqLannB => t.ann_l[y] == t.ann_l[b],
            Atom::LannYInLannB => subset(t.ann_l[y], t.ann_l[b]),
            Atom::LannBInLannY => subset(t.ann_l[b], t.ann_l[y]),
            Atom::RannYEqRannC => t.ann_r[y] == t.ann_r[c],
            Atom::RannYInRannC => subset(t.ann_r[y], t.ann_r[c]),
            Atom::RannCInRannY => subset(t.ann_r[c], t.ann_r[y]),
        }
    }
}

/// A conjunction of atoms claimed equivalent to "y is the (b,c)-inverse of
/// a" for outer inverses `y`, possibly only when `b` and `c` are regular.
#[derive(Debug, Clone, Copy)]
pub struct Statement {
    pub atoms: &'static [Atom],
    pub needs_regular: bool,
}

impl Statement {
    pub fn label(&self) -> String {
        self.atoms.iter().map(|a| a.label()).collect::<Vec<_>>().join(", ")
    }

    pub fn eval(&self, t: &Tables, b: u16, c: u16, y: u16) -> bool {
        self.atoms.iter().all(|a| a.eval(t, b, c, y))
    }
}

use Atom::*;

const fn any(atoms: &'static [Atom]) -> Statement {
    Statement { atoms, needs_regular: false }
}

const fn reg(atoms: &'static [Atom]) -> Statement {
    Statement { atoms, needs_regular: true }
}

pub const STATEMENTS: [Statement; 15] = [
    any(&[RyEqRc, YrInBr, LannYInLannB]),
    any(&[YrEqBr, RyInRc, RannYInRannC]),
    any(&[RyInRc, YrInBr, LannYInLannB, RannYInRannC]),
    reg(&[RyEqRc, BrInYr, LannBInLannY]),
    reg(&[YrEqBr, RcInRy, RannCInRannY]),
    reg(&[RyEqRc, LannYEqLannB]),
    reg(&[RyInRc, BrInYr, RannYInRannC, LannBInLannY]),
    reg(&[RcInRy, YrInBr, LannYInLannB, RannCInRannY]),
    reg(&[RcInRy, BrInYr, RannCInRannY, LannBInLannY]),
    // hybrid conditions
    reg(&[YrEqBr, RannYEqRannC]),
    reg(&[RyInRc, RannYInRannC, LannYEqLannB]),
    reg(&[RcInRy, RannCInRannY, LannYEqLannB]),
    reg(&[BrInYr, LannBInLannY, RannYEqRannC]),
    reg(&[YrInBr, LannYInLannB, RannYEqRannC]),
    // annihilator conditions
    reg(&[RannYEqRannC, LannYEqLannB]),
];

const HYBRID: usize = 9;
const ANNIHILATOR: usize = 14;

fn check_labels() -> Vec<String> {
    let mut labels: Vec<String> = STATEMENTS
        .iter()
        .map(|s| {
            let scope = if s.needs_regular { "regular b, c" } else { "any b, c" };
            format!("[{scope}] {} <=> y = a^-(b,c)", s.label())
        })
        .collect();
    labels.extend(
        [
            "definition has at most one solution",
            "regular b, c: (b,c), hybrid and annihilator inverses coincide",
            "(b,c)-inverse exists => b, c regular",
            "hybrid inverse exists, c regular => it is the (b,c)-inverse",
        ]
        .map(String::from),
    );
    labels
}

/// Sweeps every `(a, b, c, y)`; statements are compared with membership of
/// `y` as the literal (b,c)-inverse.
pub fn verify_equivalence_suite(ring: &FiniteRing, config: &LabConfig) -> Result<LabReport> {
    let t = prepare(ring, config)?;
    let n = t.n as u64;
    within_budget(ring, config, Suite::Equivalences, n.pow(4))?;
    let labels = check_labels();
    let base = STATEMENTS.len();

    let parts = config.exec.map(0..t.n, |ai| {
        let a = ai as u16;
        let mut tally = Tally::new(labels.len(), 0);
        for b in t.elements() {
            for c in t.elements() {
                let regular = t.regular(b) && t.regular(c);
                let truth = t.bc(a, b, c);
                let mut hybrid = Vec::new();
                let mut annihilator = Vec::new();
                for y in t.elements() {
                    tally.examined(1);
                    if t.mul3(y, a, y) != y {
                        continue;
                    }
                    tally.applicable();
                    let is_inverse = truth == Some(y);
                    for (i, s) in STATEMENTS.iter().enumerate() {
                        if s.needs_regular && !regular {
                            continue;
                        }
                        tally.check(i, s.eval(&t, b, c, y) == is_inverse, || vec![a, b, c, y]);
                    }
                    if STATEMENTS[HYBRID].eval(&t, b, c, y) {
                        hybrid.push(y);
                    }
                    if STATEMENTS[ANNIHILATOR].eval(&t, b, c, y) {
                        annihilator.push(y);
                    }
                }
                let unique = !t.non_unique.contains(&(a, b, c));
                tally.check(base, unique, || vec![a, b, c]);
                let expected: Vec<u16> = truth.into_iter().collect();
                if regular {
                    tally.check(base + 1, hybrid == expected && annihilator == expected, || vec![a, b, c]);
                }
                if truth.is_some() {
                    tally.check(base + 2, regular, || vec![a, b, c]);
                }
                if t.regular(c) && !hybrid.is_empty() {
                    tally.check(base + 3, hybrid == expected && t.regular(b), || vec![a, b, c]);
                }
            }
        }
        tally
    });
    Ok(finish(
        ring,
        SuiteShape {
            suite: Suite::Equivalences,
            checks: &labels,
            observations: &[],
            slots: &["a", "b", "c", "y"],
            enumeration_space: n.pow(4),
        },
        parts,
    ))
}

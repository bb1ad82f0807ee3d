//! Exhaustive verification over small finite rings.
//!
//! Each suite enumerates its whole tuple space, evaluates every statement
//! with the table oracle in [`tables`], and tallies agreement. Counterexamples
//! are sorted by tuple so a report is identical under either execution
//! strategy.

mod bott_duffin;
mod equivalence;
mod reverse;
mod sets;
pub mod tables;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ring::{FiniteRing, Ring, RingDescriptor};
use tables::Tables;

pub use bott_duffin::verify_bott_duffin_section;
pub use equivalence::{verify_equivalence_suite, Atom, Statement, STATEMENTS};
pub use reverse::verify_reverse_order;
pub use sets::verify_set_decomposition;

/// Rings every suite is expected to certify.
pub const DEFAULT_RINGS: [&str; 6] = ["Zn:4", "Zn:6", "Zn:8", "Zn:9", "Zn:12", "MFp:2:2"];

/// Counterexamples kept per report; the total is always counted.
const KEPT_COUNTEREXAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Equivalences,
    Sets,
    BottDuffin,
    Rol,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Equivalences, Suite::Sets, Suite::BottDuffin, Suite::Rol];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Equivalences => "equivalences",
            Suite::Sets => "sets",
            Suite::BottDuffin => "bottduffin",
            Suite::Rol => "rol",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}` (equivalences|sets|bottduffin|rol)")))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LabConfig {
    pub max_ring_size: usize,
    /// Upper bound on elementary tuple evaluations per suite.
    pub max_ops: u64,
    pub exec: Execution,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig { max_ring_size: 16, max_ops: 100_000_000, exec: Execution::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub label: String,
    /// Tuples where the check was evaluated and passed.
    pub holds: u64,
    pub fails: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub name: String,
    pub element: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub tuple: Vec<Slot>,
}

/// A count worth reporting that is not itself a pass/fail check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub label: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabReport {
    pub ring: String,
    pub suite: Suite,
    /// Closed-form size of the enumerated tuple space.
    pub enumeration_space: u64,
    pub tuples_examined: u64,
    /// Tuples meeting the suite's hypotheses.
    pub applicable: u64,
    pub checks: Vec<CheckSummary>,
    pub observations: Vec<Observation>,
    pub counterexamples_total: u64,
    pub counterexamples: Vec<Counterexample>,
    /// Inner inverses were quantified over all of `b{1}`, `c{1}`.
    pub all_inner_inverses: bool,
    pub certified: bool,
}

impl LabReport {
    pub fn check(&self, label: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn observation(&self, label: &str) -> u64 {
        self.observations.iter().find(|o| o.label == label).map_or(0, |o| o.count)
    }
}

/// Mergeable per-partition counters.
#[derive(Debug, Clone)]
pub(crate) struct Tally {
    holds: Vec<u64>,
    fails: Vec<u64>,
    observed: Vec<u64>,
    examined: u64,
    applicable: u64,
    /// (check index, slot values) for the first failures in this partition.
    witnesses: Vec<(Vec<u16>, usize)>,
}

impl Tally {
    pub(crate) fn new(checks: usize, observations: usize) -> Self {
        Tally {
            holds: vec![0; checks],
            fails: vec![0; checks],
            observed: vec![0; observations],
            examined: 0,
            applicable: 0,
            witnesses: Vec::new(),
        }
    }

    pub(crate) fn examined(&mut self, k: u64) {
        self.examined += k;
    }

    pub(crate) fn applicable(&mut self) {
        self.applicable += 1;
    }

    pub(crate) fn observe(&mut self, i: usize) {
        self.observed[i] += 1;
    }

    /// Records one evaluation of check `i`; `tuple` is only built on failure.
    pub(crate) fn check(&mut self, i: usize, ok: bool, tuple: impl FnOnce() -> Vec<u16>) {
        if ok {
            self.holds[i] += 1;
        } else {
            self.fails[i] += 1;
            if self.witnesses.len() < KEPT_COUNTEREXAMPLES {
                self.witnesses.push((tuple(), i));
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (x, y) in self.holds.iter_mut().zip(other.holds) {
            *x += y;
        }
        for (x, y) in self.fails.iter_mut().zip(other.fails) {
            *x += y;
        }
        for (x, y) in self.observed.iter_mut().zip(other.observed) {
            *x += y;
        }
        self.examined += other.examined;
        self.applicable += other.applicable;
        self.witnesses.extend(other.witnesses);
        self
    }
}

/// Static description of a suite used to render its report.
pub(crate) struct SuiteShape<'a> {
    pub suite: Suite,
    pub checks: &'a [String],
    pub observations: &'a [&'a str],
    pub slots: &'a [&'a str],
    pub enumeration_space: u64,
}

pub(crate) fn finish(ring: &FiniteRing, shape: SuiteShape<'_>, parts: Vec<Tally>) -> LabReport {
    let total = parts
        .into_iter()
        .fold(Tally::new(shape.checks.len(), shape.observations.len()), Tally::merge);
    let mut witnesses = total.witnesses;
    witnesses.sort();
    let counterexamples_total: u64 = total.fails.iter().sum();
    let counterexamples = witnesses
        .into_iter()
        .take(KEPT_COUNTEREXAMPLES)
        .map(|(tuple, i)| Counterexample {
            check: shape.checks[i].clone(),
            tuple: shape
                .slots
                .iter()
                .zip(tuple)
                .map(|(name, x)| Slot { name: name.to_string(), element: ring.label(ring.elt(x as usize)).to_string() })
                .collect(),
        })
        .collect();
    LabReport {
        ring: ring.descriptor().to_string(),
        suite: shape.suite,
        enumeration_space: shape.enumeration_space,
        tuples_examined: total.examined,
        applicable: total.applicable,
        checks: shape
            .checks
            .iter()
            .enumerate()
            .map(|(i, label)| CheckSummary { label: label.clone(), holds: total.holds[i], fails: total.fails[i] })
            .collect(),
        observations: shape
            .observations
            .iter()
            .enumerate()
            .map(|(i, label)| Observation { label: label.to_string(), count: total.observed[i] })
            .collect(),
        counterexamples_total,
        counterexamples,
        all_inner_inverses: true,
        certified: counterexamples_total == 0,
    }
}

pub(crate) fn prepare(ring: &FiniteRing, config: &LabConfig) -> Result<Tables> {
    if ring.size() > config.max_ring_size {
        return Err(Error::CapExceeded(format!(
            "{} has {} elements, configured limit {}",
            ring.descriptor(),
            ring.size(),
            config.max_ring_size
        )));
    }
    Tables::new(ring)
}

pub(crate) fn within_budget(ring: &FiniteRing, config: &LabConfig, suite: Suite, ops: u64) -> Result<()> {
    if ops > config.max_ops {
        return Err(Error::CapExceeded(format!(
            "{suite} on {} needs about {ops} evaluations, configured limit {}",
            ring.descriptor(),
            config.max_ops
        )));
    }
    Ok(())
}

pub fn run_suite(ring: &FiniteRing, suite: Suite, config: &LabConfig) -> Result<LabReport> {
    match suite {
        Suite::Equivalences => verify_equivalence_suite(ring, config),
        Suite::Sets => verify_set_decomposition(ring, config),
        Suite::BottDuffin => verify_bott_duffin_section(ring, config),
        Suite::Rol => verify_reverse_order(ring, config),
    }
}

/// Parses a finite ring descriptor such as `Zn:6`, `Z6` or `M2F2`.
pub fn finite_ring(text: &str) -> Result<FiniteRing> {
    FiniteRing::new(text.parse::<RingDescriptor>()?)
}

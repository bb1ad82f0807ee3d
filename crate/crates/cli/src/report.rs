//! Report document, status mapping and the CSV summary row.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use bcinv::inverse::Residual;
use bcinv::Error;

use crate::job::JobSpec;

pub const SCHEMA: &str = "bcinv-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Success,
    /// The requested inverse (or a prerequisite inverse) does not exist.
    Absent,
    /// A checked property failed; witnesses are in `outputs`.
    Refuted,
    /// A numerical method did not reach a verdict.
    Unresolved,
    Invalid,
}

impl Outcome {
    pub fn status(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Absent | Outcome::Refuted | Outcome::Unresolved => 1,
            Outcome::Invalid => 2,
        }
    }

    pub fn of_error(e: &Error) -> Outcome {
        match e {
            e if e.is_input_error() => Outcome::Invalid,
            Error::InvariantViolated(_) => Outcome::Refuted,
            Error::ConvergenceFailure(_) | Error::SpectralPreconditionFailed(_) => Outcome::Unresolved,
            _ => Outcome::Absent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    /// Which equation, e.g. `b - y a b`.
    pub name: String,
    pub norm: f64,
    pub scale: f64,
    pub ok: bool,
}

impl ResidualRecord {
    pub fn with_prefix(prefix: &str, r: &Residual) -> Self {
        let name = if prefix.is_empty() { r.name.to_string() } else { format!("{prefix}: {}", r.name) };
        ResidualRecord { name, norm: r.norm, scale: r.scale, ok: r.ok }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub check: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    /// Error variant, e.g. `SingularCorner`.
    pub kind: String,
    pub message: String,
}

impl Diagnostic {
    pub fn of(e: &Error) -> Self {
        let debug = format!("{e:?}");
        let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
        Diagnostic { kind, message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub job: JobSpec,
    pub status: i32,
    pub outcome: Outcome,
    /// Command-specific results; `null` when the job failed before producing any.
    pub outputs: Value,
    pub residuals: Vec<ResidualRecord>,
    pub verdicts: Vec<VerdictRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<Diagnostic>,
}

/// Accumulates the pieces of a report while a command runs.
#[derive(Debug, Default)]
pub struct Findings {
    pub outputs: serde_json::Map<String, Value>,
    pub residuals: Vec<ResidualRecord>,
    pub verdicts: Vec<VerdictRecord>,
    /// Set when the command ends early or a required inverse is absent.
    pub failure: Option<Error>,
}

impl Findings {
    pub fn output(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.outputs.insert(key.to_string(), v);
    }

    pub fn residuals<'a>(&mut self, prefix: &str, rs: impl IntoIterator<Item = &'a Residual>) {
        self.residuals.extend(rs.into_iter().map(|r| ResidualRecord::with_prefix(prefix, r)));
    }

    pub fn verdict(&mut self, check: impl Into<String>, holds: bool, detail: Option<String>) {
        self.verdicts.push(VerdictRecord { check: check.into(), holds, detail });
    }

    pub fn into_report(self, job: JobSpec) -> Report {
        let outcome = match &self.failure {
            Some(e) => Outcome::of_error(e),
            None if self.verdicts.iter().all(|v| v.holds) => Outcome::Success,
            None => Outcome::Refuted,
        };
        let outputs = if self.outputs.is_empty() { Value::Null } else { Value::Object(self.outputs) };
        Report {
            schema: SCHEMA.to_string(),
            job,
            status: outcome.status(),
            outcome,
            outputs,
            residuals: self.residuals,
            verdicts: self.verdicts,
            diagnostic: self.failure.as_ref().map(Diagnostic::of),
        }
    }
}

impl Report {
    #[cfg(test)]
    pub fn invalid(job: JobSpec, e: &Error) -> Report {
        Findings { failure: Some(e.clone()), ..Findings::default() }.into_report(job)
    }

    pub fn worst_residual(&self) -> Option<&ResidualRecord> {
        self.residuals.iter().max_by(|a, b| {
            let rel = |r: &ResidualRecord| r.norm / r.scale.max(f64::MIN_POSITIVE);
            (!a.ok, rel(a)).partial_cmp(&(!b.ok, rel(b))).unwrap_or(std::cmp::Ordering::Equal)
        })
    }

    /// Short human-readable rendering.
    pub fn text(&self) -> String {
        let mut out = format!("{} on {}: {:?} (status {})\n", self.job.command, self.job.ring, self.outcome, self.status);
        if let Some(Value::String(y)) = self.outputs.get("y") {
            out.push_str(&format!("  y = {y}\n"));
        }
        for v in &self.verdicts {
            let mark = if v.holds { "ok  " } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}", v.check));
            if let Some(d) = &v.detail {
                out.push_str(&format!(" ({d})"));
            }
            out.push('\n');
        }
        if let Some(r) = self.worst_residual() {
            out.push_str(&format!("  worst residual: {} = {:.3e} (scale {:.3e})\n", r.name, r.norm, r.scale));
        }
        if let Some(d) = &self.diagnostic {
            out.push_str(&format!("  {}: {}\n", d.kind, d.message));
        }
        out
    }

    /// Writes a header and one row: command, ring, status, outcome, verdict
    /// counts and the worst residual.
    pub fn write_summary<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record([
            "command",
            "ring",
            "status",
            "outcome",
            "verdicts_passed",
            "verdicts_total",
            "worst_residual",
            "worst_residual_norm",
            "diagnostic",
        ])?;
        let worst = self.worst_residual();
        wr.write_record([
            self.job.command.name().to_string(),
            self.job.ring.clone(),
            self.status.to_string(),
            serde_json::to_value(self.outcome).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            self.verdicts.iter().filter(|v| v.holds).count().to_string(),
            self.verdicts.len().to_string(),
            worst.map(|r| r.name.clone()).unwrap_or_default(),
            worst.map(|r| format!("{:e}", r.norm)).unwrap_or_default(),
            self.diagnostic.as_ref().map(|d| d.message.clone()).unwrap_or_default(),
        ])?;
        wr.flush()?;
        Ok(())
    }
}

mod job;
mod report;
mod run;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bcinv::banach::BoundSide;
use bcinv::lab::Suite;

use job::{Command, JobSpec, MethodChoice};
use report::Report;

/// Compute, verify and certify (b,c)-inverses over finite rings and matrix algebras.
///
/// Exit status: 0 success, 1 inverse absent, property refuted or no convergence, 2 invalid input.
#[derive(Parser)]
#[command(name = "bcinv", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Compute a^-(b,c) and certify it.
    Compute(Flags),
    /// Check a supplied y against the definition.
    Verify(Flags),
    /// Run exhaustive verification suites over a finite ring.
    Lab(Flags),
    /// Series, integral and limit forms, the H operator and the perturbation bound.
    Banach(Flags),
    /// Reverse order law for a chained pair of frames.
    Rol(Flags),
    /// Track a_n^-(b_n,c_n) along a_n = a + da/n (same for b, c).
    Continuity(Flags),
    /// Run a job file, or re-run the job recorded in a report.
    Run {
        path: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Flags {
    /// Ring descriptor: Zn:6 (or Z6), MFp:2:2 (or M2F2), Q:3, R:4.
    #[arg(long)]
    ring: String,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
    /// Inner inverse of b; omitted means canonical.
    #[arg(long)]
    g: Option<String>,
    /// Inner inverse of c; omitted means canonical.
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    a2: Option<String>,
    #[arg(long)]
    b2: Option<String>,
    #[arg(long)]
    c2: Option<String>,
    #[arg(long)]
    g2: Option<String>,
    #[arg(long)]
    h2: Option<String>,
    /// Candidate inverse for `verify`.
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    da: Option<String>,
    #[arg(long)]
    db: Option<String>,
    #[arg(long)]
    dc: Option<String>,
    #[arg(long)]
    method: Option<MethodChoice>,
    /// Equality tolerance of the float backend.
    #[arg(long, env = "BCINV_TOL")]
    tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    lambda0: Option<f64>,
    /// Real part of λ in the perturbation bound.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda_im: Option<f64>,
    #[arg(long, value_parser = parse_side)]
    side: Option<BoundSide>,
    #[arg(long)]
    suite: Option<Suite>,
    /// Last index of a continuity run.
    #[arg(long, alias = "n")]
    last: Option<u64>,
    /// Disable internal parallelism.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct Output {
    /// Also write the JSON report to this path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write a one-row CSV summary to this path.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn parse_side(s: &str) -> Result<BoundSide, String> {
    match s.to_ascii_lowercase().as_str() {
        "left" => Ok(BoundSide::Left),
        "right" => Ok(BoundSide::Right),
        _ => Err(format!("expected left or right, got `{s}`")),
    }
}

impl Flags {
    fn into_job(self, command: Command) -> (JobSpec, Output) {
        let mut job = JobSpec::new(command, self.ring);
        let named = [
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("g", self.g),
            ("h", self.h),
            ("a2", self.a2),
            ("b2", self.b2),
            ("c2", self.c2),
            ("g2", self.g2),
            ("h2", self.h2),
            ("y", self.y),
            ("da", self.da),
            ("db", self.db),
            ("dc", self.dc),
        ];
        for (name, value) in named {
            if let Some(v) = value {
                job.elements.insert(name.to_string(), v);
            }
        }
        job.method = self.method;
        job.tol = self.tol;
        job.beta = self.beta;
        job.lambda0 = self.lambda0;
        job.lambda = self.lambda;
        job.lambda_im = self.lambda_im;
        job.side = self.side;
        job.suite = self.suite;
        job.last = self.last;
        job.sequential = self.sequential;
        (job, self.out)
    }
}

/// Reads either a bare job or a report, whose `job` field is re-run.
fn load_job(path: &Path) -> Result<JobSpec, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("{} is not JSON: {e}", path.display()))?;
    let job = match value.get("job") {
        Some(j) => j.clone(),
        None => value,
    };
    serde_json::from_value(job).map_err(|e| format!("{} is not a valid job: {e}", path.display()))
}

fn emit(report: &Report, out: &Output) -> Result<(), String> {
    let json = serde_json::to_string_pretty(report).map_err(|e| format!("cannot encode report: {e}"))?;
    let mut stdout = std::io::stdout().lock();
    let shown = match out.format {
        Format::Json => format!("{json}\n"),
        Format::Text => report.text(),
    };
    stdout.write_all(shown.as_bytes()).map_err(|e| e.to_string())?;
    if let Some(path) = &out.report {
        fs::write(path, format!("{json}\n")).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    if let Some(path) = &out.summary {
        let file = fs::File::create(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        report.write_summary(file).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let (job, out) = match Cli::parse().command {
        Sub::Compute(f) => f.into_job(Command::Compute),
        Sub::Verify(f) => f.into_job(Command::Verify),
        Sub::Lab(f) => f.into_job(Command::Lab),
        Sub::Banach(f) => f.into_job(Command::Banach),
        Sub::Rol(f) => f.into_job(Command::Rol),
        Sub::Continuity(f) => f.into_job(Command::Continuity),
        Sub::Run { path, out } => match load_job(&path) {
            Ok(job) => (job, out),
            Err(e) => {
                eprintln!("bcinv: {e}");
                return ExitCode::from(2);
            }
        },
    };
    let report = run::execute(&job);
    if let Err(e) = emit(&report, &out) {
        eprintln!("bcinv: {e}");
        return ExitCode::from(2);
    }
    if let Some(d) = &report.diagnostic {
        eprintln!("bcinv: {}", d.message);
    }
    ExitCode::from(report.status as u8)
}

//! Command-line front end for `contract-sched`.
//!
//! Every subcommand writes its result (JSON, or CSV for tabular output) to
//! stdout or to the requested file. Errors are printed to stderr as
//! `{"error": {"code": ..., "message": ...}}` with exit status 1; malformed
//! invocations exit with status 2.

pub mod commands;
pub mod error;
pub mod table;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{CliError, CliResult};

/// Caps the worker threads of parallel sweeps.
pub const THREADS_ENV: &str = "CONTRACT_SCHED_THREADS";

#[derive(Debug, Parser)]
#[command(name = "contract-sched", version, about = "Schedules of contract algorithms: generation, measures and bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a schedule file.
    Gen(GenArgs),
    /// Evaluate a measure of a schedule over its critical times.
    Eval(EvalArgs),
    /// Compute a closed-form bound.
    Bounds(BoundsArgs),
    /// Solve a makespan instance.
    Makespan(MakespanArgs),
    /// Normalize a single-processor schedule.
    Normalize(NormalizeArgs),
    /// Emit figure datasets as CSV.
    Sweep(SweepArgs),
    /// Run the property and acceptance checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Exp,
}

/// `auto-def`, `auto-acc` or a number greater than 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseChoice {
    DeficiencyOptimal,
    AccelerationOptimal,
    Value(f64),
}

fn parse_base(s: &str) -> Result<BaseChoice, String> {
    match s {
        "auto-def" => Ok(BaseChoice::DeficiencyOptimal),
        "auto-acc" => Ok(BaseChoice::AccelerationOptimal),
        other => other
            .parse::<f64>()
            .map(BaseChoice::Value)
            .map_err(|_| format!("expected auto-def, auto-acc or a number, got {other:?}")),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "exp")]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_parser = parse_base, default_value = "auto-def")]
    pub base: BaseChoice,
    /// Number of contracts; defaults to 8 (n + m).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Acc,
    Perf,
    Def,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Exact,
    Lpt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    /// Skip windows in which some problem is unserved.
    Served,
    /// Count unserved windows as unbounded.
    All,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub schedule: PathBuf,
    #[arg(long, value_enum)]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value = "exact")]
    pub solver: SolverArg,
    #[arg(long, value_enum, default_value = "served")]
    pub window: WindowArg,
    /// Write the per-critical-time series here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundName {
    DeficiencyUb,
    DeficiencyUbBeta,
    BestExp,
    GeneralLb,
    RoundrobinLb,
    TwoProblemLb,
    CyclicAccLb,
    PerfClosedForm,
    AccOptDeficiencyUb,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub name: BoundName,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Base, for bounds that take one.
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MakespanSolver {
    Exact,
    Greedy,
    Lpt,
}

#[derive(Debug, Args)]
pub struct MakespanArgs {
    /// Comma-separated job sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<f64>,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub solver: MakespanSolver,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    #[arg(long)]
    pub schedule: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Also shorten runs of consecutive contracts (two problems only).
    #[arg(long)]
    pub pairs: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub figure: u8,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Largest n/m for figure 1.
    #[arg(long, default_value_t = 64)]
    pub r_max: usize,
    /// Largest m for figure 2.
    #[arg(long, default_value_t = 64)]
    pub m_max: usize,
    /// Largest rho for figure 2.
    #[arg(long, default_value_t = 64)]
    pub rho_max: usize,
    /// Largest n for figure 3.
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Replaces every check's own tolerance.
    #[arg(long, value_parser = parse_positive)]
    pub tolerance: Option<f64>,
    /// Random trials per randomized check (defaults to each check's own count).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Only run checks whose name contains this string.
    #[arg(long)]
    pub only: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match commands::execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            e.exit_code()
        }
    }
}

//! Batch front end: `classify`, `shadow` and `probe` over JSON operator configs.
//!
//! Exit codes: 0 success or certified, 1 ran but not certified, 2 bad config
//! or flags, 3 certified refutation, 4 operation does not apply.

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{
    cmd_classify, cmd_probe, cmd_shadow, EXIT_CONFIG, EXIT_INAPPLICABLE, EXIT_OK, EXIT_REFUTED, EXIT_UNCERTIFIED,
};
pub use config::{Operator, OperatorConfig, OperatorKind};
pub use report::{Report, SCHEMA};

use crate::error::Error;

#[derive(Debug, thiserror::Error)]
#[error("{error}")]
pub struct CliError {
    pub code: i32,
    pub error: Error,
}

#[derive(Debug, Parser)]
#[command(name = "linshadow", version, about = "Expansivity, hyperbolicity and shadowing of linear operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every applicable classifier.
    Classify(ClassifyArgs),
    /// Shadow a pseudotrajectory, or refute shadowing with `--refute`.
    Shadow(ShadowArgs),
    /// Run one named probe.
    Probe(ProbeArgs),
}

#[derive(Clone, Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub horizon: u64,
    /// Expansivity constant c > 1.
    #[arg(long, default_value_t = 2.0)]
    pub threshold: f64,
    /// Directory for report.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Decaying,
    Psummable,
}

#[derive(Clone, Debug, Args)]
pub struct ShadowArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Pseudotrajectory JSON; generated from `--seed` when absent.
    #[arg(long)]
    pub pseudo: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Half-width of the window, `[-N, N]` (or `[0, N]` for non-invertible operators).
    #[arg(long, default_value_t = 50)]
    pub window: i64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Directory for report.json, shadow.json, shadow.csv and pseudo.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// On a non-splittable matrix, produce a refutation certificate.
    #[arg(long)]
    pub refute: bool,
    /// Defects follow `delta (1 + |n|)^-decay` and the profile is certified.
    #[arg(long, value_enum)]
    pub profile: Option<ProfileArg>,
    #[arg(long, default_value_t = 1.0)]
    pub decay: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProbeName {
    Orbit,
    Irregular,
    Ne0,
    LinearGrowth,
    Fd1,
    Fd2,
}

impl ProbeName {
    pub fn as_str(self) -> &'static str {
        match self {
            ProbeName::Orbit => "orbit",
            ProbeName::Irregular => "irregular",
            ProbeName::Ne0 => "ne0",
            ProbeName::LinearGrowth => "linear-growth",
            ProbeName::Fd1 => "fd1",
            ProbeName::Fd2 => "fd2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FdMode {
    Lp,
    L1,
}

#[derive(Clone, Debug, Args)]
pub struct ProbeArgs {
    #[arg(value_enum)]
    pub name: ProbeName,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub horizon: u64,
    #[arg(long, default_value_t = 2.0)]
    pub threshold: f64,
    /// Orbit half-width, candidate range, or counterexample length.
    #[arg(long, default_value_t = 10)]
    pub window: i64,
    /// Basis vector for `orbit`.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub index: i64,
    /// Sparse `{index: [re, im]}` JSON for `linear-growth`.
    #[arg(long)]
    pub point: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = FdMode::Lp)]
    pub mode: FdMode,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load(path: &std::path::Path) -> Result<OperatorConfig, CliError> {
    OperatorConfig::load(path).map_err(|error| CliError { code: EXIT_CONFIG, error })
}

/// Parses arguments, runs the command and returns the report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Classify(a) => cmd_classify(&load(&a.config)?, a),
        Command::Shadow(a) => cmd_shadow(&load(&a.config)?, a),
        Command::Probe(a) => cmd_probe(&load(&a.config)?, a),
    }
}

/// Full binary behaviour: report on stdout, errors on stderr, exit code returned.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => match report.to_json() {
            Ok(text) => {
                print!("{text}");
                report.exit_code
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_UNCERTIFIED
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

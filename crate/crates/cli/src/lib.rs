//! Command-line pipelines over `equichar-core`, shared by the `equichar` binary and its tests.

pub mod commands;
pub mod input;
pub mod json;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use equichar_core::Error;

pub use commands::run;

pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const TOO_LARGE: i32 = 3;
    pub const UNBOUNDED: i32 = 4;
    pub const NOT_MONOMIAL: i32 = 5;
    pub const ENDPOINT: i32 = 6;
}

/// A failed command: exit code, message for stderr and, for some failures, a report for stdout.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub stdout: Option<String>,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into(), stdout: None }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(exit::PARSE, message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionTooLarge { .. } | Error::SizeExceeded { .. } => exit::TOO_LARGE,
            Error::UnboundedGroup(_) => exit::UNBOUNDED,
            Error::NotMonomial { .. } => exit::NOT_MONOMIAL,
            Error::EndpointViolation { .. } => exit::ENDPOINT,
            _ => exit::PARSE,
        };
        CliError::new(code, e.to_string())
    }
}

/// What a successful (or verification-failed) command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    /// Files written only after the whole command succeeded.
    pub files: Vec<(PathBuf, String)>,
}

#[derive(Debug, Parser)]
#[command(name = "equichar", version, about = "Which point-wise activations commute with a matrix group")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a group and report its maximal activation family.
    Classify(GroupArgs),
    /// Find a positive diagonal scaling to (signed) permutation matrices.
    Normalize(GroupArgs),
    /// Orbit basis of equivariant layers between tensor-power permutation actions.
    Basis(BasisArgs),
    /// Check point-wise equivariance of an activation on random vectors.
    Verify(VerifyArgs),
    /// Sample a b-multiplicative activation built from a profile file to CSV.
    ExportActivation(ExportArgs),
}

#[derive(Debug, Clone, Args)]
#[group(id = "source", required = true, multiple = false, args = ["file", "builtin"])]
pub struct GroupSource {
    /// Group spec JSON: {"name", "dimension", "generators", "tolerance"?}.
    pub file: Option<PathBuf>,
    /// Built-in group: sym:N, cyclic:N, signed-sym:N, signed-cyclic:N or rotation:K.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct GroupArgs {
    #[command(flatten)]
    pub source: GroupSource,
    /// Absolute tolerance (overrides the file and EQUICHAR_TOL).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisGroup {
    Sym,
    Cyclic,
    File,
}

#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "k-in", default_value_t = 1)]
    pub k_in: usize,
    #[arg(long = "k-out", default_value_t = 1)]
    pub k_out: usize,
    #[arg(long, value_enum, default_value_t = BasisGroup::Sym)]
    pub group: BasisGroup,
    /// Permutation generators for `--group file`: {"generators": [[0-based images], ...]}.
    #[arg(long, required_if_eq("group", "file"))]
    pub generators: Option<PathBuf>,
    /// Write the basis as sparse (row, col) supports to this JSON file.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: GroupSource,
    /// relu, tanh, identity or eta:<profile.json>.
    #[arg(long)]
    pub activation: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpacingArg {
    Linear,
    Log,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    /// Profile JSON: {"b"?, "signed"?, "eta_plus": [[x, y], ...], "eta_minus"?}.
    #[arg(long = "eta-file")]
    pub eta_file: PathBuf,
    #[arg(long)]
    pub b: Option<f64>,
    /// Odd extension of the positive branch.
    #[arg(long)]
    pub signed: bool,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub max: f64,
    #[arg(long, default_value_t = 201)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = SpacingArg::Linear)]
    pub spacing: SpacingArg,
    #[arg(long)]
    pub tol: Option<f64>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

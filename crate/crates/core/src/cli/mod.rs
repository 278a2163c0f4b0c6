//! Command-line front end. Every command writes one CSV table preceded by a
//! `# config:` comment holding the effective run configuration as JSON.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical tolerance failure.

mod commands;
pub mod expr;
pub mod grid;
pub mod output;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use output::OUT_DIR_ENV;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "seqchain",
    version,
    about = "Transfer-matrix analysis of sequentially prepared qubit chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of the transfer matrix, unit-space dimension and verdict.
    Spectrum(RunArgs),
    /// Variance of a collective observable against chain length.
    Fig3(RunArgs),
    /// Squeezing trajectory (m, v) with entanglement-depth bounds.
    Fig4(RunArgs),
    /// Effective size along a direction, or maximized over directions.
    Neff(RunArgs),
    /// Site means and correlations with the first site.
    Correlate(RunArgs),
    /// Transfer-matrix results against the state-vector simulator.
    OracleCheck(RunArgs),
}

/// Flags shared by all commands. Values left unset are filled with the
/// command's defaults before the config line is written.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct RunArgs {
    /// Gate family: identity, weyl, controlled_rotation, squeezing, macroscopic_family, random.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    /// Comma-separated parameters; each may be `a|b|…` or `start:stop:count`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<String>,
    /// JSON gate file (family form or explicit 4×4 matrix).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate_file: Option<String>,
    /// Amplitude of |0⟩ in the first site, e.g. `sqrt(1/2)` or `0.6i`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<String>,
    /// Amplitude of |1⟩ in the first site.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<String>,
    /// Chain length.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Chain lengths: `n`, `lo:hi` or `lo:hi:count` (geometric), comma-separated.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_range: Option<String>,
    /// Observable direction `x,y,z` (normalized).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bloch: Option<String>,
    /// Transverse observable cos θ σx + sin θ σy.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    /// χt values, same syntax as a single `--params` slot.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_t: Option<String>,
    /// First seed for random gates.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of random gates.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// Largest chain the state-vector simulator may allocate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    /// Eigenvalue clustering / unit-eigenvalue tolerance.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Unitarity tolerance for gate files.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary_tol: Option<f64>,
    /// Agreement tolerance for oracle comparisons.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check_tol: Option<f64>,
    /// Output file; relative paths are placed under $SEQCHAIN_OUT_DIR when set.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'static str,
    #[serde(flatten)]
    args: &'a RunArgs,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<String> for CliError {
    fn from(msg: String) -> Self {
        CliError::Input(msg)
    }
}

/// A finished table plus an optional tolerance failure to report after the
/// table has been written.
pub struct Outcome {
    pub table: output::Table,
    pub failure: Option<String>,
}

type Handler = fn(&mut RunArgs) -> Result<Outcome, CliError>;

fn execute(cli: Cli) -> Result<(), CliError> {
    let (name, mut args, f): (&'static str, RunArgs, Handler) = match cli.command {
        Command::Spectrum(a) => ("spectrum", a, commands::spectrum),
        Command::Fig3(a) => ("fig3", a, commands::fig3),
        Command::Fig4(a) => ("fig4", a, commands::fig4),
        Command::Neff(a) => ("neff", a, commands::neff),
        Command::Correlate(a) => ("correlate", a, commands::correlate),
        Command::OracleCheck(a) => ("oracle-check", a, commands::oracle_check),
    };
    let outcome = f(&mut args)?;
    let config = serde_json::to_string(&RunConfig {
        command: name,
        args: &args,
    })
    .map_err(|e| CliError::input(e.to_string()))?;
    let text = outcome.table.render(&config);
    output::emit(args.out.as_deref(), &text).map_err(|e| CliError::input(format!("writing output: {e}")))?;
    match outcome.failure {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(()),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("seqchain: {e}");
            e.exit_code()
        }
    }
}

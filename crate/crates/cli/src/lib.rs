//! Command-line harness for `pathent`: coupling sweeps, single-configuration
//! reports, randomized audits and the SWAP counterexample.
//!
//! CSV goes to stdout, diagnostics to stderr. Exit codes: 0 on success, 1 on
//! usage or configuration errors, 2 when an audited property is violated.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod analyze;
pub mod audit;
pub mod config;
pub mod format;
pub mod swap;
pub mod sweep;

use audit::{AuditSpec, RankSpec};
use sweep::SweepSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Config {
        path: String,
        #[source]
        source: config::ConfigError,
    },
    #[error(transparent)]
    Core(#[from] pathent::Error),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("property violation: {0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pathent",
    version,
    about = "Gravitationally induced path entanglement as a quantum channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep θ = κT/(πD) at fixed r = L/D and emit closed-form and pipeline values as CSV
    Sweep(SweepArgs),
    /// Analyze one configuration file (`key = value` lines)
    Analyze {
        config: PathBuf,
        /// Drive the channel with integrated phases instead of the hold-only ones
        #[arg(long)]
        use_numeric_phases: bool,
    },
    /// Check channel inseparability against entanglement generation on random channels
    Audit(AuditArgs),
    /// Show that SWAP is inseparable yet never entangles, and is not population preserving
    SwapDemo {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 50)]
        inputs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub theta_max: f64,
    /// Number of intervals (the grid has steps + 1 points)
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    /// r = L/D, strictly between 0 and 1
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
    #[arg(long)]
    pub use_numeric_phases: bool,
    /// τ/T for the ramp stages (numeric phases only)
    #[arg(long, default_value_t = 1e-3)]
    pub tau_over_t: f64,
}

impl From<&SweepArgs> for SweepSpec {
    fn from(a: &SweepArgs) -> Self {
        SweepSpec {
            theta_min: a.theta_min,
            theta_max: a.theta_max,
            steps: a.steps,
            ratio: a.ratio,
            use_numeric_phases: a.use_numeric_phases,
            tau_over_t: a.tau_over_t,
        }
    }
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub dim_a: usize,
    #[arg(long, default_value_t = 2)]
    pub dim_b: usize,
    /// `all` or a fixed rank of the coefficient matrix
    #[arg(long, default_value = "all")]
    pub rank: RankSpec,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

impl From<&AuditArgs> for AuditSpec {
    fn from(a: &AuditArgs) -> Self {
        AuditSpec {
            samples: a.samples,
            seed: a.seed,
            dim_a: a.dim_a,
            dim_b: a.dim_b,
            rank: a.rank,
            tol: a.tol,
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Sweep(a) => sweep::cmd_sweep(&a.into(), out),
        Command::Analyze {
            config,
            use_numeric_phases,
        } => analyze::cmd_analyze(config, *use_numeric_phases, out, diag),
        Command::Audit(a) => audit::cmd_audit(&a.into(), out, diag),
        Command::SwapDemo { dim, inputs, seed } => swap::cmd_swap_demo(*dim, *inputs, *seed, out),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, diag: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(diag, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, out, diag) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            e.exit_code()
        }
    }
}

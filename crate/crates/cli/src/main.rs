//! Batch driver: instance I/O, generators, experiment orchestration, and
//! tabular output for the probe-commit matching toolkit.

mod commands;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit codes: 2 parse/usage, 3 solver not applicable, 4 column cap.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Inapplicable(String),
    ColumnCap(String),
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Inapplicable(_) => 3,
            CliError::ColumnCap(_) => 4,
            CliError::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Inapplicable(m)
            | CliError::ColumnCap(m)
            | CliError::Other(m) => m,
        }
    }
}

impl From<probematch::lp::LpError> for CliError {
    fn from(e: probematch::lp::LpError) -> Self {
        use probematch::lp::LpError::*;
        match e {
            Inapplicable(m) => CliError::Inapplicable(m),
            TooLarge(m) => CliError::Inapplicable(m),
            ColumnCap { primal, dual_bound } => CliError::ColumnCap(format!(
                "column cap exceeded (best primal {primal}, dual bound {dual_bound})"
            )),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<probematch::schema::SchemaError> for CliError {
    fn from(e: probematch::schema::SchemaError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<probematch::online::OnlineError> for CliError {
    fn from(e: probematch::online::OnlineError) -> Self {
        match e {
            probematch::online::OnlineError::Lp(lp) => lp.into(),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<probematch::oracles::OracleError> for CliError {
    fn from(e: probematch::oracles::OracleError) -> Self {
        match e {
            probematch::oracles::OracleError::BadParams(m) => CliError::Usage(m),
            other => CliError::Inapplicable(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io: {e}"))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LpKind {
    Config,
    ConfigId,
    Std,
    StdUnit,
    Dp,
    Qc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Algorithm {
    KnownGraph,
    KnownId,
    KnownIdOcrs,
    KnownIdRcrs,
    Secretary,
    GreedyDp,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Suite {
    Crs,
    Rounding,
    LpConsistency,
    Benchmarks,
}

#[derive(Parser)]
#[command(name = "probematch", about = "Online stochastic matching in the probe-commit model")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one of the LPs for an instance and print its value.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "config")]
        lp: LpKind,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run an online probing algorithm for many trials and append a row.
    Simulate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        /// "rom", "aom:<comma-separated permutation>", or "aom:worst<k>".
        #[arg(long, default_value = "rom")]
        arrival: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Emit an instance of one of the built-in families as JSON.
    Generate {
        /// er-gap | example-6.2 | random-weighted | iid-types | id-types
        #[arg(long)]
        family: String,
        /// Comma-separated key=value pairs, e.g. "n=2000,p=0.02,s=36".
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a module invariant suite; nonzero exit on failure.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Adaptivity-gap experiment on the uniform unit-patience family.
    Gap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        /// Offline side size; defaults to floor(0.9 * p * n).
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn main() -> ExitCode {
    // die quietly when the consumer of a pipe goes away
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Solve { instance, lp, format } => commands::solve(&instance, lp, format),
        Command::Simulate { instance, algorithm, arrival, trials, seed, out, format } => {
            commands::simulate(&instance, algorithm, &arrival, trials, seed, out.as_deref(), format)
        }
        Command::Generate { family, params, seed, out } => {
            commands::generate(&family, &params, seed, out.as_deref())
        }
        Command::Verify { suite, seed } => verify::run(suite, seed),
        Command::Gap { n, p, s, trials, seed, out, format } => {
            commands::gap(n, p, s, trials, seed, out.as_deref(), format)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

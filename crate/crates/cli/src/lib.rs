//! The `dvrp` command line: argument parsing and dispatch to `dvrp-core`.
//!
//! [`run`] takes the argument vector and explicit streams so the whole interface can be driven
//! from tests. Exit codes: 0 success, 1 infeasible instance, 2 usage or input error, 3 a property
//! suite or solution check found a violation.

mod bench;
mod commands;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use bench::{parse_suite, run_suite_file, Row, SuiteEntry, Table};

/// Environment variable that sets the number of worker threads for component solves.
pub const WORKERS_ENV: &str = "DVRP_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dvrp", version, about = "Distance-constrained vehicle routing on trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximate the minimum number of tours.
    Solve(SolveArgs),
    /// Minimum number of tours when at most `gamma` are allowed.
    Exact(ExactArgs),
    /// Print the component decomposition.
    Decompose(DecomposeArgs),
    /// Run a randomized property suite.
    Verify(VerifyArgs),
    /// Pack rational items online with bounded space.
    Binpack(BinpackArgs),
    /// Emit a member of the tight lower-bound family.
    GenLb(GenLbArgs),
    /// Emit a seeded random instance.
    GenRandom(GenRandomArgs),
    /// Emit the star instance equivalent to a bin packing instance.
    GenFromBinpack(GenFromBinpackArgs),
    /// Run a benchmark suite and print a ratio table.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct InstanceInput {
    /// Instance file; standard input when omitted or `-`.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceInput,
    /// Accuracy as an exact rational, e.g. `1/5`.
    #[arg(long)]
    pub epsilon: String,
    /// Override the per-component tour budget `ceil(1/epsilon^2)`.
    #[arg(long)]
    pub gamma: Option<usize>,
    /// Also print one `tour` line per tour.
    #[arg(long)]
    pub tours: bool,
    /// Write the per-component report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Refuse to run when the state-space estimate exceeds this many states.
    #[arg(long)]
    pub budget: Option<u128>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub instance: InstanceInput,
    #[arg(long)]
    pub gamma: usize,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub instance: InstanceInput,
    #[arg(long, conflicts_with = "epsilon")]
    pub gamma: Option<usize>,
    /// Derive the budget from an accuracy instead; defaults to `1/5`.
    #[arg(long)]
    pub epsilon: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `3.2` (reduced-sum), `3.3` (combine) or `3.4` (component-count).
    #[arg(long)]
    pub lemma: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BinpackArgs {
    /// Item file, one rational per line; standard input when omitted or `-`.
    pub input: Option<PathBuf>,
    /// Number of size classes, which bounds the open bins.
    #[arg(long)]
    pub space: usize,
}

#[derive(Debug, Args)]
pub struct GenLbArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub gamma: u64,
}

#[derive(Debug, Args)]
pub struct GenRandomArgs {
    #[arg(long)]
    pub seed: u64,
    /// Number of terminals.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub max_weight: u64,
    /// Fix `D` at this many halves of the deepest terminal depth (at least 4).
    #[arg(long, conflicts_with = "halves_range")]
    pub halves: Option<u64>,
    /// Draw the number of halves from `LO..HI`, both inclusive.
    #[arg(long, value_name = "LO..HI")]
    pub halves_range: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenFromBinpackArgs {
    #[arg(long)]
    pub capacity: u64,
    /// File of integer item sizes, whitespace separated.
    #[arg(long)]
    pub sizes: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Suite file listing the instances to run.
    pub suite: PathBuf,
    /// Leave out the wall-time column, for reproducible output.
    #[arg(long)]
    pub no_time: bool,
}

/// A command that did not succeed, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Infeasible(String),
    Violation(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Infeasible(_) => EXIT_INFEASIBLE,
            Failure::Violation(_) => EXIT_VIOLATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Infeasible(m) | Failure::Violation(m) => m,
        }
    }
}

impl From<dvrp_core::Error> for Failure {
    fn from(e: dvrp_core::Error) -> Self {
        match e {
            dvrp_core::Error::Infeasible { .. } => Failure::Infeasible(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Streams a command reads from and writes to.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let rendered = e.render().to_string();
            if informational {
                let _ = write!(io.stdout, "{rendered}");
                return EXIT_OK;
            }
            let _ = write!(io.stderr, "{rendered}");
            return EXIT_USAGE;
        }
    };
    match commands::dispatch(cli.command, io) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(io.stderr, "dvrp: {}", f.message());
            f.exit_code()
        }
    }
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
        },
    }
}

//! `sturm`: exact analytics for Sturmian words.
//!
//! Exit codes: 0 = all checks passed, 1 = a verified mathematical
//! identity failed (an implementation bug, never a property of valid
//! input), 2 = input or contract error.

mod commands;
mod report;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use report::OutputFormat;
use source::{Source, SourceArgs};
use sturmian::error::Error;

#[derive(Parser)]
#[command(name = "sturm", version, about = "Exact analytics for Sturmian words")]
struct Cli {
    /// Worker threads for per-length computations (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a word prefix (stdout, or FASTA-like file with --output)
    Generate {
        #[command(flatten)]
        source: SourceArgs,
        /// Prefix length
        #[arg(long)]
        length: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Complexity, special factors, and Rauzy graphs
    Analyze {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "n-max")]
        n_max: usize,
        /// Emit the Rauzy graph at this level in DOT format instead of a table
        #[arg(long)]
        dot: Option<usize>,
        /// List the complete factor set at this length, sorted, one per line
        #[arg(long, conflicts_with = "dot")]
        factors: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Add decimal companion columns for exact rationals
        #[arg(long)]
        approx: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Return words and the recurrence function (brute force vs closed form)
    Returns {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "n-max", default_value_t = 20)]
        n_max: usize,
        /// Show the return words of one factor instead of the R(n) table
        #[arg(long)]
        factor: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        approx: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Factor indices (maximal fractional powers)
    Index {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "n-max", default_value_t = 20)]
        n_max: usize,
        /// Index of one factor instead of the per-length table
        #[arg(long)]
        factor: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        approx: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the recurrence formula, index witnesses, and the index
    /// inequality for every length up to n-max
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "n-max", default_value_t = 30)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        approx: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a maximal-index factor and its power by iterated lifting;
    /// emits the construction trace as JSON
    Construct {
        /// Continued-fraction slope
        #[arg(long)]
        slope: String,
        /// Convergent index N: the factor has length q_N
        #[arg(long = "N")]
        n: usize,
        /// Omit words longer than this many letters from the trace
        #[arg(long, default_value_t = 4096)]
        elide_above: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(jobs) = cli.jobs {
        // ignore failure: the global pool may already exist
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }

    match run(cli.command) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(commands::MathMismatch(msg))) => {
            eprintln!("mathematical mismatch: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> sturmian::error::Result<commands::CommandResult> {
    match command {
        Command::Generate { source, length, output } => {
            let source = Source::parse(&source)?;
            ensure_positive(length, "--length")?;
            commands::cmd_generate(&source, length, &output)?;
            Ok(Ok(()))
        }
        Command::Analyze { source, n_max, dot, factors, format, approx, output } => {
            let source = Source::parse(&source)?;
            ensure_positive(n_max, "--n-max")?;
            commands::cmd_analyze(&source, n_max, dot, factors, format, approx, &output)?;
            Ok(Ok(()))
        }
        Command::Returns { source, n_max, factor, format, approx, output } => {
            let source = Source::parse(&source)?;
            ensure_positive(n_max, "--n-max")?;
            commands::cmd_returns(&source, n_max, &factor, format, approx, &output)
        }
        Command::Index { source, n_max, factor, format, approx, output } => {
            let source = Source::parse(&source)?;
            ensure_positive(n_max, "--n-max")?;
            commands::cmd_index(&source, n_max, &factor, format, approx, &output)?;
            Ok(Ok(()))
        }
        Command::Verify { source, n_max, format, approx, output } => {
            let source = Source::parse(&source)?;
            ensure_positive(n_max, "--n-max")?;
            commands::cmd_verify(&source, n_max, format, approx, &output)
        }
        Command::Construct { slope, n, elide_above, output } => {
            ensure_positive(n, "--N")?;
            commands::cmd_construct(&slope, n, elide_above, &output)?;
            Ok(Ok(()))
        }
    }
}

fn ensure_positive(v: usize, what: &str) -> sturmian::error::Result<()> {
    if v == 0 {
        return Err(Error::InvalidParameter(format!("{what} must be >= 1")));
    }
    Ok(())
}

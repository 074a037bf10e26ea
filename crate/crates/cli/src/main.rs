//! Command-line driver: parse, check, project, amend, run and verify
//! choreographic programs.
//!
//! Exit codes: 0 on success (or a property holding within the bounds), 1 on
//! an ill-formed or unprojectable program, a counterexample, or an
//! inconclusive bounded check, and 2 on usage, I/O or parse errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "choramend",
    version,
    about = "Choreographies, projection and amendment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check well-formedness and projectability.
    Check { file: PathBuf },
    /// Project a program onto one process, or onto all of them.
    Project {
        file: PathBuf,
        #[arg(long)]
        process: Option<String>,
    },
    /// Insert the selections needed to make a program projectable.
    Amend {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Execute a program, exhaustively or along one random schedule.
    Run {
        file: PathBuf,
        #[arg(long)]
        state: Option<PathBuf>,
        /// List every maximal execution.
        #[arg(long, conflicts_with = "seed", required_unless_present = "seed")]
        all: bool,
        /// Follow one schedule chosen by a seeded random generator.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Run a bounded correspondence check.
    Verify {
        check: CheckKind,
        file: PathBuf,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// Check that a program computes the function given by a table.
    Implements {
        file: PathBuf,
        #[arg(long)]
        table: PathBuf,
        /// Comma-separated input processes, one per table column.
        #[arg(long, value_delimiter = ',', required = true)]
        inputs: Vec<String>,
        #[arg(long)]
        output: String,
        #[arg(long, default_value_t = 100)]
        bound: usize,
        /// Check the amended program, or the projection of the amended program.
        #[arg(long, value_enum, default_value_t = Target::Original)]
        target: Target,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Naive,
    AmendComplete,
    AmendSound,
    Intermediate,
    Epp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Original,
    Amended,
    Network,
}

#[derive(Args)]
struct VerifyOpts {
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Extra steps allowed when looking for a matching continuation.
    #[arg(long, default_value_t = 6)]
    bound: usize,
    /// Maximum explored search nodes.
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

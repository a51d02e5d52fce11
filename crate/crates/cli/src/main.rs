//! `qlab`: run, verify and report on the DJ', EQ' and A(n) constructions.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "qlab",
    version,
    about = "Exact quantum query, communication and automaton experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// How measurements are resolved in `run` commands.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Explore)]
    pub mode: Mode,
    /// Seed for `--mode sample`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Run inputs outside the promise; answers there are reported, not checked.
    #[arg(long, global = true)]
    pub allow_nonpromise: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format; defaults to the `--out` extension, else CSV. Other
    /// commands always emit JSON.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub epsilon_norm: Option<f64>,
    #[arg(long, global = true)]
    pub epsilon_unitary: Option<f64>,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Explore,
    Sample,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact two-query algorithm for DJ'.
    #[command(subcommand)]
    Dj(DjCommand),
    /// Exact quantum protocol for EQ' and its classical lower bounds.
    #[command(subcommand)]
    Eq(EqCommand),
    /// The one-way QCFA for A(n) and the reference DFA.
    #[command(subcommand)]
    Qcfa(QcfaCommand),
    /// Run every verifier for each n and emit one row per n.
    Report {
        /// Comma-separated even values of n, each at least 4.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        n_list: Vec<usize>,
    },
}

#[derive(Subcommand)]
pub enum DjCommand {
    Run {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
    },
    /// Check every promise input in explore mode.
    Verify {
        #[arg(long)]
        n: usize,
    },
    /// Optimal deterministic decision-tree depth.
    ClassicalDepth {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
pub enum EqCommand {
    Run {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Check every promise pair and its communication charges.
    Verify {
        #[arg(long)]
        n: usize,
    },
    /// Fooling-set bounds and the derived DFA size bound.
    Bound {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
pub enum QcfaCommand {
    /// Run A(n) on `--word`, or on `x#y##x#y` built from `--x` and `--y`.
    Run {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with_all = ["x", "y"])]
        word: Option<String>,
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
    },
    /// Check every promise word in explore mode.
    Verify {
        #[arg(long)]
        n: usize,
        /// Also check the reference DFA on the same words.
        #[arg(long)]
        against_dfa: bool,
    },
    /// JSON description of the machine's states and transitions.
    Describe {
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dj(cmd) => commands::dj(cmd, &cli.common),
        Command::Eq(cmd) => commands::eq(cmd, &cli.common),
        Command::Qcfa(cmd) => commands::qcfa(cmd, &cli.common),
        Command::Report { n_list } => commands::report(n_list, &cli.common),
    };
    match result {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

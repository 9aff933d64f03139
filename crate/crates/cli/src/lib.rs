//! The `capleaf` command line: solve, check, generate and oracle.
//!
//! Every command prints a report (line-oriented `key: value`, or JSON with
//! `--json`) on stdout and problems on stderr, and maps its outcome to an
//! exit code from [`exit`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod report;

pub use report::{Report, Value};

pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// A hypothesis fails (with a witness), or the instance is infeasible.
    pub const WITNESS: i32 = 2;
    /// Unreadable or malformed input, invalid bounds or parameters, or an
    /// oracle guard was exceeded.
    pub const INPUT: i32 = 3;
    /// The solver broke one of its own invariants.
    pub const INTERNAL: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(
    name = "capleaf",
    version,
    about = "Spanning trees with degree caps and few leaves"
)]
pub struct Cli {
    /// Print the report as a single JSON document.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find a spanning tree within the caps and the leaf budget, or a witness.
    Solve(SolveArgs),
    /// Check the bounds, the degree-sum condition and k-connectivity.
    Check(CheckArgs),
    /// Write a graph file and a bounds file.
    #[command(subcommand)]
    Generate(GenerateKind),
    /// Exhaustive feasibility check for small graphs.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub graph: PathBuf,
    /// Required unless --max-leaves is given.
    pub bounds: Option<PathBuf>,
    /// Refuse to run unless both hypotheses hold.
    #[arg(long)]
    pub strict: bool,
    /// Include every transformation step in the report.
    #[arg(long)]
    pub trace: bool,
    /// Write the graph in DOT format with the tree highlighted.
    #[arg(long, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Ask for at most S leaves instead (k = 1, vertex 0 capped at S).
    #[arg(long = "max-leaves", value_name = "S")]
    pub max_leaves: Option<usize>,
    /// Add wall-clock time to the report (breaks byte-identical output).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub graph: PathBuf,
    pub bounds: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Complete bipartite instance one below the degree-sum threshold.
    Tight {
        /// Defaults to the number of caps in --d.
        #[arg(long)]
        k: Option<usize>,
        /// Ascending caps of the k head vertices, comma separated, each >= 3.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        /// Output prefix; writes PREFIX.graph and PREFIX.bounds.
        #[arg(long)]
        out: PathBuf,
    },
    /// Random k-connected instance meeting the degree-sum condition.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// above-threshold or at-threshold.
        #[arg(long, default_value = "at-threshold")]
        mode: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub graph: PathBuf,
    pub bounds: PathBuf,
}

/// What a run produced: the exit code and both output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn error(code: i32, msg: impl std::fmt::Display) -> Self {
        Output {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Output {
                    code: exit::INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: exit::SUCCESS,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Output {
    let (code, report) = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Check(a) => commands::check(a),
        Command::Generate(kind) => commands::generate(kind),
        Command::Oracle(a) => commands::oracle(a),
    };
    match report {
        Ok(r) => Output {
            code,
            stdout: r.render(cli.json),
            stderr: String::new(),
        },
        Err(msg) => Output::error(code, msg),
    }
}

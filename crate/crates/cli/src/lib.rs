//! Command line front end for `pmodulus-core`.
//!
//! [`run`] parses a command line, executes one subcommand and writes results
//! to `out` and diagnostics to `err`. The binary is a thin wrapper around it.

#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod format;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pmodulus_core::graph::Exponent;

pub use error::CliError;
pub use format::{parse_graph, write_graph, Format, GraphDocument};

/// `pmodulus` command line.
#[derive(Debug, Parser)]
#[command(name = "pmodulus", version, about = "p-modulus of walk families on weighted graphs")]
pub struct Cli {
    /// What to compute.
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mod_p of one walk family at one exponent.
    Modulus(ModulusArgs),
    /// Mod_p over a list of exponents, with monotonicity verdicts.
    Sweep(SweepArgs),
    /// Mod_1, Mod_2 and Mod_inf against max-flow, effective conductance and hop distance.
    Compare(CompareArgs),
    /// Gradient of Mod_p in the edge weights against central differences.
    Gradient(GradientArgs),
}

/// Output encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Pretty-printed JSON object.
    Json,
    /// Comma-separated table with a header row.
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Graph file.
    #[arg(long)]
    pub graph: PathBuf,
    /// Graph encoding; guessed from the file extension when absent.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// First vertex of every walk.
    #[arg(long)]
    pub source: String,
    /// Last vertex of every walk.
    #[arg(long)]
    pub target: String,
    /// Restrict to walks that visit this vertex.
    #[arg(long)]
    pub via: Option<String>,
    /// Relative duality gap at which the solver stops.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Outer iteration cap (default 10 times the edge count).
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Result encoding.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

/// `modulus` flags.
#[derive(Debug, Args)]
pub struct ModulusArgs {
    #[command(flatten)]
    #[allow(missing_docs)]
    pub common: CommonArgs,
    /// Exponent, a number >= 1 or `inf`.
    #[arg(long, value_parser = parse_exponent)]
    pub p: Exponent,
}

/// `sweep` flags.
#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    #[allow(missing_docs)]
    pub common: CommonArgs,
    /// Comma-separated exponents (default 1,1.25,1.5,2,3,4,8,16,32,inf).
    #[arg(long, value_delimiter = ',', value_parser = parse_exponent)]
    pub p_list: Option<Vec<Exponent>>,
}

/// `compare` flags.
#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    #[allow(missing_docs)]
    pub common: CommonArgs,
}

/// `gradient` flags.
#[derive(Debug, Args)]
pub struct GradientArgs {
    #[command(flatten)]
    #[allow(missing_docs)]
    pub common: CommonArgs,
    /// Exponent, strictly between 1 and infinity.
    #[arg(long)]
    pub p: f64,
    /// Finite-difference step relative to each weight.
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse::<Exponent>().map_err(|e| e.to_string())
}

/// Runs one command line and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                error::EXIT_INPUT
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match commands::execute(&cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

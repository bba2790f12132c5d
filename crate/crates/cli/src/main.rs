// `!(x > 0.0)` rejects NaN along with the failing range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! `gmlab`: evaluate the exact laws of the gamma shape moment estimator,
//! check stochastic orders, run Monte Carlo cross-checks, and reproduce the
//! published numbers in one pass.
//!
//! Exit codes: 0 success or order holds, 2 usage error, 3 numerical failure,
//! 4 order violated, 5 a reproduction item failed.

mod commands;
mod config;
mod output;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::CommonArgs;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_VIOLATED: u8 = 4;
pub const EXIT_VERIFY_FAILED: u8 = 5;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(std::io::Error),
}

impl From<gmlab::Error> for CliError {
    fn from(e: gmlab::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Outcome of a successful run that still maps to a nonzero exit.
pub enum Outcome {
    Ok,
    Violated,
    VerifyFailed,
}

#[derive(Debug, Parser)]
#[command(name = "gmlab", version, about = "Exact small-sample laws of the gamma shape moment estimator")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluate a density, CDF or quantile at points or on a grid.
    Eval(commands::EvalArgs),
    /// Check a stochastic order between two laws; exit 4 when violated.
    OrderCheck(commands::OrderArgs),
    /// Simulate a statistic and compare it with its exact law.
    Mc(commands::McArgs),
    /// Recompute every published number and report each item.
    VerifyPaper(CommonArgs),
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Cmd::Eval(a) => commands::eval(a),
        Cmd::OrderCheck(a) => commands::order_check(a),
        Cmd::Mc(a) => commands::mc(a),
        Cmd::VerifyPaper(a) => verify::verify_paper(a),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violated) => ExitCode::from(EXIT_VIOLATED),
        Ok(Outcome::VerifyFailed) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(CliError::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

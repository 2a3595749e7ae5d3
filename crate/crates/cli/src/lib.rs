//! Command-line front end for the `colorcert` toolkit.
//!
//! Every subcommand prints a single JSON record to stdout and optionally
//! writes artifacts with `--out`. Exit codes follow one convention across
//! the binary: 0 when all checks pass (or a definite answer was reached),
//! 1 when an asserted property fails or a budgeted search stays undecided,
//! and 2 for usage, configuration, or input errors.

pub mod commands;
pub mod experiments;

use std::process::ExitCode;

use clap::Parser;

pub fn main_entry() -> ExitCode {
    // Clap itself exits with code 2 on malformed invocations.
    let cli = commands::Cli::parse();
    match commands::dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

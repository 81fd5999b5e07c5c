//! Command-line front end: evaluation of perspectives and means on Matrix
//! JSON inputs, seeded verification suites with CSV reports, and
//! quadrature convergence studies.

pub mod args;
pub mod commands;
pub mod error;
pub mod fnspec;
pub mod matrix_io;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

pub use error::{CliError, CliResult};

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("opmono: {e}");
            e.exit_code()
        }
    }
}

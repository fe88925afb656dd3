//! Command-line front end of the blow-up verification lab.
//!
//! Exit codes: 0 success, 1 tolerance exceeded, 2 configuration or
//! evaluation error (reported as `{"error":{"kind","message"}}` on stderr).

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use config::{RunConfig, Task};
pub use error::CliError;

use args::Cli;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return EXIT_OK;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", CliError::usage(first).to_json());
            return EXIT_CONFIG;
        }
    };
    match dispatch(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_TOLERANCE,
        Err(e) => {
            eprintln!("{}", e.to_json());
            EXIT_CONFIG
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool, CliError> {
    let (cfg, dump) = config::resolve(&cli.command)?;
    if dump {
        commands::dump(&cfg)?;
        return Ok(true);
    }
    commands::execute(&cfg)
}

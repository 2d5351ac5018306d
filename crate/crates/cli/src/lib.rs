//! `schmidt-osc` command-line front end.
//!
//! [`run`] parses an argument vector, dispatches one command and returns the
//! process exit status: 0 on success, 2 for usage or validation errors, 3 for
//! I/O failures and 4 when a numerical consistency check fails.

mod args;
mod commands;
mod output;
mod verify;

use std::ffi::OsString;
use std::fmt;

use clap::Parser;

pub use args::{Cli, Command, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Failure of a single command invocation.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    /// Wraps a core error, attributing validation failures to `flag`.
    pub(crate) fn core(flag: &str, err: schmidt_osc_core::Error) -> Self {
        if err.is_numerical() {
            CliError::Numerical(err.to_string())
        } else {
            CliError::Usage(format!("{flag}: {err}"))
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Io(msg) => write!(f, "I/O error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Runs the tool on `argv` (including the program name) and returns the exit
/// status. Diagnostics go to stderr as a single line.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return EXIT_OK;
            }
            let rendered = err.to_string();
            let line = rendered.lines().next().unwrap_or("error: invalid arguments");
            eprintln!("{line}");
            return EXIT_USAGE;
        }
    };
    match commands::execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("{}", err.to_string().replace('\n', " "));
            err.exit_code()
        }
    }
}

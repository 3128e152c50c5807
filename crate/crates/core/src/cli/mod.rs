//! The `phononic` batch command line.
//!
//! ```text
//! phononic [--output PATH] [--format json|csv] {tensor|slh|memory|pmmi} <verb> [flags]
//! ```
//!
//! Primary results go to `--output` (or stdout). A JSON run manifest with
//! the command, the resolved parameters, the library version and the wall
//! time is written to stderr after every successful run. Exit codes are 0 on
//! success, 2 for invalid input and 1 when a computation fails.

mod args;
mod commands;

use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

pub use args::{Cli, Command, Format};

use crate::error::Error;

/// Exit code for a failed computation.
pub const EXIT_COMPUTATION: i32 = 1;
/// Exit code for rejected input.
pub const EXIT_VALIDATION: i32 = 2;

/// Failure of a command, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Computation(e.to_string())
        }
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Computation(_) => EXIT_COMPUTATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Computation(m) => m,
        }
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: String,
    params: &'a Command,
    output: Option<&'a str>,
    format: Format,
    version: &'static str,
    wall_time_s: f64,
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_VALIDATION
                }
            };
        }
    };
    let start = Instant::now();
    let result = commands::execute(&cli).and_then(|body| emit(&cli, &body, stdout));
    match result {
        Ok(()) => {
            let manifest = RunManifest {
                command: cli.command.name(),
                params: &cli.command,
                output: cli.output.as_deref(),
                format: cli.format,
                version: env!("CARGO_PKG_VERSION"),
                wall_time_s: start.elapsed().as_secs_f64(),
            };
            let _ = writeln!(stderr, "{}", serde_json::to_string(&manifest).unwrap_or_default());
            0
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn emit(cli: &Cli, body: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::Computation(format!("cannot write {path}: {e}"))),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Computation(format!("cannot write output: {e}"))),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

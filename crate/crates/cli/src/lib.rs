//! Command-line driver for the `maboost` crate.
//!
//! [`run`] is the whole program minus process exit, so tests can drive it
//! in-process. Exit codes: 0 success, 1 usage, parse or configuration
//! errors (and failed verification), 2 when the weak learner finds no
//! positive edge on the first round.

// Comparisons like `!(x >= 0.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod bench;
pub mod model;
pub mod trace;
pub mod train;
pub mod verify;

use std::io::{Read, Write};

use clap::Parser;

pub use args::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] maboost::Error),
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(maboost::Error::NoWeakLearnability(_)) => 2,
            _ => 1,
        }
    }
}

/// Parses `argv` (including the program name) and executes the command.
pub fn run(argv: &[String], stdin: impl Read, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli, stdin, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(
    cli: Cli,
    stdin: impl Read,
    out: &mut impl Write,
    err: &mut impl Write,
) -> Result<i32, CliError> {
    match cli.command {
        args::Command::Train(a) => {
            let (summary, _) = train::train(&a)?;
            writeln!(out, "{summary}")?;
            Ok(0)
        }
        args::Command::Verify { trace } => {
            let (header, rounds) = trace::read_trace(&trace)?;
            let Some(header) = header else {
                writeln!(
                    err,
                    "warning: {} is empty; nothing to verify",
                    trace.display()
                )?;
                writeln!(out, "PASS (empty trace)")?;
                return Ok(0);
            };
            if rounds.is_empty() {
                writeln!(
                    err,
                    "warning: {} has no rounds; nothing to verify",
                    trace.display()
                )?;
            }
            let reports = verify::verify(&header, &rounds)?;
            for r in &reports {
                writeln!(out, "{}", r.line())?;
            }
            Ok(if reports.iter().all(verify::FamilyReport::passed) {
                0
            } else {
                1
            })
        }
        args::Command::Project(a) => {
            writeln!(out, "{}", train::project(&a, stdin)?)?;
            Ok(0)
        }
        args::Command::Predict(a) => {
            for y in train::predict(&a)? {
                writeln!(out, "{}", y as i32)?;
            }
            Ok(0)
        }
        args::Command::Bench { criterion } => {
            let results = match criterion {
                Some(name) => vec![bench::run_named(&name)?],
                None => bench::run_all(),
            };
            write!(out, "{}", bench::table(&results))?;
            Ok(if results.iter().all(|c| c.pass) { 0 } else { 1 })
        }
    }
}

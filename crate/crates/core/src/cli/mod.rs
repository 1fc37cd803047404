//! Batch front end behind the `evtkit` binary.
//!
//! [`run`] parses arguments, executes one command and writes its report to
//! `out` (diagnostics to `err`), returning the process exit code.

mod args;
mod commands;
mod input;
mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::error::EvtError;

pub use args::{Cli, Command, Format};
pub use input::{parse_values, KRange};
pub use output::{Cell, Report, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_SELECTION: i32 = 4;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "EVTKIT_THREADS";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Eval(#[from] EvtError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Eval(EvtError::SelectionFailure { .. }) => EXIT_SELECTION,
            CliError::Eval(_) => EXIT_DOMAIN,
        }
    }
}

fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Estimate(a) => commands::estimate(a),
        Command::Port(a) => commands::port(a),
        Command::BootstrapK(a) => commands::bootstrap_k(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Ei(a) => commands::ei(a),
        Command::Converge(a) => commands::converge(a),
        Command::ChooseModel(a) => commands::choose_model(a),
    }
}

fn format_of(command: &Command) -> Format {
    match command {
        Command::Estimate(a) => a.common.format,
        Command::Port(a) => a.common.format,
        Command::BootstrapK(a) => a.common.format,
        Command::Simulate(a) => a.common.format,
        Command::Ei(a) => a.common.format,
        Command::Converge(a) => a.common.format,
        Command::ChooseModel(a) => a.common.format,
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Input(format!(
            "{THREADS_ENV} must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| CliError::Input(format!("cannot start {threads} worker threads: {e}")))
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = thread_pool().and_then(|pool| match pool {
        Some(pool) => pool.install(|| execute(&cli.command)),
        None => execute(&cli.command),
    });
    match result {
        Ok(report) => match report.write(format_of(&cli.command), out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "evtkit: cannot write output: {e}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            let _ = writeln!(err, "evtkit: {e}");
            e.exit_code()
        }
    }
}

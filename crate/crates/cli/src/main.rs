mod args;
mod commands;
mod common;
mod output;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    /// Bad flag values caught after parsing.
    Args(String),
    /// Failure while analysing one input.
    Input { path: String, source: toposcope_core::Error },
    /// Failure that belongs to no single input.
    Core(toposcope_core::Error),
    Io { path: String, source: std::io::Error },
    Output(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn at(path: &Path) -> impl FnOnce(toposcope_core::Error) -> Self + '_ {
        move |source| CliError::Input { path: path.display().to_string(), source }
    }

    fn exit_code(&self) -> u8 {
        let core_code = |e: &toposcope_core::Error| if e.is_input_error() { 2 } else { 3 };
        match self {
            CliError::Args(_) => 4,
            CliError::Input { source, .. } => core_code(source),
            CliError::Core(e) => core_code(e),
            CliError::Io { .. } | CliError::Output(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Args(msg) => write!(f, "invalid arguments: {msg}"),
            CliError::Input { path, source } => write!(f, "{path}: {source}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::Output(msg) => write!(f, "writing output: {msg}"),
        }
    }
}

impl From<toposcope_core::Error> for CliError {
    fn from(e: toposcope_core::Error) -> Self {
        CliError::Core(e)
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), CliError> {
    let threads = match std::env::var("TOPOSCOPE_THREADS") {
        Ok(v) if !v.trim().is_empty() => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Args(format!("TOPOSCOPE_THREADS={v:?} is not a thread count")))?,
        ),
        _ => flag,
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Args("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Args(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Centrality(a) => commands::centrality::run(a),
        Command::Correlate(a) => commands::correlate::run(a),
        Command::Attack(a) => commands::attack::run(a),
        Command::Capacity(a) => commands::capacity::run(a),
        Command::Generate(a) => commands::generate::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("toposcope: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! `shcoh`: reproducible Monte Carlo driver for `coherence-core`.
//!
//! Every subcommand writes CSV and JSON files into `--out`. Results depend only on the resolved
//! [`RunConfig`], never on the worker count.
//!
//! Exit status: `0` clean, `1` property violation, `2` configuration or input error.

pub mod config;
pub mod experiments;
pub mod output;

use clap::Parser;
use std::ffi::OsString;

pub use config::{Cli, Command, ConfigError, RunConfig};
pub use experiments::Outcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("input: {0}")]
    Input(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] coherence_core::Error),
    #[error("{0}")]
    Runtime(String),
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, RunError> {
    match cfg.command {
        Command::ShScan => experiments::sh_scan(cfg),
        Command::Axioms => experiments::axioms(cfg),
        Command::Plane => experiments::plane(cfg),
        Command::Walk => experiments::walk(cfg),
        Command::Eur => experiments::eur(cfg),
        Command::Gil => experiments::gil(cfg),
    }
}

/// Parses `args`, runs the command and maps the result onto the exit-code contract.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::resolve(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("shcoh: {e}");
            return EXIT_CONFIG;
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            if outcome.violations > 0 {
                eprintln!("shcoh: {} property violation(s)", outcome.violations);
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("shcoh: {e}");
            EXIT_CONFIG
        }
    }
}

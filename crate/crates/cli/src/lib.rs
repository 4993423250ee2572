//! Command-line frontend for `rosenmorse-core`: layered configuration, the
//! figure and verification commands, and CSV / JSON output.
// `!(x > 0.0)` style guards are there to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::path::PathBuf;

use clap::Parser;

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;

use commands::Command;
use config::{Format, RunConfig, Settings};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, config values or parameter combinations (exit 2).
    Validation(String),
    /// A computation failed (exit 1).
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "computation failed: {m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<rosenmorse_core::Error> for CliError {
    fn from(e: rosenmorse_core::Error) -> Self {
        use rosenmorse_core::Error as E;
        match e {
            E::InvalidParams(_)
            | E::ExcitationOutOfRange { .. }
            | E::InvalidShiftedParams { .. }
            | E::SeedHasNode(_)
            | E::AddedLevelLadder
            | E::NoBoundedWell(_)
            | E::EndpointEvaluation(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

/// Exit code for a verify command whose checks missed their tolerance.
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rosenmorse", version, about = "Rosen-Morse ladder operators, SUSY partners and coherent states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Flat TOML or JSON file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Settings,
}

/// What a run produced: the rendered document and any tolerance breaches.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub text: String,
    pub breaches: Vec<String>,
    pub config: RunConfig,
}

pub fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    let settings = match &cli.config {
        Some(path) => cli.settings.clone().over(&Settings::load(path)?),
        None => cli.settings.clone(),
    };
    let cfg = RunConfig::resolve(&settings, cli.command.defaults())?;
    let outcome = commands::run(cli.command, &cfg)?;
    let text = match cfg.format {
        Format::Csv => output::to_csv(&outcome.table),
        Format::Json => output::to_json(cli.command.name(), &cfg.settings, &outcome.table),
    };
    let breaches = if cli.command.verifies() { outcome.breaches } else { Vec::new() };
    Ok(Rendered { text, breaches, config: cfg })
}

//! Command-line front end for `hybridgate-core`.
//!
//! A scenario file (see the bundled `paper.cfg`) selects species, fields,
//! pulses, dipoles and noise. Each subcommand writes CSV tables, two-column
//! plot files and, for `paper-repro`, a JSON report into the output
//! directory. [`run`] is the whole program; the binary only forwards
//! `std::env::args` to it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod repro;
pub mod scenario;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use hybridgate_core::hyperfine::BreitRabiMode;

pub use error::CliError;
use output::{OutputDir, VERSION};
use scenario::{Scenario, DEFAULT_CONFIG};

#[derive(Debug, Parser)]
#[command(name = "hybridgate", version, about = "Atom/molecule hybrid phase-gate numerics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Scenario file; the bundled paper.cfg when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, env = "HYBRIDGATE_OUT", default_value = "out")]
    pub out: PathBuf,

    /// Overrides `noise.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Overrides `hyperfine.mode`.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Breit-Rabi levels and the qubit transition over a field grid.
    Levels,
    /// Raman pi pulse, three-level against two-level.
    Pulse,
    /// STIRAP transfer and its dependence on pulse area.
    Stirap,
    /// Gate schedule, phase accumulation and fidelity.
    Gate,
    /// Dephasing, loss and timing budget.
    Budget,
    /// One parameter swept over the `[sweep]` axis.
    Sweep,
    /// JSON report with every reference quantity and its check.
    PaperRepro,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Levels => "levels",
            Command::Pulse => "pulse",
            Command::Stirap => "stirap",
            Command::Gate => "gate",
            Command::Budget => "budget",
            Command::Sweep => "sweep",
            Command::PaperRepro => "paper-repro",
        }
    }
}

pub fn mode_name(mode: BreitRabiMode) -> &'static str {
    match mode {
        BreitRabiMode::Paper => "paper",
        BreitRabiMode::Standard => "standard",
    }
}

/// Loads the scenario named by the flags, with the overrides applied.
pub fn load_scenario(cli: &Cli) -> Result<(Scenario, Vec<u8>), CliError> {
    let text = match &cli.config {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| CliError::config(format!("--config {}: {e}", path.display())))?
        }
        None => DEFAULT_CONFIG.to_string(),
    };
    let mut s = Scenario::from_config_text(&text)?;
    if let Some(seed) = cli.seed {
        s.seed = seed;
        s.noise.seed = seed;
    }
    match cli.mode {
        Some(ModeArg::Paper) => s.mode = BreitRabiMode::Paper,
        Some(ModeArg::Standard) => s.mode = BreitRabiMode::Standard,
        None => {}
    }
    Ok((s, text.into_bytes()))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let (s, config) = load_scenario(cli)?;
    let mut files = OutputDir::create(&cli.out, &config, s.seed, mode_name(s.mode))?;
    match cli.command {
        Command::Levels => commands::levels(&s, &mut files, out)?,
        Command::Pulse => commands::pulse(&s, &mut files, out)?,
        Command::Stirap => commands::stirap(&s, &mut files, out)?,
        Command::Gate => commands::gate(&s, &mut files, out)?,
        Command::Budget => commands::budget(&s, &mut files, out)?,
        Command::Sweep => commands::sweep(&s, &mut files, out)?,
        Command::PaperRepro => {
            let metadata = [
                ("tool", Value::from("hybridgate")),
                ("version", Value::from(VERSION)),
                ("config_sha256", Value::from(output::config_hash(&config))),
                ("seed", Value::from(s.seed)),
                ("mode", Value::from(mode_name(s.mode))),
            ];
            repro::paper_repro(&s, &mut files, &metadata, out)?
        }
    }
    let _ = write!(out, "{}", files.listing());
    Ok(())
}

/// Runs one invocation and returns the process exit code: 0 on success,
/// 1 for usage and configuration errors, 2 for numerical failures.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "hybridgate {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

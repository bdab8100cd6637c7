//! The `sdma` command line front end.
//!
//! Every subcommand is a pure function of its settings and writes CSV with
//! LF line endings. Exit codes: 0 success, 2 usage or validation error,
//! 3 domain infeasibility.

mod commands;
pub mod format;
pub mod settings;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{ArgAction, Parser, ValueEnum};
use thiserror::Error;

pub use settings::Settings;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error::*;
        match e {
            UnboundedCapacity { .. }
            | CapReached { .. }
            | TargetUnreachable { .. }
            | Infeasible(_)
            | DegenerateGeometry(_)
            | DegeneratePattern => CliError::Infeasible(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    /// BER versus users for omni and flat-top antennas.
    Curves,
    /// Largest user count meeting a target BER.
    Capacity,
    /// Chip-level Monte Carlo BER.
    Montecarlo,
    /// Flat-top or null-steered array pattern.
    Beampattern,
    /// Spatial channel assignment from a DOA file.
    Assign,
}

#[derive(Debug, Parser)]
#[command(name = "sdma", version, about = "SDMA vs CDMA capacity analysis", allow_negative_numbers = true)]
pub struct Args {
    pub subcommand: Subcommand,

    /// `key = value` settings file; flags override its entries.
    #[arg(long)]
    pub config: Option<String>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub output: Option<String>,

    #[arg(long)]
    pub spreading_factor: Option<String>,
    #[arg(long)]
    pub users: Option<String>,
    #[arg(long)]
    pub k_from: Option<String>,
    #[arg(long)]
    pub k_to: Option<String>,
    /// Path-loss exponent; repeatable.
    #[arg(long, action = ArgAction::Append)]
    pub path_loss: Vec<String>,
    /// Flat-top directivity in dB.
    #[arg(long)]
    pub directivity_db: Option<String>,
    #[arg(long)]
    pub cochannel_cells: Option<String>,
    #[arg(long)]
    pub reuse_ratio: Option<String>,
    #[arg(long)]
    pub cochannel_load: Option<String>,
    #[arg(long)]
    pub target_ber: Option<String>,
    #[arg(long)]
    pub bits: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// mean_field or geometric.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub elements: Option<String>,
    /// Element spacing in wavelengths.
    #[arg(long)]
    pub spacing: Option<String>,
    #[arg(long)]
    pub desired_deg: Option<String>,
    /// Null direction in degrees; repeatable.
    #[arg(long, action = ArgAction::Append)]
    pub null_deg: Vec<String>,
    #[arg(long)]
    pub pointing_deg: Option<String>,
    /// Use the ideal flat-top antenna.
    #[arg(long)]
    pub flat_top: bool,
    #[arg(long)]
    pub doa_file: Option<String>,
    #[arg(long)]
    pub theta_min_deg: Option<String>,
    /// Antenna to evaluate (omni or flat-top); repeatable.
    #[arg(long, action = ArgAction::Append)]
    pub antenna: Vec<String>,
}

impl Args {
    /// Flags given on the command line, as settings keys.
    pub fn flag_settings(&self) -> Settings {
        let mut pairs: Vec<(&str, String)> = Vec::new();
        let singles = [
            ("output", &self.output),
            ("spreading_factor", &self.spreading_factor),
            ("users", &self.users),
            ("k_from", &self.k_from),
            ("k_to", &self.k_to),
            ("directivity_db", &self.directivity_db),
            ("cochannel_cells", &self.cochannel_cells),
            ("reuse_ratio", &self.reuse_ratio),
            ("cochannel_load", &self.cochannel_load),
            ("target_ber", &self.target_ber),
            ("bits", &self.bits),
            ("seed", &self.seed),
            ("mode", &self.mode),
            ("elements", &self.elements),
            ("spacing", &self.spacing),
            ("desired_deg", &self.desired_deg),
            ("pointing_deg", &self.pointing_deg),
            ("doa_file", &self.doa_file),
            ("theta_min_deg", &self.theta_min_deg),
        ];
        for (key, value) in singles {
            if let Some(v) = value {
                pairs.push((key, v.clone()));
            }
        }
        let lists = [
            ("path_loss", &self.path_loss),
            ("null_deg", &self.null_deg),
            ("antenna", &self.antenna),
        ];
        for (key, values) in lists {
            if !values.is_empty() {
                pairs.push((key, values.join(",")));
            }
        }
        if self.flat_top {
            pairs.push(("flat_top", "true".into()));
        }
        Settings::from_pairs(pairs)
    }
}

/// Parses arguments, merges the config file and returns the settings and
/// subcommand to run.
pub fn resolve<I, T>(argv: I) -> Result<(Subcommand, Settings), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    let base = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config file {path}: {e}")))?;
            Settings::parse_config(&text)?
        }
        None => Settings::default(),
    };
    Ok((args.subcommand, base.overlay(args.flag_settings())))
}

/// Runs a subcommand and returns its CSV output.
pub fn execute(cmd: Subcommand, settings: &Settings) -> Result<String, CliError> {
    match cmd {
        Subcommand::Curves => commands::curves(settings),
        Subcommand::Capacity => commands::capacity(settings),
        Subcommand::Montecarlo => commands::montecarlo(settings),
        Subcommand::Beampattern => commands::beampattern(settings),
        Subcommand::Assign => commands::assign(settings),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    // Clap prints its own messages; help and version are not errors.
    if let Err(e) = Args::try_parse_from(&args) {
        let _ = e.print();
        return if e.use_stderr() { 2 } else { 0 };
    }
    let result = resolve(&args).and_then(|(cmd, settings)| {
        let out = execute(cmd, &settings)?;
        write_output(settings.raw("output"), &out)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_output(path: Option<&str>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) if p != "-" => fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("cannot write {p}: {e}"))),
        _ => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}"))),
    }
}

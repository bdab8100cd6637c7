use std::collections::BTreeSet;
use std::fmt::Write;
use std::fs;

use super::format::fmt6;
use super::{CliError, Settings};
use crate::ber_models::{self, SystemConfig, DEFAULT_REUSE_RATIO};
use crate::beamforming::{self, ArrayGeometry, BeamPattern, DEFAULT_GRID_POINTS};
use crate::link_montecarlo::{self, MonteCarloConfig, SdmaMode};
use crate::scalar_math::{Directivity, Probability};
use crate::sdma_scheduler::{self, UserSet};

const DEFAULT_DIRECTIVITY_DB: f64 = 5.1;
const DEFAULT_K_FROM: u32 = 2;
const DEFAULT_K_TO: u32 = 300;
const DEFAULT_PATH_LOSS: [f64; 4] = [2.0, 3.0, 4.0, 5.0];
/// The curve families are drawn for one interfering co-channel cell.
const DEFAULT_COCHANNEL_CELLS: u32 = 1;
const DEFAULT_THETA_MIN_DEG: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Antenna {
    FlatTop,
    Omni,
}

impl Antenna {
    fn label(self) -> &'static str {
        match self {
            Antenna::FlatTop => "flat-top",
            Antenna::Omni => "omni",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "omni" => Ok(Antenna::Omni),
            "flat-top" | "flat_top" => Ok(Antenna::FlatTop),
            _ => Err(CliError::Usage(format!("unknown antenna '{s}' (expected omni or flat-top)"))),
        }
    }
}

/// Antennas requested, sorted by label. `default` applies when neither
/// `--antenna` nor `--flat-top` is given.
fn antennas(s: &Settings, default: &[Antenna]) -> Result<BTreeSet<Antenna>, CliError> {
    let mut set = BTreeSet::new();
    if let Some(list) = s.list::<String>("antenna")? {
        for a in list {
            set.insert(Antenna::parse(&a)?);
        }
    }
    if s.flag("flat_top")? {
        set.insert(Antenna::FlatTop);
    }
    if set.is_empty() {
        set.extend(default.iter().copied());
    }
    Ok(set)
}

fn flat_top_directivity(s: &Settings) -> Result<Directivity, CliError> {
    Ok(Directivity::from_db(s.get_or("directivity_db", DEFAULT_DIRECTIVITY_DB)?)?)
}

fn directivity_for(antenna: Antenna, s: &Settings) -> Result<Directivity, CliError> {
    match antenna {
        Antenna::Omni => Ok(Directivity::OMNI),
        Antenna::FlatTop => flat_top_directivity(s),
    }
}

/// Model settings shared by `curves` and `capacity`; `users` is a placeholder.
fn system_config(s: &Settings, directivity: Directivity, n: f64) -> Result<SystemConfig, CliError> {
    let cfg = SystemConfig {
        spreading_factor: s.require("spreading_factor")?,
        users: 2,
        directivity,
        path_loss_exponent: n,
        cochannel_cells: s.get_or("cochannel_cells", DEFAULT_COCHANNEL_CELLS)?,
        reuse_distance_ratio: s.get_or("reuse_ratio", DEFAULT_REUSE_RATIO)?,
        cochannel_load: s.get("cochannel_load")?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn path_loss_exponents(s: &Settings) -> Result<Vec<f64>, CliError> {
    let mut ns = s.list::<f64>("path_loss")?.unwrap_or_else(|| DEFAULT_PATH_LOSS.to_vec());
    if ns.is_empty() {
        return Err(CliError::Usage("--path-loss needs at least one value".into()));
    }
    ns.sort_by(f64::total_cmp);
    ns.dedup();
    Ok(ns)
}

pub(super) fn curves(s: &Settings) -> Result<String, CliError> {
    let spreading_factor: u32 = s.require("spreading_factor")?;
    let k_from = s.get_or("k_from", DEFAULT_K_FROM)?;
    let k_to = s.get_or("k_to", DEFAULT_K_TO)?;
    let ns = path_loss_exponents(s)?;
    let antennas = antennas(s, &[Antenna::Omni, Antenna::FlatTop])?;
    if spreading_factor < 1 {
        return Err(CliError::Usage("--spreading-factor must be >= 1".into()));
    }

    let mut out = String::from("antenna,path_loss_exponent,k,ber\n");
    for antenna in antennas {
        let d = directivity_for(antenna, s)?;
        for &n in &ns {
            let cfg = system_config(s, d, n)?;
            let curve = ber_models::sweep_curve(&cfg, k_from, k_to)?;
            for (k, ber) in curve.points {
                writeln!(out, "{},{},{},{}", antenna.label(), fmt6(n), k, fmt6(ber.value())).unwrap();
            }
        }
    }
    Ok(out)
}

pub(super) fn capacity(s: &Settings) -> Result<String, CliError> {
    let target: f64 = s.require("target_ber")?;
    if !(target > 0.0 && target <= 1.0) {
        return Err(CliError::Usage(format!("--target-ber {target} must lie in (0, 1]")));
    }
    let n = match s.list::<f64>("path_loss")? {
        None => ber_models::DEFAULT_PATH_LOSS_EXPONENT,
        Some(v) if v.len() == 1 => v[0],
        Some(_) => return Err(CliError::Usage("capacity takes a single --path-loss".into())),
    };
    let target_p = Probability::new(target)?;

    let mut out = String::from("antenna,target_ber,k_max\n");
    for antenna in antennas(s, &[Antenna::Omni])? {
        let cfg = system_config(s, directivity_for(antenna, s)?, n)?;
        let k_max = ber_models::capacity(target_p, &cfg)?;
        writeln!(out, "{},{},{}", antenna.label(), fmt6(target), k_max).unwrap();
    }
    Ok(out)
}

pub(super) fn montecarlo(s: &Settings) -> Result<String, CliError> {
    let mode: SdmaMode = s.get_or("mode", "mean_field".to_string())?.parse()?;
    let cfg = MonteCarloConfig {
        spreading_factor: s.require("spreading_factor")?,
        users: s.require("users")?,
        directivity: Directivity::from_db(s.get_or("directivity_db", 0.0)?)?,
        mode,
        bits: s.require("bits")?,
        seed: s.require("seed")?,
    };
    let r = link_montecarlo::simulate_sdma(&cfg)?;
    Ok(format!(
        "mode,N,k,D,bits,errors,ber,stderr,seed\n{},{},{},{},{},{},{},{},{}\n",
        cfg.mode,
        cfg.spreading_factor,
        cfg.users,
        fmt6(cfg.directivity.linear()),
        r.bits_simulated,
        r.bit_errors,
        fmt6(r.empirical_ber.value()),
        fmt6(r.standard_error),
        r.seed
    ))
}

pub(super) fn beampattern(s: &Settings) -> Result<String, CliError> {
    let pattern: BeamPattern = if s.flag("flat_top")? {
        let pointing: f64 = s.get_or("pointing_deg", 0.0)?;
        beamforming::flat_top_pattern(flat_top_directivity(s)?, pointing.to_radians())
    } else {
        let elements: usize = s.get("elements")?.ok_or_else(|| {
            CliError::Usage("beampattern needs --flat-top or --elements".into())
        })?;
        let geom = ArrayGeometry::uniform(elements, s.get_or("spacing", 0.5)?)?;
        let desired: f64 = s.get_or("desired_deg", 0.0)?;
        let nulls: Vec<f64> = s
            .list::<f64>("null_deg")?
            .unwrap_or_default()
            .into_iter()
            .map(f64::to_radians)
            .collect();
        let w = beamforming::null_steer(&geom, desired.to_radians(), &nulls)?;
        BeamPattern::from_weights(&w, &geom, DEFAULT_GRID_POINTS)?.normalized()?
    };

    let mut out = String::from("theta_degrees,gain_linear\n");
    for (i, g) in pattern.gains().iter().enumerate() {
        let theta = 360.0 * i as f64 / pattern.len() as f64;
        writeln!(out, "{theta:.1},{}", fmt6(*g)).unwrap();
    }
    Ok(out)
}

/// Reads `user_id,theta_degrees` lines; `#` starts a comment.
pub fn parse_doa_file(text: &str) -> Result<UserSet, CliError> {
    let mut doas = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || CliError::Usage(format!("DOA file line {}: expected 'user_id,theta_degrees', got '{}'", i + 1, raw.trim()));
        let (id, theta) = line.split_once(',').ok_or_else(bad)?;
        let id: u32 = id.trim().parse().map_err(|_| bad())?;
        let theta: f64 = theta.trim().parse().map_err(|_| bad())?;
        if !theta.is_finite() {
            return Err(bad());
        }
        if doas.iter().any(|&(u, _)| u == id) {
            return Err(CliError::Usage(format!("DOA file line {}: duplicate user id {id}", i + 1)));
        }
        doas.push((id, theta.to_radians()));
    }
    Ok(UserSet::new(doas)?)
}

pub(super) fn assign(s: &Settings) -> Result<String, CliError> {
    let path: String = s.require("doa_file")?;
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read DOA file {path}: {e}")))?;
    let users = parse_doa_file(&text)?;
    let theta_min: f64 = s.get_or("theta_min_deg", DEFAULT_THETA_MIN_DEG)?;
    let a = sdma_scheduler::assign_channels(&users, theta_min.to_radians())?;

    let mut out = String::from("user_id,physical_channel,spatial_channel\n");
    for e in a.entries() {
        writeln!(out, "{},{},{}", e.user_id, e.physical_channel, e.spatial_channel).unwrap();
    }
    writeln!(out, "# physical_channels={}", a.physical_channels()).unwrap();
    Ok(out)
}

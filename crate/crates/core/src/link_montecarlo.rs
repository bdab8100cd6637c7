//! Chip-level Monte Carlo of an asynchronous DS-CDMA BPSK uplink under
//! perfect power control and no thermal noise.
//!
//! For every simulated bit the desired user transmits one BPSK symbol spread
//! by a fresh random ±1 sequence of `N` chips. Each of the `k − 1`
//! interferers arrives with a uniform random delay of `τ ∈ [0, N)` chips and
//! a uniform random carrier phase `φ`. Chips are rectangular, so an
//! interferer chip straddles two desired chip intervals; its contribution to
//! desired chip `j` is `cos φ · (f·s[j−m−1] + (1−f)·s[j−m])` with
//! `τ = m + f`, where `s` is the interferer's chip stream spanning its
//! previous and current bit. The receiver decides on the sign of the
//! despread correlator output.
//!
//! Randomness is counter-based: every `(seed, user, bit)` triple keys its
//! own ChaCha8 stream, so results do not depend on how bits are split across
//! threads.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::scalar_math::{Directivity, Probability};
use crate::sdma_scheduler::circular_distance;
use crate::{Error, Result};

const BLOCK_BITS: u64 = 4096;

/// How beam directivity acts on interferers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SdmaMode {
    /// Every interferer amplitude is scaled by `1/sqrt(D)`.
    MeanField,
    /// Each interferer gets a uniform azimuth and counts at full power only
    /// inside the desired user's flat-top beam of width `2π/D`.
    Geometric,
}

impl SdmaMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SdmaMode::MeanField => "mean_field",
            SdmaMode::Geometric => "geometric",
        }
    }
}

impl fmt::Display for SdmaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SdmaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean_field" => Ok(SdmaMode::MeanField),
            "geometric" => Ok(SdmaMode::Geometric),
            other => Err(Error::domain(format!(
                "unknown mode '{other}' (expected mean_field or geometric)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloConfig {
    /// Chips per bit, at least 2.
    pub spreading_factor: u32,
    pub users: u32,
    pub directivity: Directivity,
    pub mode: SdmaMode,
    pub bits: u64,
    pub seed: u64,
}

impl MonteCarloConfig {
    /// Omni configuration for [`simulate_cdma`].
    pub fn cdma(spreading_factor: u32, users: u32, bits: u64, seed: u64) -> Self {
        MonteCarloConfig {
            spreading_factor,
            users,
            directivity: Directivity::OMNI,
            mode: SdmaMode::MeanField,
            bits,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.spreading_factor < 2 {
            return Err(Error::domain("Monte Carlo spreading factor must be >= 2"));
        }
        if self.users < 1 {
            return Err(Error::domain("user count must be >= 1"));
        }
        if self.bits < 1 {
            return Err(Error::domain("bit count must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub bits_simulated: u64,
    pub bit_errors: u64,
    pub empirical_ber: Probability,
    /// `sqrt(p̂(1 − p̂)/bits)`.
    pub standard_error: f64,
    pub seed: u64,
}

impl MonteCarloReport {
    fn new(bits: u64, errors: u64, seed: u64) -> Self {
        let p = errors as f64 / bits as f64;
        MonteCarloReport {
            bits_simulated: bits,
            bit_errors: errors,
            empirical_ber: Probability::new(p).expect("errors never exceed bits"),
            standard_error: (p * (1.0 - p) / bits as f64).sqrt(),
            seed,
        }
    }

    /// `(p̂ − reference) / σ̂`, or `None` when the standard error is zero.
    pub fn z_score(&self, reference: f64) -> Option<f64> {
        (self.standard_error > 0.0)
            .then(|| (self.empirical_ber.value() - reference) / self.standard_error)
    }
}

/// Omni base station. Rejects configurations with `D != 1`.
pub fn simulate_cdma(cfg: &MonteCarloConfig) -> Result<MonteCarloReport> {
    if cfg.directivity != Directivity::OMNI {
        return Err(Error::domain("simulate_cdma requires directivity 1"));
    }
    simulate_sdma(cfg)
}

pub fn simulate_sdma(cfg: &MonteCarloConfig) -> Result<MonteCarloReport> {
    cfg.validate()?;
    let link = Link::new(cfg);
    let blocks = cfg.bits.div_ceil(BLOCK_BITS);
    let errors: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * BLOCK_BITS;
            let end = (start + BLOCK_BITS).min(cfg.bits);
            let mut scratch = Scratch::new(cfg.spreading_factor as usize);
            (start..end).filter(|&bit| link.bit_in_error(bit, &mut scratch)).count() as u64
        })
        .sum();
    Ok(MonteCarloReport::new(cfg.bits, errors, cfg.seed))
}

struct Link {
    chips: usize,
    interferers: u32,
    mode: SdmaMode,
    amplitude: f64,
    half_beam: f64,
    seed: u64,
}

struct Scratch {
    desired: Vec<f64>,
    stream: Vec<f64>,
}

impl Scratch {
    fn new(chips: usize) -> Self {
        Scratch { desired: vec![0.0; chips], stream: vec![0.0; 2 * chips] }
    }
}

impl Link {
    fn new(cfg: &MonteCarloConfig) -> Self {
        let d = cfg.directivity.linear();
        Link {
            chips: cfg.spreading_factor as usize,
            interferers: cfg.users - 1,
            mode: cfg.mode,
            amplitude: match cfg.mode {
                SdmaMode::MeanField => 1.0 / d.sqrt(),
                SdmaMode::Geometric => 1.0,
            },
            half_beam: PI / d,
            seed: cfg.seed,
        }
    }

    fn rng(&self, user: u32, bit: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..12].copy_from_slice(&user.to_le_bytes());
        key[16..24].copy_from_slice(&bit.to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }

    fn bit_in_error(&self, bit: u64, s: &mut Scratch) -> bool {
        let n = self.chips;
        let mut rng = self.rng(0, bit);
        let symbol = if rng.random::<bool>() { 1.0 } else { -1.0 };
        fill_chips(&mut rng, &mut s.desired);

        // Despread desired signal: Σ c_j · (b·c_j) = b·N.
        let mut decision = symbol * n as f64;
        for user in 1..=self.interferers {
            let mut rng = self.rng(user, bit);
            let delay = rng.random::<f64>() * n as f64;
            let phase = rng.random::<f64>() * TAU;
            // s[0..N) is the previous bit, s[N..2N) the current one.
            let (prev, cur) = s.stream.split_at_mut(n);
            fill_chips(&mut rng, prev);
            fill_chips(&mut rng, cur);
            let prev_bit = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let cur_bit = if rng.random::<bool>() { 1.0 } else { -1.0 };
            prev.iter_mut().for_each(|c| *c *= prev_bit);
            cur.iter_mut().for_each(|c| *c *= cur_bit);

            let gain = match self.mode {
                SdmaMode::MeanField => self.amplitude,
                SdmaMode::Geometric => {
                    let azimuth = rng.random::<f64>() * TAU;
                    if circular_distance(azimuth, 0.0) <= self.half_beam {
                        1.0
                    } else {
                        continue;
                    }
                }
            };

            let m = (delay.floor() as usize).min(n - 1);
            let f = delay - m as f64;
            // Stream index of interferer chip l is l + N.
            let correlation: f64 = s
                .desired
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let late = s.stream[j + n - m];
                    let early = s.stream[j + n - m - 1];
                    c * (f * early + (1.0 - f) * late)
                })
                .sum();
            decision += gain * phase.cos() * correlation;
        }
        symbol * decision <= 0.0
    }
}

fn fill_chips(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    for block in out.chunks_mut(64) {
        let word: u64 = rng.random();
        for (i, c) in block.iter_mut().enumerate() {
            *c = if (word >> i) & 1 == 1 { 1.0 } else { -1.0 };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_user_never_errs() {
        let r = simulate_cdma(&MonteCarloConfig::cdma(7, 1, 10_000, 99)).unwrap();
        assert_eq!(r.bit_errors, 0);
        assert_eq!(r.empirical_ber.value(), 0.0);
        assert_eq!(r.standard_error, 0.0);
        assert_eq!(r.z_score(0.0), None);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = MonteCarloConfig::cdma(7, 10, 50_000, 42);
        assert_eq!(simulate_cdma(&cfg).unwrap(), simulate_cdma(&cfg).unwrap());
    }

    #[test]
    fn seeds_change_outcome() {
        let a = simulate_cdma(&MonteCarloConfig::cdma(7, 22, 50_000, 1)).unwrap();
        let b = simulate_cdma(&MonteCarloConfig::cdma(7, 22, 50_000, 2)).unwrap();
        assert_ne!(a.bit_errors, b.bit_errors);
    }

    #[test]
    fn report_invariants() {
        let r = simulate_cdma(&MonteCarloConfig::cdma(7, 22, 20_000, 5)).unwrap();
        let p = r.bit_errors as f64 / r.bits_simulated as f64;
        assert_eq!(r.empirical_ber.value(), p);
        assert_eq!(r.standard_error, (p * (1.0 - p) / 20_000.0).sqrt());
        assert_eq!(r.seed, 5);
    }

    #[test]
    fn partial_block_is_counted() {
        let r = simulate_cdma(&MonteCarloConfig::cdma(7, 22, BLOCK_BITS + 3, 5)).unwrap();
        assert_eq!(r.bits_simulated, BLOCK_BITS + 3);
    }

    #[test]
    fn cdma_rejects_directivity() {
        let mut cfg = MonteCarloConfig::cdma(7, 5, 10, 0);
        cfg.directivity = Directivity::new(2.0).unwrap();
        assert!(simulate_cdma(&cfg).is_err());
        assert!(simulate_sdma(&cfg).is_ok());
    }

    #[test]
    fn config_validation() {
        assert!(simulate_cdma(&MonteCarloConfig::cdma(1, 5, 10, 0)).is_err());
        assert!(simulate_cdma(&MonteCarloConfig::cdma(7, 0, 10, 0)).is_err());
        assert!(simulate_cdma(&MonteCarloConfig::cdma(7, 5, 0, 0)).is_err());
    }

    #[test]
    fn omni_geometric_matches_mean_field_exactly() {
        let mf = MonteCarloConfig::cdma(7, 10, 20_000, 3);
        let geo = MonteCarloConfig { mode: SdmaMode::Geometric, ..mf.clone() };
        assert_eq!(simulate_sdma(&mf).unwrap(), simulate_sdma(&geo).unwrap());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("mean_field".parse::<SdmaMode>().unwrap(), SdmaMode::MeanField);
        assert_eq!("geometric".parse::<SdmaMode>().unwrap(), SdmaMode::Geometric);
        assert!("mean-field".parse::<SdmaMode>().is_err());
    }
}

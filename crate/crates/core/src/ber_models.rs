//! Closed-form average bit error rate of an interference-limited DS-CDMA
//! uplink, with and without base station directivity, and the capacity
//! solver that inverts it.
//!
//! All three models share one code path:
//!
//! ```text
//! P_b = Q( sqrt( 3·D·N / L ) ),   L = (k − 1) + c·k_c·ρ^(−n)
//! ```
//!
//! With one cell (`c = 0`) and an omni antenna (`D = 1`) this is the
//! standard Gaussian approximation `Q(sqrt(3N/(k−1)))`. The co-channel term
//! is a power-law out-of-cell loading: `c` interfering cells at `ρ` cell
//! radii, each carrying `k_c` users, attenuated by the path-loss exponent.
//! `L = 0` (a lone user, no co-channel load) gives `P_b = 0`, since the
//! model has no thermal noise.

use rayon::prelude::*;

use crate::scalar_math::{q_unchecked, Directivity, Probability};
use crate::{Error, Result};

/// Co-channel base station distance over cell radius for a 7-cell cluster.
pub const DEFAULT_REUSE_RATIO: f64 = 4.6;

pub const DEFAULT_PATH_LOSS_EXPONENT: f64 = 4.0;

/// Upper bound on the number of users examined by [`capacity`].
pub const DEFAULT_K_CAP: u32 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Chips per bit, `N >= 1`.
    pub spreading_factor: u32,
    /// Users in the cell of interest including the desired one, `k >= 1`.
    pub users: u32,
    pub directivity: Directivity,
    /// Path-loss exponent `n` in `[2, 6]`.
    pub path_loss_exponent: f64,
    /// Number of interfering co-channel cells `c`.
    pub cochannel_cells: u32,
    /// Co-channel distance over cell radius `ρ`, must exceed 1 when `c > 0`.
    pub reuse_distance_ratio: f64,
    /// Users per co-channel cell. `None` tracks `users`.
    pub cochannel_load: Option<u32>,
}

impl SystemConfig {
    /// A single isolated cell: only intra-cell interference.
    pub fn single_cell(spreading_factor: u32, users: u32, directivity: Directivity) -> Self {
        SystemConfig {
            spreading_factor,
            users,
            directivity,
            path_loss_exponent: DEFAULT_PATH_LOSS_EXPONENT,
            cochannel_cells: 0,
            reuse_distance_ratio: DEFAULT_REUSE_RATIO,
            cochannel_load: None,
        }
    }

    pub fn with_users(&self, users: u32) -> Self {
        SystemConfig { users, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.spreading_factor < 1 {
            return Err(Error::domain("spreading factor must be >= 1"));
        }
        if self.users < 1 {
            return Err(Error::domain("user count must be >= 1"));
        }
        let n = self.path_loss_exponent;
        if !(2.0..=6.0).contains(&n) {
            return Err(Error::domain(format!("path-loss exponent {n} outside [2, 6]")));
        }
        let rho = self.reuse_distance_ratio;
        if !rho.is_finite() || rho <= 0.0 || (self.cochannel_cells > 0 && rho <= 1.0) {
            return Err(Error::domain(format!(
                "reuse distance ratio {rho} must be finite and > 1 when co-channel cells are present"
            )));
        }
        Ok(())
    }

    fn cochannel_users(&self) -> u32 {
        self.cochannel_load.unwrap_or(self.users)
    }

    /// Interference load `L` in units of one in-cell interferer's power.
    fn interference_load(&self) -> f64 {
        let in_cell = f64::from(self.users - 1);
        if self.cochannel_cells == 0 {
            return in_cell;
        }
        let per_cell = f64::from(self.cochannel_users())
            * self.reuse_distance_ratio.powf(-self.path_loss_exponent);
        in_cell + f64::from(self.cochannel_cells) * per_cell
    }
}

fn gaussian_ber(spreading_factor: u32, directivity: Directivity, load: f64) -> f64 {
    if load == 0.0 {
        return 0.0;
    }
    let snr = 3.0 * directivity.linear() * f64::from(spreading_factor) / load;
    q_unchecked(snr.sqrt())
}

fn check_n_k(spreading_factor: u32, users: u32) -> Result<()> {
    if spreading_factor < 1 {
        return Err(Error::domain("spreading factor must be >= 1"));
    }
    if users < 1 {
        return Err(Error::domain("user count must be >= 1"));
    }
    Ok(())
}

/// Omni base station: `Q(sqrt(3N/(k−1)))`, zero for a single user.
pub fn ber_cdma(spreading_factor: u32, users: u32) -> Result<Probability> {
    ber_sdma(spreading_factor, users, Directivity::OMNI)
}

/// Directive base station: `Q(sqrt(3DN/(k−1)))`, zero for a single user.
pub fn ber_sdma(spreading_factor: u32, users: u32, directivity: Directivity) -> Result<Probability> {
    check_n_k(spreading_factor, users)?;
    let load = f64::from(users - 1);
    Probability::new(gaussian_ber(spreading_factor, directivity, load))
}

/// BER including out-of-cell interference from co-channel cells.
///
/// Reduces to [`ber_sdma`] exactly when `cochannel_cells == 0`.
pub fn ber_multicell(cfg: &SystemConfig) -> Result<Probability> {
    cfg.validate()?;
    Probability::new(gaussian_ber(cfg.spreading_factor, cfg.directivity, cfg.interference_load()))
}

/// Largest user count whose BER does not exceed `target`, scanning `k`
/// upward from 1. `cfg.users` is ignored.
pub fn capacity(target: Probability, cfg: &SystemConfig) -> Result<u32> {
    capacity_with_cap(target, cfg, DEFAULT_K_CAP)
}

/// [`capacity`] with an explicit scan cap. Returns [`Error::CapReached`]
/// when `ber(k_cap)` is still within the target.
pub fn capacity_with_cap(target: Probability, cfg: &SystemConfig, k_cap: u32) -> Result<u32> {
    let t = target.value();
    if t <= 0.0 {
        return Err(Error::domain(format!("capacity target {t} must be > 0")));
    }
    if t >= 0.5 {
        return Err(Error::UnboundedCapacity { target: t });
    }
    if k_cap < 1 {
        return Err(Error::domain("k_cap must be >= 1"));
    }
    let base = cfg.with_users(1);
    base.validate()?;

    let ber_at = |k: u32| {
        let c = base.with_users(k);
        gaussian_ber(c.spreading_factor, c.directivity, c.interference_load())
    };

    let first = ber_at(1);
    if first > t {
        return Err(Error::TargetUnreachable { target: t, ber_at_one: first });
    }
    let mut k = 1;
    while k < k_cap {
        if ber_at(k + 1) > t {
            return Ok(k);
        }
        k += 1;
    }
    Err(Error::CapReached { k_cap })
}

/// A BER-versus-users series.
#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub label: String,
    pub points: Vec<(u32, Probability)>,
}

impl BerCurve {
    /// Strictly increasing `k` with non-decreasing BER.
    pub fn is_well_formed(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1.value() <= w[1].1.value())
    }
}

/// One point per `k` in `k_from..=k_to` under [`ber_multicell`].
pub fn sweep_curve(cfg: &SystemConfig, k_from: u32, k_to: u32) -> Result<BerCurve> {
    if k_from < 2 || k_from > k_to {
        return Err(Error::domain(format!(
            "sweep range {k_from}..={k_to} must satisfy 2 <= k_from <= k_to"
        )));
    }
    cfg.with_users(k_from).validate()?;
    let points = (k_from..=k_to)
        .into_par_iter()
        .map(|k| ber_multicell(&cfg.with_users(k)).map(|b| (k, b)))
        .collect::<Result<Vec<_>>>()?;
    let label = format!(
        "N={},D={:.2}dB,n={},c={}",
        cfg.spreading_factor,
        cfg.directivity.db(),
        cfg.path_loss_exponent,
        cfg.cochannel_cells
    );
    Ok(BerCurve { label, points })
}

//! Gaussian tail function, its inverse, and dB conversion.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use libm::erfc;

use crate::{Error, Result};

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::domain(format!("probability {value} outside [0, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Antenna directivity as a linear power ratio (peak gain over the
/// azimuth-average gain). Always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Directivity(f64);

impl Directivity {
    /// Omnidirectional antenna, 0 dB.
    pub const OMNI: Directivity = Directivity(1.0);

    pub fn new(linear: f64) -> Result<Self> {
        if linear.is_finite() && linear >= 1.0 {
            Ok(Directivity(linear))
        } else {
            Err(Error::domain(format!("directivity {linear} must be finite and >= 1")))
        }
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Directivity::new(db_to_linear(db)?)
    }

    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }
}

/// Upper-tail probability of a standard normal variable.
///
/// Evaluated through `erfc`, so the absolute error stays at the level of a
/// few ulps of the result; `Q(x) + Q(-x) == 1` holds to rounding.
pub fn q_function(x: f64) -> Result<Probability> {
    if !x.is_finite() {
        return Err(Error::domain(format!("q_function argument {x} is not finite")));
    }
    Ok(Probability(q_unchecked(x)))
}

pub(crate) fn q_unchecked(x: f64) -> f64 {
    if x >= 0.0 {
        0.5 * erfc(x * FRAC_1_SQRT_2)
    } else {
        1.0 - 0.5 * erfc(-x * FRAC_1_SQRT_2)
    }
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Inverse of [`q_function`]: returns `x` with `Q(x) = p` for `0 < p < 1`.
///
/// Bracketed bisection down to a 1e-3 wide interval, then Newton steps kept
/// inside the bracket until the probability residual is below 1e-12
/// (relative to `p` for small tails).
pub fn q_inverse(p: Probability) -> Result<f64> {
    let p = p.value();
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("q_inverse requires 0 < p < 1, got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }

    // Q(-40) rounds to 1 and Q(40) underflows to 0, so any representable p
    // in (0, 1) is bracketed.
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if q_unchecked(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let tol = 1e-12 * p.min(1.0 - p).min(1.0);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..60 {
        let residual = q_unchecked(x) - p;
        if residual.abs() <= tol {
            break;
        }
        if residual > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let pdf = normal_pdf(x);
        let mut next = x + residual / pdf;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if next == x {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// `10^(g/10)`.
pub fn db_to_linear(g: f64) -> Result<f64> {
    if !g.is_finite() {
        return Err(Error::domain(format!("dB value {g} is not finite")));
    }
    Ok(10f64.powf(g / 10.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn q_at_zero_is_half() {
        assert_eq!(q_function(0.0).unwrap().value(), 0.5);
    }

    #[test]
    fn q_reference_points() {
        assert!((q_function(1.281552).unwrap().value() - 0.100000).abs() < 1e-6);
        assert!((q_function(3.0).unwrap().value() - 1.349898e-3).abs() < 1e-9);
        assert!((q_function(1.0).unwrap().value() - 0.158655253931457).abs() < 1e-12);
    }

    #[test]
    fn q_rejects_non_finite() {
        assert!(q_function(f64::NAN).is_err());
        assert!(q_function(f64::INFINITY).is_err());
    }

    #[test]
    fn q_is_monotone_on_dense_grid() {
        let mut prev = q_function(-6.0).unwrap().value();
        for i in 1..=12_000 {
            let x = -6.0 + i as f64 * 1e-3;
            let q = q_function(x).unwrap().value();
            assert!(q < prev, "not decreasing at {x}");
            prev = q;
        }
    }

    #[test]
    fn q_symmetry() {
        for i in 0..=600 {
            let x = i as f64 * 0.01;
            let s = q_function(x).unwrap().value() + q_function(-x).unwrap().value();
            assert!((s - 1.0).abs() <= 1e-12, "x = {x}");
        }
    }

    #[test]
    fn q_inverse_reference_points() {
        assert_eq!(q_inverse(p(0.5)).unwrap(), 0.0);
        assert!((q_inverse(p(0.1)).unwrap() - 1.281552).abs() < 1e-5);
        assert!((q_inverse(p(1.349898e-3)).unwrap() - 3.0).abs() < 1e-5);
        assert!((q_inverse(p(0.9)).unwrap() + 1.281552).abs() < 1e-5);
    }

    #[test]
    fn q_inverse_domain() {
        assert!(q_inverse(p(0.0)).is_err());
        assert!(q_inverse(p(1.0)).is_err());
    }

    #[test]
    fn q_inverse_extreme_tails() {
        for &v in &[1e-300, 1e-100, 1e-20, 1e-12] {
            let x = q_inverse(p(v)).unwrap();
            let back = q_function(x).unwrap().value();
            assert!(((back - v) / v).abs() < 1e-10, "p = {v}, back = {back}");
        }
    }

    #[test]
    fn db_conversions() {
        assert_eq!(db_to_linear(0.0).unwrap(), 1.0);
        assert_eq!(db_to_linear(10.0).unwrap(), 10.0);
        assert!((db_to_linear(5.1).unwrap() - 3.23594).abs() < 1e-5);
        assert!(db_to_linear(f64::NAN).is_err());
    }

    #[test]
    fn directivity_bounds() {
        assert!(Directivity::new(0.99).is_err());
        assert!(Directivity::new(f64::INFINITY).is_err());
        assert!(Directivity::from_db(-1.0).is_err());
        let d = Directivity::from_db(5.1).unwrap();
        assert!((d.db() - 5.1).abs() < 1e-12);
    }

    #[test]
    fn probability_bounds() {
        assert!(Probability::new(-0.1).is_err());
        assert!(Probability::new(1.1).is_err());
        assert!(Probability::new(f64::NAN).is_err());
    }
}

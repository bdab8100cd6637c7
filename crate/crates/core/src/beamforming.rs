//! Adaptive linear array: steering vectors, the weighted combiner
//! `y = Σ conj(w_i)·x_i`, beam patterns, azimuth directivity, null steering
//! and the ideal flat-top beam.
//!
//! Angles are azimuths in radians. Azimuth 0 is array broadside and element
//! `i` at position `p_i` (in wavelengths) sees phase `exp(+j·2π·p_i·sin θ)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::scalar_math::Directivity;
use crate::sdma_scheduler::circular_distance;
use crate::{Error, Result};

/// Azimuth samples used for patterns and directivity unless stated otherwise.
pub const DEFAULT_GRID_POINTS: usize = 3600;

pub const MIN_GRID_POINTS: usize = 360;

/// Minimum circular separation between the desired direction and any null.
pub const MIN_NULL_SEPARATION: f64 = PI / 180.0;

/// Element positions along a line, in wavelengths.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    positions: Vec<f64>,
}

impl ArrayGeometry {
    pub fn new(positions: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::domain("array needs at least one element"));
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("element positions must be finite"));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("element positions must be strictly increasing"));
        }
        Ok(ArrayGeometry { positions })
    }

    /// `elements` elements spaced `spacing` wavelengths apart, starting at 0.
    pub fn uniform(elements: usize, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::domain(format!("element spacing {spacing} must be > 0")));
        }
        ArrayGeometry::new((0..elements).map(|i| i as f64 * spacing).collect())
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Complex combiner weights, one per element. Never all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<Complex64>,
}

impl WeightVector {
    pub fn new(weights: Vec<Complex64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().all(|w| w.norm_sqr() == 0.0) {
            return Err(Error::domain("weight vector must have a nonzero entry"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::domain("weights must be finite"));
        }
        Ok(WeightVector { weights })
    }

    /// Conventional beamformer `a(θ)/M`: unit response toward `theta`.
    pub fn matched(geom: &ArrayGeometry, theta: f64) -> Self {
        let m = geom.len() as f64;
        WeightVector {
            weights: steering_vector(geom, theta).into_iter().map(|a| a / m).collect(),
        }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        WeightVector::new(self.weights.iter().map(|w| w * c).collect())
    }

    pub fn norm(&self) -> f64 {
        self.weights.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt()
    }
}

pub fn steering_vector(geom: &ArrayGeometry, theta: f64) -> Vec<Complex64> {
    let s = theta.sin();
    geom.positions
        .iter()
        .map(|&p| Complex64::from_polar(1.0, TAU * p * s))
        .collect()
}

/// `y = Σ conj(w_i)·x_i`.
pub fn beamformer_output(w: &WeightVector, x: &[Complex64]) -> Result<Complex64> {
    if w.len() != x.len() {
        return Err(Error::LengthMismatch { expected: w.len(), got: x.len() });
    }
    Ok(inner(&w.weights, x))
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(a, b)| a.conj() * b).sum()
}

/// Power response `|w^H a(θ)|²`.
pub fn pattern_gain(w: &WeightVector, geom: &ArrayGeometry, theta: f64) -> Result<f64> {
    Ok(beamformer_output(w, &steering_vector(geom, theta))?.norm_sqr())
}

/// Peak over mean of the power pattern on the default azimuth grid.
pub fn directivity(w: &WeightVector, geom: &ArrayGeometry) -> Result<Directivity> {
    directivity_on_grid(w, geom, DEFAULT_GRID_POINTS)
}

pub fn directivity_on_grid(w: &WeightVector, geom: &ArrayGeometry, points: usize) -> Result<Directivity> {
    BeamPattern::from_weights(w, geom, points)?.directivity()
}

fn azimuth_grid(points: usize) -> Result<Vec<f64>> {
    if points < MIN_GRID_POINTS {
        return Err(Error::domain(format!(
            "azimuth grid needs at least {MIN_GRID_POINTS} points, got {points}"
        )));
    }
    Ok((0..points).map(|i| TAU * i as f64 / points as f64).collect())
}

/// Power gain sampled on a uniform azimuth grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamPattern {
    azimuth: Vec<f64>,
    gains: Vec<f64>,
}

impl BeamPattern {
    /// Raw (unnormalized) power pattern of an array.
    pub fn from_weights(w: &WeightVector, geom: &ArrayGeometry, points: usize) -> Result<Self> {
        if w.len() != geom.len() {
            return Err(Error::LengthMismatch { expected: geom.len(), got: w.len() });
        }
        let azimuth = azimuth_grid(points)?;
        let gains = azimuth
            .iter()
            .map(|&t| inner(&w.weights, &steering_vector(geom, t)).norm_sqr())
            .collect();
        Ok(BeamPattern { azimuth, gains })
    }

    pub fn azimuth(&self) -> &[f64] {
        &self.azimuth
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    /// Azimuth-average gain. The grid is uniform and periodic, so the plain
    /// sample mean is the trapezoid rule.
    pub fn mean_gain(&self) -> f64 {
        self.gains.iter().sum::<f64>() / self.gains.len() as f64
    }

    pub fn peak_gain(&self) -> f64 {
        self.gains.iter().copied().fold(0.0, f64::max)
    }

    /// Rescaled to unit azimuth-mean gain.
    pub fn normalized(&self) -> Result<Self> {
        let mean = self.mean_gain();
        if !(mean > 0.0) {
            return Err(Error::DegeneratePattern);
        }
        Ok(BeamPattern {
            azimuth: self.azimuth.clone(),
            gains: self.gains.iter().map(|g| g / mean).collect(),
        })
    }

    pub fn directivity(&self) -> Result<Directivity> {
        let mean = self.mean_gain();
        if !(mean > 0.0) {
            return Err(Error::DegeneratePattern);
        }
        // The peak of a sampled pattern can never be below its mean; clamp
        // rounding for the isotropic case.
        Directivity::new((self.peak_gain() / mean).max(1.0))
    }
}

/// Weights with unit response toward `desired` and exact nulls toward each
/// interferer.
///
/// The desired steering vector is projected onto the orthogonal complement
/// of the interferer steering vectors (modified Gram-Schmidt, two passes)
/// and scaled so that `w^H a(desired) = 1`. With no interferers this is the
/// matched filter `a(desired)/M`.
pub fn null_steer(geom: &ArrayGeometry, desired: f64, interferers: &[f64]) -> Result<WeightVector> {
    let m = geom.len();
    if interferers.len() > m.saturating_sub(1) {
        return Err(Error::Infeasible(format!(
            "{} nulls requested but a {m}-element array supports at most {}",
            interferers.len(),
            m.saturating_sub(1)
        )));
    }
    if let Some(&bad) = interferers
        .iter()
        .find(|&&t| circular_distance(t, desired) < MIN_NULL_SEPARATION)
    {
        return Err(Error::DegenerateGeometry(format!(
            "null at {:.4} deg is within 1 deg of the desired direction {:.4} deg",
            bad.to_degrees(),
            desired.to_degrees()
        )));
    }

    let scale = (m as f64).sqrt();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(interferers.len());
    for &t in interferers {
        let mut v = steering_vector(geom, t);
        for _ in 0..2 {
            project_out(&mut v, &basis);
        }
        let norm = norm(&v);
        // Dependent on earlier constraints (repeated angle or a grating/mirror
        // image): already nulled.
        if norm <= 1e-10 * scale {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }

    let a = steering_vector(geom, desired);
    let mut w = a.clone();
    for _ in 0..2 {
        project_out(&mut w, &basis);
    }
    let response = inner(&w, &a).re;
    if !(response > 1e-12 * m as f64) {
        return Err(Error::DegenerateGeometry(
            "desired direction lies in the span of the null directions".into(),
        ));
    }
    w.iter_mut().for_each(|x| *x /= response);
    WeightVector::new(w)
}

fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for q in basis {
        let c = inner(q, v);
        v.iter_mut().zip(q).for_each(|(x, q)| *x -= c * q);
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Point gain of the ideal flat-top beam: `D` within `π/D` of `pointing`
/// (inclusive), 0 elsewhere.
pub fn flat_top_gain(d: Directivity, pointing: f64, theta: f64) -> f64 {
    if circular_distance(theta, pointing) <= PI / d.linear() {
        d.linear()
    } else {
        0.0
    }
}

/// Ideal flat-top beam on the default grid.
///
/// Each sample is the beam gain averaged over its grid cell, so cells fully
/// inside the beam read `D`, cells outside read 0, and the two edge cells
/// carry their covered fraction. This keeps the azimuth mean at exactly 1
/// for any `D`, which point sampling would not.
pub fn flat_top_pattern(d: Directivity, pointing: f64) -> BeamPattern {
    flat_top_pattern_on_grid(d, pointing, DEFAULT_GRID_POINTS)
        .expect("default grid is large enough")
}

pub fn flat_top_pattern_on_grid(d: Directivity, pointing: f64, points: usize) -> Result<BeamPattern> {
    let azimuth = azimuth_grid(points)?;
    let cell = TAU / points as f64;
    let half_width = PI / d.linear();
    let gains = azimuth
        .iter()
        .map(|&t| {
            let centre = circular_distance(t, pointing);
            let (lo, hi) = (centre - cell / 2.0, centre + cell / 2.0);
            let covered: f64 = [-TAU, 0.0, TAU]
                .iter()
                .map(|shift| overlap(lo, hi, shift - half_width, shift + half_width))
                .sum();
            d.linear() * (covered / cell).min(1.0)
        })
        .collect();
    Ok(BeamPattern { azimuth, gains })
}

fn overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

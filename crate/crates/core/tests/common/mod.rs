//! Independent reference implementations used only by the test suites.
//! None of these call into the code path they check.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sdma_core::beamforming::ArrayGeometry;

fn normal_pdf(t: f64) -> f64 {
    (-0.5 * t * t).exp() / TAU.sqrt()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Gaussian tail by quadrature of the density. Splits the range in unit
/// panels so the adaptive rule never sees a nearly flat interval first.
pub fn q_oracle(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - q_oracle(-x);
    }
    let upper = x + 40.0;
    let mut total = 0.0;
    let mut a = x;
    while a < upper {
        let b = (a + 1.0).min(upper);
        total += integrate(&normal_pdf, a, b, 1e-14);
        a = b;
    }
    total
}

/// Bisection over the quadrature tail.
pub fn q_inverse_oracle(p: f64) -> f64 {
    let (mut lo, mut hi) = (-10.0, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if q_oracle(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `Q(sqrt(3·D·N/load))` through the quadrature oracle.
pub fn gaussian_ber_oracle(n: f64, d: f64, load: f64) -> f64 {
    if load == 0.0 {
        0.0
    } else {
        q_oracle((3.0 * d * n / load).sqrt())
    }
}

/// Capacity by linear scan over `k` with the quadrature tail.
pub fn capacity_scan_oracle(target: f64, n: f64, d: f64) -> u32 {
    let mut k = 1u32;
    loop {
        if gaussian_ber_oracle(n, d, k as f64) > target {
            return k;
        }
        k += 1;
    }
}

/// Power pattern of weights `w` on a line array, evaluated from scratch.
pub fn array_gain(w: &[Complex64], positions: &[f64], theta: f64) -> f64 {
    let s = theta.sin();
    let y: Complex64 = w
        .iter()
        .zip(positions)
        .map(|(w, p)| w.conj() * Complex64::from_polar(1.0, TAU * p * s))
        .sum();
    y.norm_sqr()
}

/// Peak over mean on a fine uniform grid.
pub fn directivity_fine_grid(w: &[Complex64], positions: &[f64], points: usize) -> f64 {
    let gains: Vec<f64> = (0..points)
        .map(|i| array_gain(w, positions, TAU * i as f64 / points as f64))
        .collect();
    let mean = gains.iter().sum::<f64>() / points as f64;
    gains.iter().copied().fold(0.0, f64::max) / mean
}

fn circ(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % TAU;
    d.min(TAU - d)
}

/// Minimum number of groups with pairwise separation `>= theta_min`, by
/// exhaustive search over set partitions (restricted growth strings with a
/// bound on the current best).
pub fn min_partition(angles: &[f64], theta_min: f64) -> usize {
    fn go(i: usize, angles: &[f64], theta_min: f64, groups: &mut Vec<Vec<f64>>, best: &mut usize) {
        if groups.len() >= *best {
            return;
        }
        if i == angles.len() {
            *best = groups.len();
            return;
        }
        let a = angles[i];
        for g in 0..groups.len() {
            if groups[g].iter().all(|&b| circ(a, b) >= theta_min) {
                groups[g].push(a);
                go(i + 1, angles, theta_min, groups, best);
                groups[g].pop();
            }
        }
        groups.push(vec![a]);
        go(i + 1, angles, theta_min, groups, best);
        groups.pop();
    }
    if angles.is_empty() {
        return 0;
    }
    let mut best = angles.len() + 1;
    go(0, angles, theta_min, &mut Vec::new(), &mut best);
    best
}

pub fn deg(v: f64) -> f64 {
    v * PI / 180.0
}

/// Random instance with every direction pair separated by at least 0.03 in
/// `sin θ`, so no two steering vectors coincide (mirror images included).
pub fn feasible_null_instance(rng: &mut ChaCha8Rng) -> (ArrayGeometry, f64, Vec<f64>) {
    let m = rng.random_range(2..=8usize);
    let mut p = vec![0.0];
    for _ in 1..m {
        p.push(p.last().unwrap() + rng.random_range(0.25..0.5));
    }
    let nulls = rng.random_range(1..m);
    let mut slots: Vec<usize> = (0..38).collect();
    for i in (1..slots.len()).rev() {
        slots.swap(i, rng.random_range(0..=i));
    }
    let angles: Vec<f64> = slots[..=nulls]
        .iter()
        .map(|&s| {
            let u = -0.925 + 0.05 * s as f64 + rng.random_range(-0.01..0.01);
            let t = u.asin();
            if rng.random::<bool>() { PI - t } else { t.rem_euclid(TAU) }
        })
        .collect();
    (ArrayGeometry::new(p).unwrap(), angles[0], angles[1..].to_vec())
}

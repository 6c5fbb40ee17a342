//! Shared fixtures and brute-force references for the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` standard-normal points in `dim` dimensions.
pub fn gaussian_blob(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| (0..dim).map(|_| r.sample::<f64, _>(StandardNormal)).collect())
        .collect()
}

/// `side x side` grid over `[-half, half]^2`.
pub fn grid(side: usize, half: f64) -> Vec<Vec<f64>> {
    let step = 2.0 * half / (side - 1) as f64;
    let mut out = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            out.push(vec![-half + i as f64 * step, -half + j as f64 * step]);
        }
    }
    out
}

pub fn unit_circle(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// Uniform points in the unit disk by rejection.
pub fn uniform_disk(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: f64 = r.gen_range(-1.0..1.0);
        let y: f64 = r.gen_range(-1.0..1.0);
        if x * x + y * y <= 1.0 {
            out.push(vec![x, y]);
        }
    }
    out
}

/// Direct O(N^2) DFT magnitudes of the zero-padded signal, first N/2 bins.
pub fn naive_dft_magnitude(signal: &[f64]) -> Vec<f64> {
    let n = signal.len().next_power_of_two();
    (0..n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, x) in signal.iter().enumerate() {
                let angle = -std::f64::consts::TAU * (k * t % n) as f64 / n as f64;
                re += x * angle.cos();
                im += x * angle.sin();
            }
            (re * re + im * im).sqrt()
        })
        .collect()
}

/// Median by counting ranks, without sorting.
pub fn brute_median(values: &[f64]) -> f64 {
    let n = values.len();
    let kth = |k: usize| -> f64 {
        *values
            .iter()
            .find(|&&v| {
                let below = values.iter().filter(|&&u| u < v).count();
                let at_most = values.iter().filter(|&&u| u <= v).count();
                below <= k && k < at_most
            })
            .unwrap()
    };
    if n % 2 == 1 {
        kth(n / 2)
    } else {
        0.5 * (kth(n / 2 - 1) + kth(n / 2))
    }
}

/// sum_i sum_j a_i a_j K(x_i, x_j) evaluated from raw points.
pub fn brute_dual_objective(alpha: &[f64], points: &[Vec<f64>], sigma: f64) -> f64 {
    let mut quad = 0.0;
    for i in 0..points.len() {
        for j in 0..points.len() {
            let d: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b).powi(2)).sum();
            quad += alpha[i] * alpha[j] * (-d / (2.0 * sigma * sigma)).exp();
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

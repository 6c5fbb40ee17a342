//! Reference solver for the one-class dual, used to validate the SGD trainer.
//!
//! Projected gradient ascent with step `1/L`, `L` the largest eigenvalue of
//! the Gram matrix. Projection onto box ∩ simplex is done by Dykstra's
//! alternating projections and shares no code with the trainer's projection.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::kernel::KernelMatrix;
use crate::ocsvm::{box_cap, AlphaVector};

pub const STEP_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200_000;

const DYKSTRA_TOLERANCE: f64 = 1e-15;
const DYKSTRA_MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    pub alpha: AlphaVector,
    pub iterations: usize,
}

pub fn largest_eigenvalue(kernel: &KernelMatrix) -> f64 {
    let n = kernel.n();
    let m = DMatrix::from_fn(n, n, |i, j| kernel.get(i, j));
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Maximizes the dual under both the box and the unit-sum constraint.
pub fn solve_dual_reference(kernel: &KernelMatrix, nu: f64) -> Result<ReferenceSolution> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::InvalidParameter(format!("nu must lie in (0, 1), got {nu}")));
    }
    let n = kernel.n();
    let cap = box_cap(n, nu);
    let lipschitz = largest_eigenvalue(kernel);
    if !(lipschitz > 0.0) {
        return Err(Error::Degenerate("kernel matrix has no positive eigenvalue".into()));
    }
    let step = 1.0 / lipschitz;
    let mut alpha = vec![1.0 / n as f64; n];
    let mut last_step = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let mut next: Vec<f64> = (0..n)
            .map(|k| {
                let grad: f64 = 1.0 - (0..n).map(|i| alpha[i] * kernel.get(i, k)).sum::<f64>();
                alpha[k] + step * grad
            })
            .collect();
        dykstra_project(&mut next, cap);
        last_step = alpha
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        alpha = next;
        if last_step <= STEP_TOLERANCE {
            return Ok(ReferenceSolution {
                alpha: AlphaVector::new(alpha),
                iterations: it,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: MAX_ITERATIONS,
        last_step,
    })
}

/// Dykstra's alternating projection onto `[0, cap]^n` and `{sum = 1}`.
pub fn dykstra_project(y: &mut [f64], cap: f64) {
    let n = y.len();
    let mut x = y.to_vec();
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n];
    let mut boxed = vec![0.0; n];
    for _ in 0..DYKSTRA_MAX_ITERATIONS {
        for i in 0..n {
            boxed[i] = (x[i] + p[i]).clamp(0.0, cap);
            p[i] = x[i] + p[i] - boxed[i];
        }
        let shifted: Vec<f64> = boxed.iter().zip(&q).map(|(b, q)| b + q).collect();
        let shift = (1.0 - shifted.iter().sum::<f64>()) / n as f64;
        let mut change = 0.0f64;
        for i in 0..n {
            let nx = shifted[i] + shift;
            q[i] = shifted[i] - nx;
            change = change.max((nx - x[i]).abs());
            x[i] = nx;
        }
        let gap = x.iter().zip(&boxed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if change <= DYKSTRA_TOLERANCE && gap <= DYKSTRA_TOLERANCE {
            break;
        }
    }
    // land inside the box; the sum moves by at most n * gap
    for (out, v) in y.iter_mut().zip(&x) {
        *out = v.clamp(0.0, cap);
    }
}

/// Norm of the projected-gradient residual `a - P(a + grad J(a))`, zero
/// exactly at a constrained optimum.
pub fn kkt_residual(alpha: &AlphaVector, kernel: &KernelMatrix, nu: f64) -> f64 {
    let n = kernel.n();
    let a = alpha.as_slice();
    let mut moved: Vec<f64> = (0..n)
        .map(|k| a[k] + 1.0 - (0..n).map(|i| a[i] * kernel.get(i, k)).sum::<f64>())
        .collect();
    dykstra_project(&mut moved, box_cap(n, nu));
    a.iter()
        .zip(&moved)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

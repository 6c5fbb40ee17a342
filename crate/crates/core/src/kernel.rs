//! Gaussian kernel evaluation and dense Gram matrices.
//!
//! The kernel is `k(x, y) = exp(-||x - y||^2 / (2 sigma^2))`, so `sigma` is a
//! length scale in feature-space units.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

/// Gaussian kernel bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    sigma: f64,
}

impl KernelConfig {
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma.is_finite() && sigma > 0.0 {
            Ok(Self { sigma })
        } else {
            Err(Error::InvalidParameter(format!(
                "kernel sigma must be positive and finite, got {sigma}"
            )))
        }
    }

    /// Bandwidth chosen by the median heuristic over `samples`.
    pub fn from_median(samples: &[Vec<f64>]) -> Result<Self> {
        Self::new(median_sigma(samples)?)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Kernel value for a precomputed squared distance.
    #[inline]
    pub fn eval_sq_dist(&self, sq_dist: f64) -> f64 {
        (-sq_dist / (2.0 * self.sigma * self.sigma)).exp()
    }
}

pub(crate) fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Evaluates the Gaussian kernel between two feature vectors.
pub fn gaussian_kernel(x: &[f64], y: &[f64], cfg: &KernelConfig) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::EmptyInput("feature vector"));
    }
    check_len(x.len(), y.len())?;
    Ok(cfg.eval_sq_dist(sq_dist(x, y)))
}

/// Median heuristic: `sqrt(median pairwise squared distance / 2)`.
///
/// For an even number of pairs the median is the mean of the two middle
/// values.
pub fn median_sigma(samples: &[Vec<f64>]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::Degenerate(
            "median heuristic needs at least two samples".into(),
        ));
    }
    let dim = samples[0].len();
    let mut dists = Vec::with_capacity(samples.len() * (samples.len() - 1) / 2);
    for (i, x) in samples.iter().enumerate() {
        check_len(dim, x.len())?;
        for y in &samples[i + 1..] {
            dists.push(sq_dist(x, y));
        }
    }
    let median = median(&mut dists);
    if !(median > 0.0) {
        return Err(Error::Degenerate(
            "median pairwise distance is zero; samples are (mostly) identical".into(),
        ));
    }
    Ok((median / 2.0).sqrt())
}

/// Median of a non-empty slice; sorts in place.
pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

/// How each client picks its kernel bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    Fixed(f64),
    /// Median heuristic over the client's own training samples.
    MedianHeuristic,
}

impl Bandwidth {
    pub fn resolve(&self, samples: &[Vec<f64>]) -> Result<KernelConfig> {
        match *self {
            Bandwidth::Fixed(sigma) => KernelConfig::new(sigma),
            Bandwidth::MedianHeuristic => KernelConfig::from_median(samples),
        }
    }
}

/// Dense symmetric Gram matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl KernelMatrix {
    /// Builds a matrix from row-major entries. Used for hand-made test
    /// matrices; symmetry is checked but the Gaussian invariants are not.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyInput("kernel matrix"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            check_len(n, row.len())?;
            entries.extend_from_slice(row);
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "kernel matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// `K v`; equals `v K` by symmetry.
    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, v.len())?;
        Ok((0..self.n).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn max_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram matrix of `samples` under `cfg`. The upper triangle is computed and
/// mirrored, so the result is exactly symmetric with a unit diagonal.
pub fn kernel_matrix(samples: &[Vec<f64>], cfg: &KernelConfig) -> Result<KernelMatrix> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::EmptyInput("sample matrix"));
    }
    let dim = samples[0].len();
    if dim == 0 {
        return Err(Error::EmptyInput("feature vector"));
    }
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        check_len(dim, samples[i].len())?;
        entries[i * n + i] = 1.0;
        for j in i + 1..n {
            let v = cfg.eval_sq_dist(sq_dist(&samples[i], &samples[j]));
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    Ok(KernelMatrix { n, entries })
}

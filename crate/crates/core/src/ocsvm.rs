//! One-class SVM trained on the dual by projected stochastic gradient ascent.
//!
//! The dual is `max J(a) = sum a_i - 1/2 sum_ij a_i a_j K_ij` subject to
//! `0 <= a_i <= 1/(nu n)` and `sum a_i = 1`. Every coordinate shares the
//! gradient form `1 - (K a)_k`, which is also what federated clients compute
//! from the exchanged coefficient vector `w = a K`.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::kernel::{dot, kernel_matrix, KernelConfig, KernelMatrix};

/// Threshold above which a multiplier marks its sample as a support vector.
pub const SUPPORT_THRESHOLD: f64 = 1e-8;

/// Slack used to decide whether a multiplier sits strictly inside the box.
const MARGIN_SLACK: f64 = 1e-8;

/// Which constraint set the multipliers are kept in during training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Feasibility {
    /// Box only. Each epoch is an in-place coordinate sweep that clamps every
    /// coordinate as soon as it is updated.
    Box,
    /// Box and simplex. Each epoch takes one gradient step from the epoch's
    /// starting point, clamps to the box, then projects exactly onto the
    /// intersection with `sum a_i = 1`.
    #[default]
    BoxSimplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Upper bound on the training outlier fraction, in (0, 1).
    pub nu: f64,
    /// Learning rate.
    pub eta: f64,
    /// Stop once `||a_t - a_{t+1}|| <= epsilon`.
    pub epsilon: f64,
    pub max_epochs: usize,
    #[serde(default)]
    pub feasibility: Feasibility,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            nu: 0.05,
            eta: 0.05,
            epsilon: 1e-5,
            max_epochs: 1000,
            feasibility: Feasibility::BoxSimplex,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "nu must lie in (0, 1), got {}",
                self.nu
            )));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "eta must be positive, got {}",
                self.eta
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidParameter("max_epochs must be at least 1".into()));
        }
        Ok(())
    }

    /// Upper box bound `1/(nu n)` for `n` samples.
    pub fn cap(&self, n: usize) -> f64 {
        box_cap(n, self.nu)
    }
}

pub fn box_cap(n: usize, nu: f64) -> f64 {
    1.0 / (nu * n as f64)
}

/// Lagrange multipliers, one per training sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaVector(Vec<f64>);

impl AlphaVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// True when every coordinate lies in `[0, 1/(nu n)]`.
    pub fn within_box(&self, nu: f64) -> bool {
        let cap = box_cap(self.0.len(), nu);
        self.0.iter().all(|&a| (0.0..=cap).contains(&a))
    }
}

/// Kernel-space coefficients `w = a K` exchanged between clients and server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector(Vec<f64>);

impl CoefficientVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Uniform start on the simplex: `a_i = 1/n`.
pub fn init_alpha(n: usize) -> Result<AlphaVector> {
    if n == 0 {
        return Err(Error::EmptyInput("training set"));
    }
    Ok(AlphaVector(vec![1.0 / n as f64; n]))
}

/// Clamps a single multiplier into `[0, 1/(nu n)]`.
pub fn project_box(a: f64, n: usize, nu: f64) -> f64 {
    a.clamp(0.0, box_cap(n, nu))
}

/// Euclidean projection onto `{a : 0 <= a_i <= cap, sum a_i = 1}`.
///
/// The projection is `clamp(y_i - tau, 0, cap)` for the unique shift `tau`
/// that restores the unit sum. `tau` is bracketed by bisection and then solved
/// exactly on the resulting active set.
pub fn project_feasible(values: &mut [f64], cap: f64) -> Result<()> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyInput("multiplier vector"));
    }
    if cap * (n as f64) < 1.0 - 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "box cap {cap} admits no point on the simplex for n = {n}"
        )));
    }
    let clamped_sum = |tau: f64| -> f64 { values.iter().map(|y| (y - tau).clamp(0.0, cap)).sum() };
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    // sum(lo) = n cap >= 1, sum(hi) = 0
    let (mut lo, mut hi) = (min - cap, max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if clamped_sum(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * (1.0 + hi.abs().max(lo.abs())) {
            break;
        }
    }
    let mut tau = 0.5 * (lo + hi);
    let (mut free_sum, mut free, mut upper) = (0.0, 0usize, 0usize);
    for &y in values.iter() {
        let v = y - tau;
        if v >= cap {
            upper += 1;
        } else if v > 0.0 {
            free += 1;
            free_sum += y;
        }
    }
    if free > 0 {
        let exact = (free_sum + cap * upper as f64 - 1.0) / free as f64;
        if exact.is_finite() && (exact - tau).abs() <= (hi - lo).max(1e-9) * 4.0 {
            tau = exact;
        }
    }
    for y in values.iter_mut() {
        *y = (*y - tau).clamp(0.0, cap);
    }
    Ok(())
}

/// One training epoch over all coordinates, keeping the multipliers feasible
/// for `cfg.feasibility`.
pub fn sgd_epoch(alpha: &AlphaVector, kernel: &KernelMatrix, cfg: &TrainConfig) -> Result<AlphaVector> {
    let n = kernel.n();
    check_len(n, alpha.len())?;
    let cap = cfg.cap(n);
    let mut next = alpha.0.clone();
    match cfg.feasibility {
        Feasibility::Box => {
            for k in 0..n {
                let grad = 1.0 - dot(kernel.row(k), &next);
                next[k] = (next[k] + cfg.eta * grad).clamp(0.0, cap);
            }
        }
        Feasibility::BoxSimplex => {
            let w = kernel.mul_vec(&alpha.0)?;
            gradient_step(&mut next, &w, cfg.eta, cap);
            project_feasible(&mut next, cap)?;
        }
    }
    Ok(AlphaVector(next))
}

/// `a_k <- clamp(a_k + eta (1 - w_k))` for every `k`, with `w` held fixed.
pub(crate) fn gradient_step(alpha: &mut [f64], w: &[f64], eta: f64, cap: f64) {
    for (a, wk) in alpha.iter_mut().zip(w) {
        *a = (*a + eta * (1.0 - wk)).clamp(0.0, cap);
    }
}

/// Result of a local training run.
#[derive(Debug, Clone)]
pub struct LocalFit {
    pub alpha: AlphaVector,
    pub kernel: KernelMatrix,
    pub epochs_run: usize,
    pub converged: bool,
}

/// Runs epochs from the uniform start until successive multipliers differ by
/// at most `epsilon` or `max_epochs` is reached.
pub fn train_local(samples: &[Vec<f64>], kcfg: &KernelConfig, cfg: &TrainConfig) -> Result<LocalFit> {
    cfg.validate()?;
    let kernel = kernel_matrix(samples, kcfg)?;
    let (alpha, epochs_run, converged) = train_on_kernel(&kernel, cfg, init_alpha(kernel.n())?)?;
    Ok(LocalFit {
        alpha,
        kernel,
        epochs_run,
        converged,
    })
}

/// Same loop as [`train_local`] over a precomputed Gram matrix and start point.
pub fn train_on_kernel(
    kernel: &KernelMatrix,
    cfg: &TrainConfig,
    start: AlphaVector,
) -> Result<(AlphaVector, usize, bool)> {
    check_len(kernel.n(), start.len())?;
    let mut alpha = start;
    for epoch in 1..=cfg.max_epochs {
        let next = sgd_epoch(&alpha, kernel, cfg)?;
        let step = l2_dist(&alpha.0, &next.0);
        alpha = next;
        if step <= cfg.epsilon {
            return Ok((alpha, epoch, true));
        }
    }
    Ok((alpha, cfg.max_epochs, false))
}

pub(crate) fn l2_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `w_k = sum_i a_i K_ik`.
pub fn compute_w(alpha: &AlphaVector, kernel: &KernelMatrix) -> Result<CoefficientVector> {
    Ok(CoefficientVector(kernel.mul_vec(&alpha.0)?))
}

/// Dual objective `J(a)`.
pub fn dual_objective(alpha: &AlphaVector, kernel: &KernelMatrix) -> Result<f64> {
    let w = kernel.mul_vec(&alpha.0)?;
    Ok(alpha.sum() - 0.5 * dot(&alpha.0, &w))
}

/// Client loss reported to the server: `-J(a)`, lower is better.
pub fn local_loss(alpha: &AlphaVector, kernel: &KernelMatrix) -> Result<f64> {
    Ok(-dual_objective(alpha, kernel)?)
}

/// Offset `rho`: mean of `(K a)_i` over margin support vectors
/// (`0 < a_i < 1/(nu n)`), or over all support vectors when none is strictly
/// inside the box.
pub fn compute_rho(alpha: &AlphaVector, kernel: &KernelMatrix, cfg: &TrainConfig) -> Result<f64> {
    check_len(kernel.n(), alpha.len())?;
    rho_with_cap(alpha.as_slice(), kernel, cfg.cap(kernel.n()))
}

pub(crate) fn rho_with_cap(alpha: &[f64], kernel: &KernelMatrix, cap: f64) -> Result<f64> {
    let support: Vec<usize> = (0..alpha.len()).filter(|&i| alpha[i] > SUPPORT_THRESHOLD).collect();
    if support.is_empty() {
        return Err(Error::Degenerate("all multipliers are zero".into()));
    }
    let margin: Vec<usize> = support
        .iter()
        .copied()
        .filter(|&i| alpha[i] < cap - MARGIN_SLACK)
        .collect();
    let chosen = if margin.is_empty() { &support } else { &margin };
    let total: f64 = chosen.iter().map(|&i| dot(kernel.row(i), alpha)).sum();
    let rho = total / chosen.len() as f64;
    if rho.is_finite() {
        Ok(rho)
    } else {
        Err(Error::Degenerate("offset is not finite".into()))
    }
}

/// Classifier output: `Positive` is the learned (healthy) class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    /// Sign of a decision value; zero counts as positive.
    pub fn of(g: f64) -> Sign {
        if g < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

/// A trained detector: support vectors, their multipliers, and the offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcsvmModel {
    support_points: Vec<Vec<f64>>,
    alphas: Vec<f64>,
    rho: f64,
    kernel: KernelConfig,
    nu: f64,
}

impl OcsvmModel {
    pub fn new(
        support_points: Vec<Vec<f64>>,
        alphas: Vec<f64>,
        rho: f64,
        kernel: KernelConfig,
        nu: f64,
    ) -> Result<Self> {
        check_len(support_points.len(), alphas.len())?;
        if support_points.is_empty() {
            return Err(Error::Degenerate("model has no support vectors".into()));
        }
        if let Some(a) = alphas.iter().find(|a| !(**a > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "support multipliers must be positive, got {a}"
            )));
        }
        if !rho.is_finite() {
            return Err(Error::InvalidParameter("rho must be finite".into()));
        }
        let dim = support_points[0].len();
        for p in &support_points {
            check_len(dim, p.len())?;
        }
        Ok(Self {
            support_points,
            alphas,
            rho,
            kernel,
            nu,
        })
    }

    /// Keeps the samples with `a_i > SUPPORT_THRESHOLD` and computes `rho`
    /// from the full multiplier vector.
    pub fn from_alpha(
        samples: &[Vec<f64>],
        alpha: &AlphaVector,
        gram: &KernelMatrix,
        kernel: KernelConfig,
        cfg: &TrainConfig,
    ) -> Result<Self> {
        check_len(samples.len(), alpha.len())?;
        let rho = compute_rho(alpha, gram, cfg)?;
        let (points, alphas) = alpha
            .as_slice()
            .iter()
            .zip(samples)
            .filter(|(a, _)| **a > SUPPORT_THRESHOLD)
            .map(|(a, x)| (x.clone(), *a))
            .unzip();
        Self::new(points, alphas, rho, kernel, cfg.nu)
    }

    /// Same support set with a different offset.
    pub fn with_rho(self, rho: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::InvalidParameter("rho must be finite".into()));
        }
        Ok(Self { rho, ..self })
    }

    pub fn support_points(&self) -> &[Vec<f64>] {
        &self.support_points
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn kernel(&self) -> &KernelConfig {
        &self.kernel
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn n_support(&self) -> usize {
        self.alphas.len()
    }

    pub fn dim(&self) -> usize {
        self.support_points[0].len()
    }

    /// `g(x) = sum_i a_i K(x_i, x) - rho`.
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        check_len(self.dim(), x.len())?;
        let score: f64 = self
            .support_points
            .iter()
            .zip(&self.alphas)
            .map(|(sv, a)| a * self.kernel.eval_sq_dist(crate::kernel::sq_dist(sv, x)))
            .sum();
        Ok(score - self.rho)
    }

    pub fn classify(&self, x: &[f64]) -> Result<Sign> {
        Ok(Sign::of(self.decision(x)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box_cfg(eta: f64, nu: f64) -> TrainConfig {
        TrainConfig {
            nu,
            eta,
            feasibility: Feasibility::Box,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn init_alpha_is_uniform() {
        assert_eq!(init_alpha(4).unwrap().as_slice(), &[0.25; 4]);
        let a = init_alpha(100).unwrap();
        assert!(a.as_slice().iter().all(|&v| v == 0.01));
        assert!(a.within_box(0.05));
        assert_eq!(init_alpha(1).unwrap().as_slice(), &[1.0]);
        assert!(init_alpha(0).is_err());
    }

    #[test]
    fn project_box_clamps() {
        assert_eq!(project_box(-0.3, 10, 0.1), 0.0);
        assert_eq!(project_box(2.0, 10, 0.1), 1.0);
        assert_eq!(project_box(0.5, 10, 0.1), 0.5);
    }

    #[test]
    fn project_feasible_hits_simplex_and_box() {
        let mut v = vec![0.9, -0.2, 0.4, 0.4, 3.0];
        project_feasible(&mut v, 0.5).unwrap();
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(v.iter().all(|&a| (0.0..=0.5).contains(&a)));
        assert_eq!(v[4], 0.5);
        assert_eq!(v[1], 0.0);

        // already feasible points are fixed
        let mut u = vec![0.25; 4];
        project_feasible(&mut u, 1.0).unwrap();
        assert_eq!(u, vec![0.25; 4]);

        let mut bad = vec![0.1, 0.1];
        assert!(project_feasible(&mut bad, 0.4).is_err());
    }

    #[test]
    fn sgd_epoch_fixed_point_single_sample() {
        let k = KernelMatrix::identity(1);
        let a = sgd_epoch(&AlphaVector::new(vec![1.0]), &k, &box_cfg(0.1, 0.5)).unwrap();
        assert_eq!(a.as_slice(), &[1.0]);
        let a = sgd_epoch(&AlphaVector::new(vec![1.0]), &k, &TrainConfig::default()).unwrap();
        assert_eq!(a.as_slice(), &[1.0]);
    }

    #[test]
    fn sgd_epoch_identity_kernel_box_sweep() {
        let k = KernelMatrix::identity(2);
        let a = sgd_epoch(&AlphaVector::new(vec![0.0, 0.0]), &k, &box_cfg(0.1, 0.5)).unwrap();
        assert!((a.as_slice()[0] - 0.1).abs() < 1e-15);
        assert!((a.as_slice()[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn sgd_epoch_simplex_mode_stays_on_simplex() {
        let k = KernelMatrix::from_rows(&[vec![1.0, 0.3, 0.1], vec![0.3, 1.0, 0.6], vec![0.1, 0.6, 1.0]])
            .unwrap();
        let cfg = TrainConfig {
            nu: 0.5,
            eta: 0.3,
            ..TrainConfig::default()
        };
        let mut a = init_alpha(3).unwrap();
        for _ in 0..50 {
            a = sgd_epoch(&a, &k, &cfg).unwrap();
            assert!((a.sum() - 1.0).abs() < 1e-12);
            assert!(a.within_box(0.5));
        }
    }

    #[test]
    fn sgd_epoch_rejects_length_mismatch() {
        let k = KernelMatrix::identity(3);
        assert!(sgd_epoch(&AlphaVector::new(vec![0.5, 0.5]), &k, &TrainConfig::default()).is_err());
    }

    #[test]
    fn train_local_single_point() {
        let kcfg = KernelConfig::new(1.0).unwrap();
        for mode in [Feasibility::Box, Feasibility::BoxSimplex] {
            let cfg = TrainConfig {
                feasibility: mode,
                ..TrainConfig::default()
            };
            let fit = train_local(&[vec![0.5, 0.5]], &kcfg, &cfg).unwrap();
            assert_eq!(fit.alpha.as_slice(), &[1.0]);
            assert!(fit.converged);
        }
    }

    #[test]
    fn train_local_duplicates_stay_symmetric() {
        let kcfg = KernelConfig::new(1.0).unwrap();
        let x = vec![vec![1.0, -1.0], vec![1.0, -1.0]];
        for mode in [Feasibility::Box, Feasibility::BoxSimplex] {
            let cfg = TrainConfig {
                nu: 0.5,
                feasibility: mode,
                ..TrainConfig::default()
            };
            let k = kernel_matrix(&x, &kcfg).unwrap();
            let mut a = init_alpha(2).unwrap();
            for _ in 0..20 {
                a = sgd_epoch(&a, &k, &cfg).unwrap();
                assert_eq!(a.as_slice()[0], a.as_slice()[1]);
            }
        }
    }

    #[test]
    fn compute_w_examples() {
        let ones = KernelMatrix::from_rows(&vec![vec![1.0; 3]; 3]).unwrap();
        let w = compute_w(&init_alpha(3).unwrap(), &ones).unwrap();
        for v in w.as_slice() {
            assert!((v - 1.0).abs() < 1e-15);
        }
        let k = KernelMatrix::from_rows(&[vec![1.0, 0.2, 0.4], vec![0.2, 1.0, 0.7], vec![0.4, 0.7, 1.0]])
            .unwrap();
        let w = compute_w(&AlphaVector::new(vec![0.0, 1.0, 0.0]), &k).unwrap();
        assert_eq!(w.as_slice(), k.row(1));
        assert!(compute_w(&AlphaVector::new(vec![1.0]), &k).is_err());
    }

    #[test]
    fn dual_objective_and_loss_examples() {
        let one = KernelMatrix::identity(1);
        let a = AlphaVector::new(vec![1.0]);
        assert_eq!(dual_objective(&a, &one).unwrap(), 0.5);
        assert_eq!(local_loss(&a, &one).unwrap(), -0.5);

        let id4 = KernelMatrix::identity(4);
        let u = init_alpha(4).unwrap();
        assert!((dual_objective(&u, &id4).unwrap() - 0.875).abs() < 1e-15);

        // larger objective means smaller loss
        let concentrated = AlphaVector::new(vec![1.0, 0.0, 0.0, 0.0]);
        assert!(dual_objective(&u, &id4).unwrap() > dual_objective(&concentrated, &id4).unwrap());
        assert!(local_loss(&u, &id4).unwrap() < local_loss(&concentrated, &id4).unwrap());
    }

    #[test]
    fn rho_examples() {
        let cfg = TrainConfig::default();
        let rho = compute_rho(&AlphaVector::new(vec![1.0]), &KernelMatrix::identity(1), &cfg).unwrap();
        assert_eq!(rho, 1.0);

        let ones = KernelMatrix::from_rows(&vec![vec![1.0; 2]; 2]).unwrap();
        let cfg = TrainConfig { nu: 0.5, ..cfg };
        let rho = compute_rho(&AlphaVector::new(vec![0.5, 0.5]), &ones, &cfg).unwrap();
        assert_eq!(rho, 1.0);

        assert!(matches!(
            compute_rho(&AlphaVector::new(vec![0.0, 0.0]), &ones, &cfg),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn rho_falls_back_to_all_support_vectors_at_cap() {
        // cap = 1/(0.5 * 2) = 1, both multipliers at the cap
        let k = KernelMatrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let cfg = TrainConfig { nu: 0.5, ..TrainConfig::default() };
        let rho = compute_rho(&AlphaVector::new(vec![1.0, 1.0]), &k, &cfg).unwrap();
        assert!((rho - 1.5).abs() < 1e-15);
    }

    #[test]
    fn single_sv_decision() {
        let kcfg = KernelConfig::new(1.0).unwrap();
        let m = OcsvmModel::new(vec![vec![0.0, 0.0]], vec![1.0], 1.0, kcfg, 0.05).unwrap();
        assert_eq!(m.decision(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(m.classify(&[0.0, 0.0]).unwrap(), Sign::Positive);
        let far = m.decision(&[50.0, 0.0]).unwrap();
        assert!((far + 1.0).abs() < 1e-12);
        assert_eq!(m.classify(&[50.0, 0.0]).unwrap(), Sign::Negative);
        assert!(m.decision(&[0.0]).is_err());
    }

    #[test]
    fn sign_rule() {
        assert_eq!(Sign::of(0.3), Sign::Positive);
        assert_eq!(Sign::of(-0.3), Sign::Negative);
        assert_eq!(Sign::of(0.0), Sign::Positive);
        assert_eq!(Sign::of(-0.0).as_i8(), 1);
    }

    #[test]
    fn model_validation() {
        let kcfg = KernelConfig::new(1.0).unwrap();
        assert!(OcsvmModel::new(vec![vec![0.0]], vec![0.0], 1.0, kcfg, 0.1).is_err());
        assert!(OcsvmModel::new(vec![vec![0.0]], vec![1.0], f64::NAN, kcfg, 0.1).is_err());
        assert!(OcsvmModel::new(vec![], vec![], 1.0, kcfg, 0.1).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        for bad in [
            TrainConfig { nu: 0.0, ..TrainConfig::default() },
            TrainConfig { nu: 1.0, ..TrainConfig::default() },
            TrainConfig { eta: 0.0, ..TrainConfig::default() },
            TrainConfig { epsilon: -1.0, ..TrainConfig::default() },
            TrainConfig { max_epochs: 0, ..TrainConfig::default() },
        ] {
            assert!(bad.validate().is_err());
        }
    }
}

//! Deterministic asymptotic risk constants for the shrinkage estimators.
//!
//! For a fixed `θ` and noise level `σ` the normalised losses concentrate as
//! `n` grows:
//!
//! * positive-part JS: `γσ²/(γ+σ²)` with `γ = ‖θ‖²/n`,
//! * positive-part Lindley: `ρσ²/(ρ+σ²)` with `ρ = ‖θ − θ̄1‖²/n`,
//! * `L`-cluster JS: `min(β, βσ²/(α+σ²))`, where for separator limits
//!   `μ_1 > … > μ_{L−1}` and `P_ij = P(μ_j < θ_i + w ≤ μ_{j−1})`
//!
//!   ```text
//!   c_j = Σ_i θ_i P_ij / Σ_i P_ij
//!   β   = ‖θ‖²/n − Σ_j c_j² Σ_i P_ij / n
//!   α   = β − (2σ/(n√(2π))) Σ_j c_j Σ_i [e(μ_j − θ_i) − e(μ_{j−1} − θ_i)]
//!   ```
//!
//!   with `e(x) = exp(−x²/2σ²)` and `e(±∞) = 0`.
//!
//! The δ-dependent correction terms that accompany these limits are not
//! computable from `θ` and are left out.
//!
//! All sums are translation invariant, so they are evaluated on `θ − θ̄` to
//! avoid cancellation when `θ̄` is large.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, pairwise_sum_by};
use crate::qfunc::{interval_prob, phi, q, qc};
use crate::rng::{gaussian_noise, trial_rng};

/// Ground-truth parameter vector with its cached mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaVector {
    values: Vec<f64>,
    mean: f64,
}

impl ThetaVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("theta is empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("theta has non-finite entries".into()));
        }
        let mean = pairwise_sum(&values) / values.len() as f64;
        Ok(ThetaVector { values, mean })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn centered(&self) -> Vec<f64> {
        self.values.iter().map(|v| v - self.mean).collect()
    }

    /// `γ = ‖θ‖²/n`.
    pub fn gamma(&self) -> f64 {
        pairwise_sum_by(self.len(), &|i| self.values[i] * self.values[i]) / self.len() as f64
    }

    /// `ρ = ‖θ − θ̄1‖²/n`.
    pub fn rho(&self) -> f64 {
        let c = self.centered();
        pairwise_sum_by(c.len(), &|i| c[i] * c[i]) / c.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryConstants {
    pub beta: f64,
    pub alpha: f64,
    /// Per-cluster limits `c_j` of the attractors, top cluster first.
    pub c: Vec<f64>,
    /// Deterministic separator limits `μ_j`, strictly descending.
    pub mu: Vec<f64>,
    pub gamma: f64,
    pub rho: f64,
    /// Clusters that carry no probability mass; their `c_j` is NaN and their
    /// terms are dropped from `β` and `α`.
    pub degenerate_clusters: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LossKind {
    JsPlus,
    Lindley,
    Cluster,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "sigma must be positive and finite, got {sigma}"
        )))
    }
}

fn gaussian_kernel(x: f64, sigma: f64) -> f64 {
    (-(x * x) / (2.0 * sigma * sigma)).exp()
}

/// Two-cluster constants for the separator at `θ̄`.
///
/// Uses `Q((θ̄−θ_i)/σ)` and its complement directly, and evaluates
/// `c₁ − c₂ = n Σ (θ_i−θ̄)(Q((θ̄−θ_i)/σ) − ½) / (Σ Q · Σ Qᶜ)`, a sum of
/// nonnegative terms, so that `β ≥ α` holds exactly in floating point.
pub fn theory_two_cluster(theta: &ThetaVector, sigma: f64) -> Result<TheoryConstants> {
    check_sigma(sigma)?;
    let n = theta.len();
    let nf = n as f64;
    let t = theta.centered();
    let arg = |i: usize| -t[i] / sigma;

    let s_upper = pairwise_sum_by(n, &|i| q(arg(i)));
    let s_lower = pairwise_sum_by(n, &|i| qc(arg(i)));
    let c_upper = pairwise_sum_by(n, &|i| t[i] * q(arg(i))) / s_upper;
    let c_lower = pairwise_sum_by(n, &|i| t[i] * qc(arg(i))) / s_lower;
    let norm_sq = pairwise_sum_by(n, &|i| t[i] * t[i]);
    let beta = ((norm_sq - c_upper * c_upper * s_upper - c_lower * c_lower * s_lower) / nf).max(0.0);

    // Q(u) - 1/2 = -erf(u/√2)/2
    let weighted = pairwise_sum_by(n, &|i| {
        t[i] * (-0.5 * libm::erf(arg(i) * std::f64::consts::FRAC_1_SQRT_2))
    });
    let gap = nf * weighted / (s_upper * s_lower);
    let kernel = pairwise_sum_by(n, &|i| gaussian_kernel(t[i], sigma));
    let alpha = beta - 2.0 * sigma / (nf * (2.0 * PI).sqrt()) * kernel * gap;

    Ok(TheoryConstants {
        beta,
        alpha,
        c: vec![c_upper + theta.mean(), c_lower + theta.mean()],
        mu: vec![theta.mean()],
        gamma: theta.gamma(),
        rho: theta.rho(),
        degenerate_clusters: Vec::new(),
    })
}

fn check_separators(mu: &[f64]) -> Result<()> {
    if mu.iter().any(|m| !m.is_finite()) {
        return Err(Error::InvalidInput("separator limits must be finite".into()));
    }
    if mu.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidInput(format!(
            "separator limits must be strictly descending: {mu:?}"
        )));
    }
    Ok(())
}

/// Lower and upper boundaries of cluster `j` in centred coordinates.
fn cluster_bounds(mu_centered: &[f64], j: usize) -> (Option<f64>, Option<f64>) {
    let lower = mu_centered.get(j).copied();
    let upper = if j == 0 { None } else { Some(mu_centered[j - 1]) };
    (lower, upper)
}

struct ClusterMass {
    /// `Σ_i P_ij`
    mass: f64,
    /// `Σ_i (θ_i − θ̄) P_ij`
    first_moment: f64,
}

fn cluster_masses(t: &[f64], mu_centered: &[f64], sigma: f64) -> Vec<ClusterMass> {
    let n = t.len();
    (0..=mu_centered.len())
        .map(|j| {
            let (lo, hi) = cluster_bounds(mu_centered, j);
            let p = |i: usize| {
                interval_prob(lo.map(|m| (m - t[i]) / sigma), hi.map(|m| (m - t[i]) / sigma))
            };
            ClusterMass {
                mass: pairwise_sum_by(n, &p),
                first_moment: pairwise_sum_by(n, &|i| t[i] * p(i)),
            }
        })
        .collect()
}

/// `L`-cluster constants for deterministic separator limits `mu`
/// (`L = mu.len() + 1`).
pub fn theory_l_cluster(theta: &ThetaVector, sigma: f64, mu: &[f64]) -> Result<TheoryConstants> {
    check_sigma(sigma)?;
    check_separators(mu)?;
    let n = theta.len();
    let nf = n as f64;
    let t = theta.centered();
    let mu_c: Vec<f64> = mu.iter().map(|m| m - theta.mean()).collect();

    let masses = cluster_masses(&t, &mu_c, sigma);
    let mut c = Vec::with_capacity(masses.len());
    let mut degenerate = Vec::new();
    let mut explained = 0.0;
    let mut cross = 0.0;
    for (j, m) in masses.iter().enumerate() {
        if m.mass <= 0.0 {
            degenerate.push(j);
            c.push(f64::NAN);
            continue;
        }
        let cj = m.first_moment / m.mass;
        explained += cj * cj * m.mass;
        let (lo, hi) = cluster_bounds(&mu_c, j);
        let kernel_at = |bound: Option<f64>, i: usize| bound.map_or(0.0, |b| gaussian_kernel(b - t[i], sigma));
        let kernel_diff = pairwise_sum_by(n, &|i| kernel_at(lo, i) - kernel_at(hi, i));
        cross += cj * kernel_diff;
        c.push(cj + theta.mean());
    }
    let norm_sq = pairwise_sum_by(n, &|i| t[i] * t[i]);
    let beta = ((norm_sq - explained) / nf).max(0.0);
    let alpha = beta - 2.0 * sigma / (nf * (2.0 * PI).sqrt()) * cross;

    Ok(TheoryConstants {
        beta,
        alpha,
        c,
        mu: mu.to_vec(),
        gamma: theta.gamma(),
        rho: theta.rho(),
        degenerate_clusters: degenerate,
    })
}

/// Limits of the data-driven separators for `clusters = 2^a` clusters.
///
/// `ȳ` concentrates at `θ̄`; each doubling step splits a cluster at the limit
/// of its within-cluster mean of `y`,
/// `[Σ θ_i P_ij + σ Σ (φ(a_ij) − φ(b_ij))] / Σ P_ij`, with `a_ij`, `b_ij` the
/// standardised cluster bounds.
pub fn separator_limits(theta: &ThetaVector, sigma: f64, clusters: usize) -> Result<Vec<f64>> {
    check_sigma(sigma)?;
    if clusters == 0 || !clusters.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "cluster count must be a power of two, got {clusters}"
        )));
    }
    if clusters == 1 {
        return Ok(Vec::new());
    }
    let n = theta.len();
    let t = theta.centered();
    let mut mu_c = vec![0.0];
    for _ in 1..clusters.trailing_zeros() {
        let masses = cluster_masses(&t, &mu_c, sigma);
        let mut next = Vec::with_capacity(2 * masses.len());
        for (j, m) in masses.iter().enumerate() {
            if m.mass > 0.0 {
                let (lo, hi) = cluster_bounds(&mu_c, j);
                let density_at = |bound: Option<f64>, i: usize| bound.map_or(0.0, |b| phi((b - t[i]) / sigma));
                let noise = sigma * pairwise_sum_by(n, &|i| density_at(lo, i) - density_at(hi, i));
                next.push((m.first_moment + noise) / m.mass);
            }
            if j < mu_c.len() {
                next.push(mu_c[j]);
            }
        }
        next.dedup();
        mu_c = next;
    }
    Ok(mu_c.into_iter().map(|m| m + theta.mean()).collect())
}

/// Limiting normalised loss of the requested estimator family.
pub fn asymptotic_loss(kind: LossKind, constants: &TheoryConstants, sigma: f64) -> f64 {
    let var = sigma * sigma;
    match kind {
        LossKind::JsPlus => constants.gamma * var / (constants.gamma + var),
        LossKind::Lindley => constants.rho * var / (constants.rho + var),
        LossKind::Cluster => constants.beta * var / (constants.alpha + var).max(var),
    }
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
}

impl McEstimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let k = samples.len() as f64;
        let mean = pairwise_sum(samples) / k;
        let std_error = if samples.len() > 1 {
            let dev: Vec<f64> = samples.iter().map(|s| (s - mean) * (s - mean)).collect();
            (pairwise_sum(&dev) / (k - 1.0)).sqrt() / k.sqrt()
        } else {
            0.0
        };
        McEstimate { mean, std_error }
    }
}

/// Monte Carlo evaluation of the exact James-Stein risk
/// `nσ² − (n−2)²σ⁴ E[1/‖y‖²]` (un-normalised).
pub fn js_exact_risk_mc(theta: &ThetaVector, sigma: f64, trials: usize, seed: u64) -> Result<McEstimate> {
    check_sigma(sigma)?;
    let n = theta.len();
    if n < 3 {
        return Err(Error::InvalidDimension {
            n,
            requirement: "n >= 3".into(),
        });
    }
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let nf = n as f64;
    let var = sigma * sigma;
    let samples: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let w = gaussian_noise(&mut trial_rng(seed, t), n, sigma);
            let norm_sq: f64 = theta.values().iter().zip(&w).map(|(a, b)| (a + b) * (a + b)).sum();
            nf * var - (nf - 2.0) * (nf - 2.0) * var * var / norm_sq
        })
        .collect();
    Ok(McEstimate::from_samples(&samples))
}

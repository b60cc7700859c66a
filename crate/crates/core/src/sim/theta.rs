//! Generators for the ground-truth θ structures used in the simulations.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::ThetaVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaKind {
    /// `⌊nρ/(1+ρ)⌋` entries equal to `τ`, the rest equal to `−ρτ`.
    TwoPoint,
    /// Clusters centred at `centers·τ`, each of width `widths·τ`, with points
    /// placed uniformly at random inside.
    Clustered,
    /// Entries evenly spaced from `−τ` to `τ`, endpoints included.
    Uniform,
}

fn one() -> f64 {
    1.0
}

/// Description of a θ arrangement. Centers and widths are multiples of `tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaSpec {
    pub kind: ThetaKind,
    #[serde(default = "one")]
    pub tau: f64,
    #[serde(default = "one")]
    pub rho: f64,
    #[serde(default)]
    pub centers: Vec<f64>,
    #[serde(default)]
    pub widths: Vec<f64>,
    /// Per-cluster proportions summing to 1, or point counts summing to `n`.
    #[serde(default)]
    pub fractions: Vec<f64>,
}

impl ThetaSpec {
    pub fn two_point(tau: f64, rho: f64) -> Self {
        ThetaSpec {
            kind: ThetaKind::TwoPoint,
            tau,
            rho,
            centers: Vec::new(),
            widths: Vec::new(),
            fractions: Vec::new(),
        }
    }

    pub fn clustered(tau: f64, centers: Vec<f64>, widths: Vec<f64>, fractions: Vec<f64>) -> Self {
        ThetaSpec {
            kind: ThetaKind::Clustered,
            tau,
            rho: 1.0,
            centers,
            widths,
            fractions,
        }
    }

    pub fn uniform(tau: f64) -> Self {
        ThetaSpec {
            kind: ThetaKind::Uniform,
            tau,
            rho: 1.0,
            centers: Vec::new(),
            widths: Vec::new(),
            fractions: Vec::new(),
        }
    }

    /// Every entry equal to `value`.
    pub fn constant(value: f64) -> Self {
        ThetaSpec::clustered(value, vec![1.0], vec![0.0], vec![1.0])
    }

    pub fn with_tau(&self, tau: f64) -> Self {
        ThetaSpec { tau, ..self.clone() }
    }

    /// Number of points per cluster for dimension `n`.
    pub fn cluster_counts(&self, n: usize) -> Result<Vec<usize>> {
        match self.kind {
            ThetaKind::TwoPoint => {
                let n1 = (n as f64 * self.rho / (1.0 + self.rho) + 1e-9).floor() as usize;
                Ok(vec![n1.min(n), n - n1.min(n)])
            }
            ThetaKind::Uniform => Ok(vec![n]),
            ThetaKind::Clustered => counts_from_fractions(&self.fractions, n),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Config("theta dimension must be at least 1".into()));
        }
        if !self.tau.is_finite() {
            return Err(Error::Config(format!("tau must be finite, got {}", self.tau)));
        }
        match self.kind {
            ThetaKind::TwoPoint => {
                if !(self.rho.is_finite() && self.rho >= 0.0) {
                    return Err(Error::Config(format!("rho must be >= 0, got {}", self.rho)));
                }
            }
            ThetaKind::Uniform => {}
            ThetaKind::Clustered => {
                let k = self.centers.len();
                if k == 0 || self.widths.len() != k || self.fractions.len() != k {
                    return Err(Error::Config(
                        "clustered theta needs equally many centers, widths and fractions".into(),
                    ));
                }
                if self.centers.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Config("cluster centers must be finite".into()));
                }
                if self.widths.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return Err(Error::Config("cluster widths must be >= 0".into()));
                }
            }
        }
        Ok(())
    }
}

/// Proportions (summing to 1) are rounded by largest remainder; integral
/// counts must sum to `n` exactly.
fn counts_from_fractions(fractions: &[f64], n: usize) -> Result<Vec<usize>> {
    if fractions.iter().any(|f| !(f.is_finite() && *f >= 0.0)) {
        return Err(Error::Config(format!("fractions must be >= 0: {fractions:?}")));
    }
    let total: f64 = fractions.iter().sum();
    if (total - 1.0).abs() <= 1e-9 {
        let raw: Vec<f64> = fractions.iter().map(|f| f * n as f64).collect();
        let mut counts: Vec<usize> = raw.iter().map(|r| (r + 1e-9).floor() as usize).collect();
        let assigned: usize = counts.iter().sum();
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = raw[a] - raw[a].floor();
            let rb = raw[b] - raw[b].floor();
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        for &i in order.iter().cycle().take(n.saturating_sub(assigned)) {
            counts[i] += 1;
        }
        if counts.iter().sum::<usize>() != n {
            return Err(Error::Config(format!(
                "fractions {fractions:?} cannot be rounded to {n} points"
            )));
        }
        return Ok(counts);
    }
    let integral = fractions.iter().all(|f| f.fract() == 0.0);
    if integral && total == n as f64 {
        return Ok(fractions.iter().map(|&f| f as usize).collect());
    }
    Err(Error::Config(format!(
        "fractions {fractions:?} must be proportions summing to 1 or counts summing to n = {n}"
    )))
}

/// Draw a θ of dimension `n`. Deterministic for a given RNG state.
pub fn generate_theta<R: Rng + ?Sized>(spec: &ThetaSpec, n: usize, rng: &mut R) -> Result<ThetaVector> {
    spec.validate(n)?;
    let tau = spec.tau;
    let values = match spec.kind {
        ThetaKind::TwoPoint => {
            let counts = spec.cluster_counts(n)?;
            let mut v = vec![tau; counts[0]];
            v.resize(n, -spec.rho * tau);
            v
        }
        ThetaKind::Uniform if n == 1 => vec![0.0],
        ThetaKind::Uniform => {
            let step = 2.0 / (n - 1) as f64;
            (0..n).map(|i| tau * (-1.0 + step * i as f64)).collect()
        }
        ThetaKind::Clustered => {
            let counts = spec.cluster_counts(n)?;
            let mut v = Vec::with_capacity(n);
            for ((&c, &w), &count) in spec.centers.iter().zip(&spec.widths).zip(&counts) {
                for _ in 0..count {
                    let offset = if w > 0.0 {
                        w * (rng.random::<f64>() - 0.5)
                    } else {
                        0.0
                    };
                    v.push(tau * (c + offset));
                }
            }
            v
        }
    };
    ThetaVector::new(values)
}

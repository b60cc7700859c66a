//! Baseline shrinkage estimators for the Gaussian sequence model `y = θ + w`,
//! `w ~ N(0, σ²I)`.
//!
//! Every estimator here has the form `ν + f·(y − ν)` for an attracting vector
//! `ν` and a scalar shrinkage factor `f`; [`EstimatorOutput`] records all three
//! so callers can inspect (and reconstruct) the estimate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{mean, squared_distance, squared_norm};

/// Observed vector `y` together with its known noise level `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationVector {
    values: Vec<f64>,
    sigma: f64,
}

impl ObservationVector {
    pub fn new(values: Vec<f64>, sigma: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("observation vector is empty".into()));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sigma must be positive and finite, got {sigma}"
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "observation {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(ObservationVector { values, sigma })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Empirical mean `ȳ`.
    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorOutput {
    pub estimate: Vec<f64>,
    pub shrinkage_factor: f64,
    pub attracting_vector: Vec<f64>,
}

impl EstimatorOutput {
    fn from_parts(y: &[f64], attracting_vector: Vec<f64>, shrinkage_factor: f64) -> Self {
        let estimate = y
            .iter()
            .zip(&attracting_vector)
            .map(|(yi, ni)| ni + shrinkage_factor * (yi - ni))
            .collect();
        EstimatorOutput {
            estimate,
            shrinkage_factor,
            attracting_vector,
        }
    }

    /// Normalised squared-error loss `‖θ̂ − θ‖²/n`.
    pub fn normalized_loss(&self, theta: &[f64]) -> f64 {
        squared_distance(&self.estimate, theta) / self.estimate.len() as f64
    }
}

/// Squared residual norms at or below this (relative to the data scale) are
/// treated as an exact zero residual, so `y = c·1` does not blow up through
/// rounding noise in the projection.
fn is_zero_residual(residual_sq: f64, y: &[f64]) -> bool {
    if residual_sq == 0.0 {
        return true;
    }
    let scale = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = 8.0 * f64::EPSILON * scale;
    residual_sq <= y.len() as f64 * tol * tol
}

/// Maximum-likelihood estimate `θ̂ = y`.
pub fn estimate_ml(y: &ObservationVector) -> EstimatorOutput {
    EstimatorOutput {
        estimate: y.values.clone(),
        shrinkage_factor: 1.0,
        attracting_vector: vec![0.0; y.len()],
    }
}

/// James-Stein estimate `[1 − (n−2)σ²/‖y‖²]·y`. Requires `n ≥ 3`.
pub fn estimate_js(y: &ObservationVector) -> Result<EstimatorOutput> {
    let n = y.len();
    if n < 3 {
        return Err(Error::InvalidDimension {
            n,
            requirement: "n >= 3".into(),
        });
    }
    Ok(shrink_to_origin(y, false))
}

/// Positive-part James-Stein estimate `[1 − (n−2)σ²/‖y‖²]₊·y`.
///
/// Defined for every `n ≥ 1`: for `n ≤ 2` the factor is clamped into `[0, 1]`.
pub fn estimate_js_positive(y: &ObservationVector) -> EstimatorOutput {
    shrink_to_origin(y, true)
}

fn shrink_to_origin(y: &ObservationVector, positive_part: bool) -> EstimatorOutput {
    let n = y.len();
    let norm_sq = squared_norm(&y.values);
    let factor = if is_zero_residual(norm_sq, &y.values) {
        0.0
    } else {
        let raw = 1.0 - (n as f64 - 2.0) * y.variance() / norm_sq;
        if positive_part {
            raw.clamp(0.0, 1.0)
        } else {
            raw
        }
    };
    EstimatorOutput::from_parts(&y.values, vec![0.0; n], factor)
}

const ORTHONORMAL_TOL: f64 = 1e-9;

fn check_orthonormal(basis: &[Vec<f64>], n: usize) -> Result<()> {
    for (i, u) in basis.iter().enumerate() {
        if u.len() != n {
            return Err(Error::InvalidInput(format!(
                "basis vector {i} has length {}, expected {n}",
                u.len()
            )));
        }
        for (j, v) in basis.iter().enumerate().take(i + 1) {
            let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            if (dot - target).abs() > ORTHONORMAL_TOL {
                return Err(Error::InvalidInput(format!(
                    "basis is not orthonormal: <u{i}, u{j}> = {dot}"
                )));
            }
        }
    }
    Ok(())
}

fn project(y: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut p = vec![0.0; y.len()];
    for u in basis {
        let coef: f64 = y.iter().zip(u).map(|(a, b)| a * b).sum();
        for (pi, ui) in p.iter_mut().zip(u) {
            *pi += coef * ui;
        }
    }
    p
}

/// Shared subspace kernel: `P_V(y) + [1 − (n−d−2)σ²/‖y − P_V(y)‖²](y − P_V(y))`.
fn subspace_shrink(y: &ObservationVector, basis: &[Vec<f64>], positive_part: bool) -> EstimatorOutput {
    let n = y.len();
    let d = basis.len();
    let proj = project(&y.values, basis);
    let residual_sq = squared_distance(&y.values, &proj);
    let factor = if is_zero_residual(residual_sq, &y.values) {
        0.0
    } else {
        let raw = 1.0 - (n as f64 - d as f64 - 2.0) * y.variance() / residual_sq;
        if positive_part {
            raw.clamp(0.0, 1.0)
        } else {
            raw
        }
    };
    EstimatorOutput::from_parts(&y.values, proj, factor)
}

/// James-Stein estimate shrinking towards the subspace spanned by an
/// orthonormal `basis` of dimension `d`. Requires `n > d + 2`.
///
/// An empty basis is the zero subspace and reproduces [`estimate_js`].
pub fn estimate_subspace_js(y: &ObservationVector, basis: &[Vec<f64>]) -> Result<EstimatorOutput> {
    let n = y.len();
    let d = basis.len();
    if n <= d + 2 {
        return Err(Error::InvalidDimension {
            n,
            requirement: format!("n > d + 2 with d = {d}"),
        });
    }
    check_orthonormal(basis, n)?;
    Ok(subspace_shrink(y, basis, false))
}

/// Unit vector `1/√n` spanning the constant subspace.
pub fn constant_basis(n: usize) -> Vec<Vec<f64>> {
    vec![vec![1.0 / (n as f64).sqrt(); n]]
}

/// Lindley's estimate, shrinking towards `ȳ·1` with `(n−3)σ²`.
///
/// The plain form requires `n ≥ 4`; the positive-part form is total and
/// clamps its factor into `[0, 1]`.
pub fn estimate_lindley(y: &ObservationVector, positive_part: bool) -> Result<EstimatorOutput> {
    let n = y.len();
    if !positive_part && n < 4 {
        return Err(Error::InvalidDimension {
            n,
            requirement: "n >= 4".into(),
        });
    }
    Ok(subspace_shrink(y, &constant_basis(n), positive_part))
}

/// `g(x) = max(σ², x)`.
pub fn g(x: f64, variance: f64) -> f64 {
    x.max(variance)
}

/// Shrink `y` towards an arbitrary attracting vector with factor
/// `1 − σ²/g(‖y−ν‖²/n)`, i.e. `[1 − nσ²/‖y−ν‖²]₊`.
pub fn shrink_toward(y: &ObservationVector, nu: Vec<f64>) -> Result<EstimatorOutput> {
    let n = y.len();
    if nu.len() != n {
        return Err(Error::InvalidInput(format!(
            "attracting vector has length {}, expected {n}",
            nu.len()
        )));
    }
    let spread = squared_distance(&y.values, &nu) / n as f64;
    let factor = 1.0 - y.variance() / g(spread, y.variance());
    Ok(EstimatorOutput::from_parts(&y.values, nu, factor))
}

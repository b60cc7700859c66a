//! Data-driven loss estimates and the hybrid estimator that picks the
//! candidate with the smallest estimated loss.
//!
//! Candidates are identified by their cluster count: `1` is the positive-part
//! Lindley estimator, `2, 4, 8, …` the cluster estimators.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cluster::{fit_cluster_js, ClusterFit};
use crate::error::{Error, Result};
use crate::estimators::{estimate_lindley, g, EstimatorOutput, ObservationVector};
use crate::numeric::squared_distance;

/// Default candidate set `{1, 2, 4}`.
pub const DEFAULT_CANDIDATES: [usize; 3] = [1, 2, 4];

/// Estimated normalised loss `σ²(1 − σ²/g(‖y − ȳ1‖²/n))` of positive-part Lindley.
pub fn loss_estimate_lindley(y: &ObservationVector) -> f64 {
    let var = y.variance();
    let ybar = y.mean();
    let spread = y.values().iter().map(|v| (v - ybar) * (v - ybar)).sum::<f64>() / y.len() as f64;
    var * (1.0 - var / g(spread, var))
}

/// Loss estimate for an already fitted cluster estimator, before clamping.
///
/// `None` when a cluster is empty: the attractor is then undefined and the
/// candidate cannot be ranked.
pub fn raw_cluster_loss(y: &ObservationVector, fit: &ClusterFit) -> Option<f64> {
    if !fit.attractors.empty_clusters.is_empty() {
        return None;
    }
    let n = y.len() as f64;
    let var = y.variance();
    let set = &fit.attractors;
    let spread = squared_distance(y.values(), &set.attracting_vector) / n;
    let correction: f64 = set
        .attractors
        .iter()
        .enumerate()
        .map(|(k, a)| a * set.boundary_imbalance(k))
        .sum();
    let beta_hat = spread - var + var / (n * set.delta) * correction;
    Some(var * beta_hat / g(spread, var))
}

/// Clamped loss estimate of the `clusters`-cluster estimator, `None` if ineligible.
pub fn loss_estimate_cluster(y: &ObservationVector, clusters: usize, delta: f64) -> Result<Option<f64>> {
    let fit = fit_cluster_js(y, clusters, delta)?;
    Ok(raw_cluster_loss(y, &fit).map(|l| l.max(0.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossEstimate {
    pub per_candidate: BTreeMap<usize, f64>,
    pub ineligible: BTreeSet<usize>,
}

impl LossEstimate {
    /// Smallest eligible estimate; ties go to the smaller cluster count.
    pub fn argmin(&self) -> Option<usize> {
        self.per_candidate
            .iter()
            .fold(None, |best: Option<(usize, f64)>, (&l, &v)| match best {
                Some((_, bv)) if bv <= v => best,
                _ => Some((l, v)),
            })
            .map(|(l, _)| l)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HybridSelection {
    pub chosen: usize,
    /// One weight per candidate (ascending cluster count); exactly one is 1.
    pub gamma_weights: BTreeMap<usize, u8>,
    pub losses: LossEstimate,
}

fn check_candidates(candidates: &[usize]) -> Result<BTreeSet<usize>> {
    if candidates.is_empty() {
        return Err(Error::InvalidInput("hybrid needs at least one candidate".into()));
    }
    let set: BTreeSet<usize> = candidates.iter().copied().collect();
    if let Some(bad) = set.iter().find(|&&l| l == 0 || !l.is_power_of_two()) {
        return Err(Error::InvalidInput(format!(
            "candidate cluster counts must be powers of two, got {bad}"
        )));
    }
    Ok(set)
}

/// Hybrid estimate over `candidates`: every candidate's loss is estimated
/// on the same `y`, and the output of the minimiser is returned. If no
/// candidate is eligible the Lindley estimator is used.
pub fn select_hybrid(
    y: &ObservationVector,
    candidates: &[usize],
    delta: f64,
) -> Result<(HybridSelection, EstimatorOutput)> {
    let set = check_candidates(candidates)?;
    let mut losses = LossEstimate {
        per_candidate: BTreeMap::new(),
        ineligible: BTreeSet::new(),
    };
    let mut outputs = BTreeMap::new();
    for &l in &set {
        if l == 1 {
            losses.per_candidate.insert(1, loss_estimate_lindley(y));
            continue;
        }
        let fit = fit_cluster_js(y, l, delta)?;
        match raw_cluster_loss(y, &fit) {
            Some(v) => {
                losses.per_candidate.insert(l, v.max(0.0));
                outputs.insert(l, fit.output);
            }
            None => {
                losses.ineligible.insert(l);
            }
        }
    }
    let chosen = losses.argmin().unwrap_or(1);
    let output = match outputs.remove(&chosen) {
        Some(out) => out,
        None => estimate_lindley(y, true)?,
    };
    let gamma_weights = set
        .iter()
        .map(|&l| (l, u8::from(l == chosen)))
        .chain((!set.contains(&chosen)).then_some((chosen, 1)))
        .collect();
    Ok((
        HybridSelection {
            chosen,
            gamma_weights,
            losses,
        },
        output,
    ))
}

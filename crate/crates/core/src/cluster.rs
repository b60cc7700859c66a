//! Data-driven clustering of the observation and the cluster-based
//! James-Stein estimators.
//!
//! Clusters are half-open intervals `(s_k, s_{k-1}]` of the real line cut by
//! strictly descending separators, with `s_{-1} = +∞` and `s_{L-1} = −∞`.
//! Cluster indices are 0-based and run from the top: cluster 0 holds the
//! largest observations. A value equal to a separator belongs to the cluster
//! below it.
//!
//! Each cluster's attractor approximates the within-cluster mean of `θ`
//! rather than of `y`: the within-cluster `y` sum is corrected by
//! `(σ²/2δ)·(B_k − B_{k−1})`, where `B_k` counts observations within `δ` of
//! separator `k`. The correction estimates the mean noise pushed across
//! each boundary.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{estimate_lindley, shrink_toward, EstimatorOutput, ObservationVector};
use crate::numeric::mean;

/// Strictly descending cluster separators. An empty list is the single-cluster partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    separators: Vec<f64>,
}

impl Partition {
    pub fn new(separators: Vec<f64>) -> Result<Self> {
        if let Some(s) = separators.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidInput(format!("separator {s} is not finite")));
        }
        if separators.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidInput(format!(
                "separators must be strictly descending: {separators:?}"
            )));
        }
        Ok(Partition { separators })
    }

    /// The partition with one cluster covering the whole line.
    pub fn trivial() -> Self {
        Partition {
            separators: Vec::new(),
        }
    }

    pub fn separators(&self) -> &[f64] {
        &self.separators
    }

    pub fn num_clusters(&self) -> usize {
        self.separators.len() + 1
    }

    /// Cluster index of a single value.
    pub fn cluster_of(&self, value: f64) -> usize {
        // number of separators s with value <= s
        self.separators.partition_point(|&s| s >= value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterAssignment {
    /// Cluster index of each observation.
    pub labels: Vec<usize>,
    /// Occupancy of each cluster.
    pub counts: Vec<usize>,
}

impl ClusterAssignment {
    pub fn num_clusters(&self) -> usize {
        self.counts.len()
    }

    pub fn has_empty_cluster(&self) -> bool {
        self.counts.contains(&0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractorSet {
    pub attractors: Vec<f64>,
    pub delta: f64,
    /// `B_k`: number of observations with `|y_i − s_k| ≤ δ`, one per separator.
    pub boundary_counts: Vec<usize>,
    pub attracting_vector: Vec<f64>,
    /// Clusters with no observations; their attractor is reported as 0.
    pub empty_clusters: Vec<usize>,
}

impl AttractorSet {
    /// `B_k − B_{k−1}` for cluster `k`, with the outer windows empty.
    pub fn boundary_imbalance(&self, cluster: usize) -> f64 {
        let lower = self.boundary_counts.get(cluster).copied().unwrap_or(0);
        let upper = if cluster == 0 {
            0
        } else {
            self.boundary_counts.get(cluster - 1).copied().unwrap_or(0)
        };
        lower as f64 - upper as f64
    }
}

/// Default δ-window half-width `5/√n`.
pub fn default_delta(n: usize) -> f64 {
    5.0 / (n as f64).sqrt()
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "delta must be positive and finite, got {delta}"
        )))
    }
}

/// Two-cluster partition separated at the empirical mean `ȳ`.
pub fn partition_two(y: &ObservationVector) -> Partition {
    Partition {
        separators: vec![mean(y.values())],
    }
}

/// Doubling refinement: every nonempty cluster is split at its within-cluster
/// mean, and the old separators are kept. Coincident separators are merged.
pub fn refine_partition(y: &ObservationVector, p: &Partition) -> Partition {
    let num = p.num_clusters();
    let mut sums = vec![0.0; num];
    let mut counts = vec![0usize; num];
    for &v in y.values() {
        let k = p.cluster_of(v);
        sums[k] += v;
        counts[k] += 1;
    }
    let mut separators = Vec::with_capacity(2 * num);
    for k in 0..num {
        if counts[k] > 0 {
            separators.push(sums[k] / counts[k] as f64);
        }
        if k < p.separators.len() {
            separators.push(p.separators[k]);
        }
    }
    // Means lie in (s_k, s_{k-1}], so the only possible violation is a mean
    // equal to the separator above it.
    separators.dedup();
    debug_assert!(separators.windows(2).all(|w| w[0] > w[1]));
    Partition { separators }
}

/// Partition for `clusters = 2^a`, built by `a` doublings of the trivial
/// partition (the first doubling splits at `ȳ`).
pub fn partition_for(y: &ObservationVector, clusters: usize) -> Result<Partition> {
    if clusters == 0 || !clusters.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "cluster count must be a power of two, got {clusters}"
        )));
    }
    let mut p = Partition::trivial();
    for _ in 0..clusters.trailing_zeros() {
        p = if p.num_clusters() == 1 {
            partition_two(y)
        } else {
            refine_partition(y, &p)
        };
    }
    Ok(p)
}

pub fn assign_clusters(y: &ObservationVector, p: &Partition) -> ClusterAssignment {
    let mut counts = vec![0usize; p.num_clusters()];
    let labels = y
        .values()
        .iter()
        .map(|&v| {
            let k = p.cluster_of(v);
            counts[k] += 1;
            k
        })
        .collect();
    ClusterAssignment { labels, counts }
}

/// δ-corrected attractors and the assembled attracting vector.
pub fn compute_attractors(
    y: &ObservationVector,
    p: &Partition,
    assignment: &ClusterAssignment,
    delta: f64,
) -> Result<AttractorSet> {
    check_delta(delta)?;
    if assignment.labels.len() != y.len() || assignment.num_clusters() != p.num_clusters() {
        return Err(Error::InvalidInput(
            "cluster assignment does not match the observation and partition".into(),
        ));
    }
    let boundary_counts: Vec<usize> = p
        .separators()
        .iter()
        .map(|&s| y.values().iter().filter(|&&v| (v - s).abs() <= delta).count())
        .collect();

    let num = p.num_clusters();
    let mut sums = vec![0.0; num];
    for (&v, &k) in y.values().iter().zip(&assignment.labels) {
        sums[k] += v;
    }
    let bias_scale = y.variance() / (2.0 * delta);
    let mut set = AttractorSet {
        attractors: vec![0.0; num],
        delta,
        boundary_counts,
        attracting_vector: Vec::new(),
        empty_clusters: Vec::new(),
    };
    for (k, (&count, &sum)) in assignment.counts.iter().zip(&sums).enumerate() {
        if count == 0 {
            set.empty_clusters.push(k);
            continue;
        }
        set.attractors[k] = (sum - bias_scale * set.boundary_imbalance(k)) / count as f64;
    }
    set.attracting_vector = assignment
        .labels
        .iter()
        .map(|&k| set.attractors[k])
        .collect();
    Ok(set)
}

/// Everything computed while fitting a cluster estimator on one observation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterFit {
    pub partition: Partition,
    pub assignment: ClusterAssignment,
    pub attractors: AttractorSet,
    pub output: EstimatorOutput,
}

/// Cluster estimator for an explicit partition.
pub fn fit_with_partition(y: &ObservationVector, partition: Partition, delta: f64) -> Result<ClusterFit> {
    let assignment = assign_clusters(y, &partition);
    let attractors = compute_attractors(y, &partition, &assignment, delta)?;
    let output = shrink_toward(y, attractors.attracting_vector.clone())?;
    Ok(ClusterFit {
        partition,
        assignment,
        attractors,
        output,
    })
}

/// Cluster estimator with `clusters = 2, 4, 8, …` data-driven clusters.
pub fn fit_cluster_js(y: &ObservationVector, clusters: usize, delta: f64) -> Result<ClusterFit> {
    check_delta(delta)?;
    if clusters < 2 {
        return Err(Error::InvalidInput(format!(
            "a cluster fit needs at least two clusters, got {clusters}"
        )));
    }
    let partition = partition_for(y, clusters)?;
    fit_with_partition(y, partition, delta)
}

/// `L`-cluster James-Stein estimate. `L = 1` is the positive-part Lindley
/// estimator; larger `L` must be a power of two.
pub fn estimate_cluster_js(y: &ObservationVector, clusters: usize, delta: f64) -> Result<EstimatorOutput> {
    check_delta(delta)?;
    if clusters == 1 {
        return estimate_lindley(y, true);
    }
    Ok(fit_cluster_js(y, clusters, delta)?.output)
}

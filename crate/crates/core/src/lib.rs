//! Cluster-based James-Stein shrinkage for the Gaussian sequence model
//! `y = θ + w`, `w ~ N(0, σ²I)`.
//!
//! The crate provides the classical shrinkage baselines, the cluster
//! estimators that shrink each coordinate toward a data-driven attractor,
//! the asymptotic loss formulas for both, a hybrid estimator that picks a
//! candidate by estimated loss, and a seeded Monte Carlo harness.
//!
//! ```
//! use clusterjs::{estimate_cluster_js, default_delta, ObservationVector};
//!
//! let y = ObservationVector::new(vec![2.1, 1.8, 2.3, -1.9, -2.2, -2.0], 1.0)?;
//! let out = estimate_cluster_js(&y, 2, default_delta(y.len()))?;
//! assert_eq!(out.estimate.len(), 6);
//! # Ok::<(), clusterjs::Error>(())
//! ```

pub mod cluster;
pub mod error;
pub mod estimators;
pub mod hybrid;
pub mod io;
pub mod numeric;
pub mod qfunc;
pub mod rng;
pub mod sim;
pub mod theory;

pub use cluster::{
    assign_clusters, compute_attractors, default_delta, estimate_cluster_js, fit_cluster_js,
    fit_with_partition, partition_for, partition_two, refine_partition, AttractorSet,
    ClusterAssignment, ClusterFit, Partition,
};
pub use error::{Error, Result};
pub use estimators::{
    constant_basis, estimate_js, estimate_js_positive, estimate_lindley, estimate_ml,
    estimate_subspace_js, shrink_toward, EstimatorOutput, ObservationVector,
};
pub use hybrid::{
    loss_estimate_cluster, loss_estimate_lindley, select_hybrid, HybridSelection, LossEstimate,
    DEFAULT_CANDIDATES,
};
pub use qfunc::q;
pub use theory::{
    asymptotic_loss, separator_limits, theory_l_cluster, theory_two_cluster, LossKind,
    TheoryConstants, ThetaVector,
};

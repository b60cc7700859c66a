//! Fit the two- and four-cluster estimators and print the partition,
//! attractors and boundary counts.

use clusterjs::rng::{gaussian_noise, trial_rng};
use clusterjs::{default_delta, fit_cluster_js, ObservationVector};

fn main() -> clusterjs::Result<()> {
    let n = 1000;
    let centers = [9.0, 3.0, -2.0, -8.0];
    let theta: Vec<f64> = (0..n).map(|i| centers[i % 4]).collect();
    let w = gaussian_noise(&mut trial_rng(11, 0), n, 1.0);
    let y: Vec<f64> = theta.iter().zip(&w).map(|(t, e)| t + e).collect();
    let y = ObservationVector::new(y, 1.0)?;
    let delta = default_delta(n);

    for l in [2, 4] {
        let fit = fit_cluster_js(&y, l, delta)?;
        println!("L = {l}, delta = {delta:.4}");
        println!("  separators      {:.3?}", fit.partition.separators());
        println!("  counts          {:?}", fit.assignment.counts);
        println!("  attractors      {:.3?}", fit.attractors.attractors);
        println!("  boundary counts {:?}", fit.attractors.boundary_counts);
        if !fit.attractors.empty_clusters.is_empty() {
            println!("  empty clusters  {:?}", fit.attractors.empty_clusters);
        }
        println!("  factor {:.4}, loss {:.4}", fit.output.shrinkage_factor, fit.output.normalized_loss(&theta));
    }
    Ok(())
}

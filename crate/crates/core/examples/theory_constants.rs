//! Asymptotic constants and losses for a two-point θ as the spacing grows.

use clusterjs::{
    asymptotic_loss, separator_limits, theory_l_cluster, theory_two_cluster, LossKind, ThetaVector,
};

fn main() -> clusterjs::Result<()> {
    let sigma = 1.0;
    println!("{:>5}{:>10}{:>10}{:>10}{:>10}", "tau", "js_plus", "lindley", "cluster2", "cluster4");
    for tau in [0.0, 1.0, 2.0, 4.0, 8.0] {
        let values: Vec<f64> = (0..1000).map(|i| if i < 500 { tau } else { -tau }).collect();
        let theta = ThetaVector::new(values)?;
        let two = theory_two_cluster(&theta, sigma)?;
        let four = theory_l_cluster(&theta, sigma, &separator_limits(&theta, sigma, 4)?)?;
        println!(
            "{tau:>5}{:>10.4}{:>10.4}{:>10.4}{:>10.4}",
            asymptotic_loss(LossKind::JsPlus, &two, sigma),
            asymptotic_loss(LossKind::Lindley, &two, sigma),
            asymptotic_loss(LossKind::Cluster, &two, sigma),
            asymptotic_loss(LossKind::Cluster, &four, sigma),
        );
    }
    Ok(())
}

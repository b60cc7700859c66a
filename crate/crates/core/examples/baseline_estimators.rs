//! ML, James-Stein, positive-part JS and Lindley on one draw.

use clusterjs::rng::{gaussian_noise, trial_rng};
use clusterjs::{estimate_js, estimate_js_positive, estimate_lindley, estimate_ml, ObservationVector};

fn main() -> clusterjs::Result<()> {
    let n = 200;
    let theta: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 3.0 } else { 2.0 }).collect();
    let w = gaussian_noise(&mut trial_rng(7, 0), n, 1.0);
    let y: Vec<f64> = theta.iter().zip(&w).map(|(t, e)| t + e).collect();
    let y = ObservationVector::new(y, 1.0)?;

    let rows = [
        ("ml", estimate_ml(&y)),
        ("js", estimate_js(&y)?),
        ("js_plus", estimate_js_positive(&y)),
        ("lindley", estimate_lindley(&y, false)?),
        ("lindley_plus", estimate_lindley(&y, true)?),
    ];
    println!("{:<14}{:>10}{:>10}", "estimator", "factor", "loss");
    for (name, out) in rows {
        println!("{name:<14}{:>10.4}{:>10.4}", out.shrinkage_factor, out.normalized_loss(&theta));
    }
    Ok(())
}

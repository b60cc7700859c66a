//! The hybrid estimator's loss estimates and choice across spacings.

use clusterjs::rng::{gaussian_noise, trial_rng};
use clusterjs::{default_delta, select_hybrid, ObservationVector};

fn main() -> clusterjs::Result<()> {
    let n = 1000;
    let delta = default_delta(n);
    for tau in [0.25, 1.0, 3.0] {
        let theta: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { tau } else { -tau }).collect();
        let w = gaussian_noise(&mut trial_rng(5, 0), n, 1.0);
        let y: Vec<f64> = theta.iter().zip(&w).map(|(t, e)| t + e).collect();
        let y = ObservationVector::new(y, 1.0)?;
        let (sel, out) = select_hybrid(&y, &[1, 2, 4], delta)?;
        println!(
            "tau {tau:<5} chose L = {} estimates {:.4?} loss {:.4}",
            sel.chosen,
            sel.losses.per_candidate,
            out.normalized_loss(&theta)
        );
    }
    Ok(())
}

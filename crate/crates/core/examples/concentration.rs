//! Deviation of each split statistic from its limit as n grows.

use clusterjs::sim::{check_concentration, ConcentrationConfig, DeltaRule, Statistic, ThetaSpec};

fn main() -> clusterjs::Result<()> {
    for statistic in Statistic::ALL {
        let report = check_concentration(&ConcentrationConfig {
            statistic,
            theta: ThetaSpec::two_point(2.0, 1.0),
            sigma: 1.0,
            delta_rule: DeltaRule::Explicit(0.1),
            n_grid: vec![100, 1000, 10000],
            trials: 100,
            seed: 3,
            epsilon: 0.05,
        })?;
        let devs: Vec<String> = report
            .rows
            .iter()
            .map(|r| format!("{:.4}", r.mean_abs_deviation))
            .collect();
        println!("{:<20} {} shrinks: {}", statistic.name(), devs.join(" "), report.deviation_shrinks);
    }
    Ok(())
}

//! Seeded Monte Carlo sweep over τ with theory rows, printed as CSV.

use clusterjs::sim::{run_experiment, DeltaRule, ExperimentConfig, Sweep, SweepVariable, ThetaSpec};

fn main() -> clusterjs::Result<()> {
    let config = ExperimentConfig {
        n: 500,
        sigma: 1.0,
        trials: 200,
        seed: 1,
        delta_rule: DeltaRule::PaperDefault,
        estimators: ["js_plus", "lindley_plus", "cluster2", "hybrid2"]
            .iter()
            .map(|s| s.parse())
            .collect::<clusterjs::Result<_>>()?,
        theta: ThetaSpec::two_point(1.0, 0.5),
        sweep: Some(Sweep::range(SweepVariable::Tau, 0.0, 4.0, 1.0)),
    };
    print!("{}", run_experiment(&config)?.to_table().render());
    Ok(())
}

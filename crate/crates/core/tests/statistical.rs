//! Monte Carlo checks with tolerances set from the reported standard errors.

use clusterjs::rng::{gaussian_noise, theta_rng, trial_rng};
use clusterjs::sim::figures::fig7_arrangements;
use clusterjs::sim::{
    figure_panels, generate_theta, run_experiment, DeltaRule, EstimatorLabel, ExperimentConfig,
    FigureId, FigureOverrides, Sweep, SweepVariable, ThetaSpec,
};
use clusterjs::theory::{js_exact_risk_mc, ThetaVector};
use clusterjs::{default_delta, estimate_cluster_js, estimate_lindley, select_hybrid, ObservationVector};

fn config(n: usize, trials: usize, theta: ThetaSpec, estimators: &[&str]) -> ExperimentConfig {
    ExperimentConfig {
        n,
        sigma: 1.0,
        trials,
        seed: 31,
        delta_rule: DeltaRule::PaperDefault,
        estimators: estimators.iter().map(|s| s.parse().unwrap()).collect(),
        theta,
        sweep: None,
    }
}

#[test]
fn js_at_origin_matches_exact_risk_identity() {
    let r = run_experiment(&config(10, 20_000, ThetaSpec::constant(0.0), &["js"])).unwrap();
    let e = &r.points[0].estimators[0];
    assert!((e.mean_loss - 0.2).abs() < 3.0 * e.std_error + 1e-3, "{e:?}");

    let theta = ThetaVector::new(vec![0.0; 10]).unwrap();
    let exact = js_exact_risk_mc(&theta, 1.0, 20_000, 3).unwrap();
    assert!((exact.mean / 10.0 - 0.2).abs() < 3.0 * exact.std_error / 10.0 + 1e-3);
}

#[test]
fn lindley_on_constant_theta_vanishes() {
    let r = run_experiment(&config(1000, 500, ThetaSpec::constant(-4.0), &["lindley_plus"])).unwrap();
    assert!(r.points[0].estimators[0].mean_loss < 0.02);
}

#[test]
fn hybrid_usually_picks_the_better_candidate() {
    let n = 1000;
    let delta = default_delta(n);
    let trials = 300;
    let spec = ThetaSpec::clustered(1.0, vec![1.0, -1.0], vec![0.5, 0.5], vec![0.5, 0.5]);
    let candidates = [1, 2];
    let mut checked = 0;
    for tau in [0.5, 1.0, 1.5, 2.0, 3.0, 4.0] {
        let theta = generate_theta(&spec.with_tau(tau), n, &mut theta_rng(2)).unwrap();
        let theory: Vec<f64> = candidates
            .iter()
            .map(|&l| EstimatorLabel::Cluster(l).theory_loss(&theta, 1.0).unwrap())
            .collect();
        if (theory[0] - theory[1]).abs() < 0.1 {
            continue;
        }
        let mut agree = 0;
        for t in 0..trials {
            let w = gaussian_noise(&mut trial_rng(2, t), n, 1.0);
            let y: Vec<f64> = theta.values().iter().zip(&w).map(|(a, b)| a + b).collect();
            let y = ObservationVector::new(y, 1.0).unwrap();
            let l1 = estimate_lindley(&y, true).unwrap().normalized_loss(theta.values());
            let l2 = estimate_cluster_js(&y, 2, delta).unwrap().normalized_loss(theta.values());
            let better = if l1 <= l2 { 1 } else { 2 };
            let (sel, _) = select_hybrid(&y, &candidates, delta).unwrap();
            agree += usize::from(sel.chosen == better);
        }
        let freq = agree as f64 / trials as f64;
        assert!(freq > 0.9, "tau {tau}: picked the better candidate in {freq}");
        checked += 1;
    }
    assert!(checked >= 2, "too few tau values with a clear gap");
}

#[test]
fn fig1_all_equal_panel_at_origin() {
    let o = FigureOverrides {
        trials: Some(2000),
        sweep: Some(vec![0.0]),
        ..FigureOverrides::default()
    };
    let panels = figure_panels(FigureId::Fig1, &o).unwrap();
    for row in &panels[1].table.rows {
        assert!(row.mean_loss <= 1.0, "{row:?}");
    }
    assert_eq!(panels[1].table.rows.len(), 4);
}

#[test]
fn lindley_gap_to_theory_shrinks_with_n() {
    let (spec, _) = fig7_arrangements()[0].clone();
    let mut cfg = config(1, 1000, spec, &["lindley_plus"]);
    cfg.sweep = Some(Sweep::values(SweepVariable::N, vec![50.0, 200.0, 1000.0]));
    let r = run_experiment(&cfg).unwrap();
    let gaps: Vec<f64> = r
        .points
        .iter()
        .map(|p| (p.estimators[0].mean_loss - p.theory_for("lindley_plus").unwrap()).abs())
        .collect();
    assert!(gaps[2] < gaps[0], "gaps {gaps:?}");
    assert!(gaps[1] < gaps[0], "gaps {gaps:?}");
}

#[test]
fn positive_part_never_worse_beyond_noise() {
    let spec = ThetaSpec::clustered(1.0, vec![1.0, -1.0], vec![0.5, 0.5], vec![0.5, 0.5]);
    let mut cfg = config(10, 2000, spec, &["js", "js_plus", "lindley", "lindley_plus"]);
    cfg.sweep = Some(Sweep::range(SweepVariable::Tau, 0.0, 3.0, 1.0));
    for p in run_experiment(&cfg).unwrap().points {
        for (plain, plus) in [("js", "js_plus"), ("lindley", "lindley_plus")] {
            let a = p.estimator(plain).unwrap();
            let b = p.estimator(plus).unwrap();
            assert!(b.mean_loss <= a.mean_loss + 3.0 * a.std_error, "tau {}: {a:?} vs {b:?}", p.tau);
        }
    }
}

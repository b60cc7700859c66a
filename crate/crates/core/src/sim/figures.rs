//! Data behind each figure, written as one CSV per panel.
//!
//! | id   | content                                                           |
//! |------|-------------------------------------------------------------------|
//! | fig1 | n = 10, JS/Lindley and positive parts vs ‖θ‖ (a: ±, b: all equal) |
//! | fig2 | two-cluster asymptotic loss vs τ, two-valued θ, several ρ         |
//! | fig3 | four-cluster asymptotic loss vs τ, two-valued θ                   |
//! | fig4 | four-cluster asymptotic loss vs τ, θ in {τ, ρτ, −ρτ, −τ}          |
//! | fig5 | two clusters at ±τ, width 0.5τ, for n = 10, 50, 100, 1000         |
//! | fig6 | four two-cluster / uniform arrangements at n = 1000               |
//! | fig7 | empirical loss and theory vs n for four arrangements              |
//! | fig8 | four clusters at n = 1000, widths 0.5τ and 0.25τ                  |

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{theta_rng, SAMPLER_DESCRIPTION};
use crate::sim::experiment::{
    run_experiment, DeltaRule, EstimatorLabel, ExperimentConfig, Sweep, SweepVariable, THETA_NOTE,
};
use crate::sim::table::Table;
use crate::sim::theta::{generate_theta, ThetaSpec};

pub const DEFAULT_SEED: u64 = 20_190_527;
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
    ];

    /// Figures computed from closed-form constants only.
    pub fn is_theory_only(self) -> bool {
        matches!(self, FigureId::Fig2 | FigureId::Fig3 | FigureId::Fig4)
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = FigureId::ALL.iter().position(|x| x == self).unwrap_or(0) + 1;
        write!(f, "fig{i}")
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown figure {s:?}, expected fig1..fig8")))
    }
}

/// Optional replacements for a figure's defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOverrides {
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    /// Dimension for the fixed-`n` figures; for fig5 it replaces the panel list.
    pub n: Option<usize>,
    /// Sweep grid (‖θ‖ for fig1, `n` for fig7, `τ` otherwise).
    pub sweep: Option<Vec<f64>>,
}

/// One output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    /// File stem, e.g. `fig5c`.
    pub name: String,
    pub table: Table,
}

fn tau_grid(stop: f64, step: f64) -> Vec<f64> {
    let count = (stop / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| step * i as f64).collect()
}

fn labels(names: &[&str]) -> Vec<EstimatorLabel> {
    names.iter().map(|s| s.parse().expect("built-in label")).collect()
}

struct Settings {
    trials: usize,
    seed: u64,
}

impl Settings {
    fn from(o: &FigureOverrides) -> Result<Self> {
        let trials = o.trials.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        Ok(Settings {
            trials,
            seed: o.seed.unwrap_or(DEFAULT_SEED),
        })
    }

    fn header(&self, t: &mut Table, figure: FigureId, panel: &str, arrangement: &str) {
        let id = format!("{figure}{panel}");
        t.comment(format!("figure: {id}"));
        t.comment(format!("arrangement: {arrangement}"));
        t.comment("sigma: 1");
        t.comment(format!("seed: {}", self.seed));
        if !figure.is_theory_only() {
            t.comment(format!("trials: {}", self.trials));
            t.comment(format!("sampler: {SAMPLER_DESCRIPTION}"));
            t.comment("delta: 5/sqrt(n)");
        }
        t.comment(THETA_NOTE);
    }
}

/// Monte Carlo panel over a τ (or n) sweep.
struct McPanel<'a> {
    suffix: &'a str,
    arrangement: String,
    n: usize,
    theta: ThetaSpec,
    estimators: &'a [&'a str],
    variable: SweepVariable,
    grid: Vec<f64>,
    with_theory: bool,
}

fn run_mc_panel(figure: FigureId, s: &Settings, p: McPanel<'_>) -> Result<Panel> {
    let cfg = ExperimentConfig {
        n: p.n,
        sigma: 1.0,
        trials: s.trials,
        seed: s.seed,
        delta_rule: DeltaRule::PaperDefault,
        estimators: labels(p.estimators),
        theta: p.theta,
        sweep: Some(Sweep::values(p.variable, p.grid)),
    };
    let result = run_experiment(&cfg)?;
    let mut t = Table::new(p.variable.name());
    s.header(&mut t, figure, p.suffix, &p.arrangement);
    for point in &result.points {
        let x = point.sweep_value.expect("sweep point");
        for e in &point.estimators {
            t.push(x, e.label.clone(), e.mean_loss, Some(e.std_error));
        }
        if p.with_theory {
            for th in &point.theory {
                t.push(x, format!("theory:{}", th.label), th.value, None);
            }
        }
    }
    Ok(Panel {
        name: format!("{figure}{}", p.suffix),
        table: t,
    })
}

/// Theory curves `label → θ spec as a function of τ`, one row per τ and label.
fn theory_panel(
    figure: FigureId,
    s: &Settings,
    arrangement: &str,
    n: usize,
    grid: &[f64],
    curves: &[(String, ThetaSpec, EstimatorLabel)],
) -> Result<Panel> {
    let mut t = Table::new("tau");
    s.header(&mut t, figure, "", arrangement);
    for &tau in grid {
        for (label, spec, estimator) in curves {
            let theta = generate_theta(&spec.with_tau(tau), n, &mut theta_rng(s.seed))?;
            t.push(tau, label.clone(), estimator.theory_loss(&theta, 1.0)?, None);
        }
    }
    Ok(Panel {
        name: figure.to_string(),
        table: t,
    })
}

fn fig1(s: &Settings, o: &FigureOverrides) -> Result<Vec<Panel>> {
    let n = o.n.unwrap_or(10);
    let norms = o.sweep.clone().unwrap_or_else(|| tau_grid(10.0, 0.5));
    let scale = (n as f64).sqrt();
    let estimators = ["js", "js_plus", "lindley", "lindley_plus"];
    let mut panels = Vec::new();
    for (suffix, spec, arrangement) in [
        ("a", ThetaSpec::two_point(1.0, 1.0), "half the entries at +||theta||/sqrt(n), half at -||theta||/sqrt(n)"),
        ("b", ThetaSpec::constant(1.0), "all entries equal to ||theta||/sqrt(n)"),
    ] {
        let mut panel = run_mc_panel(
            FigureId::Fig1,
            s,
            McPanel {
                suffix,
                arrangement: format!("{arrangement}; n = {n}; ml loss is 1"),
                n,
                theta: spec,
                estimators: &estimators,
                variable: SweepVariable::Tau,
                grid: norms.iter().map(|x| x / scale).collect(),
                with_theory: false,
            },
        )?;
        // Report the sweep as ‖θ‖ rather than τ.
        panel.table.sweep_variable = "theta_norm".into();
        let per_point = estimators.len();
        for (i, row) in panel.table.rows.iter_mut().enumerate() {
            row.x = norms[i / per_point];
        }
        panels.push(panel);
    }
    Ok(panels)
}

fn rho_label(rho: f64) -> String {
    format!("rho={rho}")
}

fn fig2(s: &Settings, o: &FigureOverrides) -> Result<Vec<Panel>> {
    let n = o.n.unwrap_or(1000);
    let grid = o.sweep.clone().unwrap_or_else(|| tau_grid(10.0, 0.25));
    let curves: Vec<_> = [0.1, 0.25, 0.5, 1.0]
        .into_iter()
        .map(|rho| (rho_label(rho), ThetaSpec::two_point(1.0, rho), EstimatorLabel::Cluster(2)))
        .collect();
    let arrangement = format!(
        "floor(n rho/(1+rho)) entries at tau, the rest at -rho tau; n = {n}; \
         value min(beta, beta/(alpha+1)) of the two-cluster estimator"
    );
    Ok(vec![theory_panel(FigureId::Fig2, s, &arrangement, n, &grid, &curves)?])
}

fn fig3(s: &Settings, o: &FigureOverrides) -> Result<Vec<Panel>> {
    let n = o.n.unwrap_or(1000);
    let grid = o.sweep.clone().unwrap_or_else(|| tau_grid(10.0, 0.25));
    let curves: Vec<_> = [0.1, 0.25, 0.5, 1.0]
        .into_iter()
        .map(|rho| (rho_label(rho), ThetaSpec::two_point(1.0, rho), EstimatorLabel::Cluster(4)))
        .collect();
    let arrangement = format!(
        "floor(n rho/(1+rho)) entries at tau, the rest at -rho tau; n = {n}; \
         value min(beta, beta/(alpha+1)) of the four-cluster estimator"
    );
    Ok(vec![theory_panel(FigureId::Fig3, s, &arrangement, n, &grid, &curves)?])
}

fn fig4(s: &Settings, o: &FigureOverrides) -> Result<Vec<Panel>> {
    let n = o.n.unwrap_or(1000);
    let grid = o.sweep.clone().unwrap_or_else(|| tau_grid(10.0, 0.25));
    let curves: Vec<_> = [0.1, 0.25, 0.5, 0.75]
        .into_iter()
        .map(|rho| {
            let spec = ThetaSpec::clustered(1.0, vec![1.0, rho, -rho, -1.0], vec![0.0; 4], vec![0.25; 4]);
            (rho_label(rho), spec, EstimatorLabel::Cluster(4))
        })
        .collect();
    let arrangement = format!(
        "equal numbers of entries at tau, rho tau, -rho tau, -tau; n = {n}; \
         value min(beta, beta/(alpha+1)) of the four-cluster estimator"
    );
    Ok(vec![theory_panel(FigureId::Fig4, s, &arrangement, n, &grid, &curves)?])
}

const SUFFIXES: [&str; 4] = ["a", "b", "c", "d"];

fn fig5(s: &Settings, o: &FigureOverrides) -> Result<Vec<Panel>> {
    let ns = o.n.map_or_else(|| vec![10, 50, 100, 1000], |n| vec![n]);
    let grid = o.sweep.clone().unwrap_or_else(|| tau_grid(4.0, 0.25));
    let spec = ThetaSpec::clustered(1.0, vec![1.0, -1.0], vec![0.5, 0.5], vec![0.5, 0.5]);
    ns.iter()
        .zip(SUFFIXES)
        .map(|(&n, suffix)| {
            run_mc_panel(
                FigureId::Fig5,
                s,
                McPanel {
                    suffix,
                    arrangement: format!("two clusters centred at tau and -tau, width 0.5 tau, n/2 points each; n = {n}"),
                    n,
                    theta: spec.clone(),
                    estimators: &["js", "lindley_plus", "cluster2", "hybrid2"],
                    variable: SweepVariable::Tau,
                    grid: grid.clone(),
                    with_theory: false,
                },
            )
        })
        .collect()
}

/// The four n = 1000 arrangements compared in fig6.
pub fn fig6_arrangements() -> [(ThetaSpec, &'static str); 4] {
    [
        (
            ThetaSpec::clustered(1.0, vec![0.25, -1.0], vec![0.5, 0.5], vec![0.3, 0.7]),
            "width 0.5 tau clusters: 30% around 0.25 tau, 70% around -tau",
        ),
        (
            ThetaSpec::two_point(1.0, 0.25),
            "20% of entries at tau, 80% at -0.25 tau",
        ),
        (
            ThetaSpec::clustered(1.0, vec![1.0, -1.0], vec![0.125, 0.125], vec![0.3, 0.7]),
            "width 0.125 tau clusters: 30% around tau, 70% around -tau",
        ),
        (ThetaSpec::uniform(1.0), "evenly spaced from -tau to tau"),
    ]
}

fn fig6(s: &Settings, o: &FigureOverrides) -> Result<Vec<Panel>> {
    let n = o.n.unwrap_or(1000);
    let grid = o.sweep.clone().unwrap_or_else(|| tau_grid(4.0, 0.25));
    fig6_arrangements()
        .into_iter()
        .zip(SUFFIXES)
        .map(|((spec, arrangement), suffix)| {
            run_mc_panel(
                FigureId::Fig6,
                s,
                McPanel {
                    suffix,
                    arrangement: format!("{arrangement}; n = {n}"),
                    n,
                    theta: spec,
                    estimators: &["js", "lindley_plus", "cluster2", "hybrid2"],
                    variable: SweepVariable::Tau,
                    grid: grid.clone(),
                    with_theory: false,
                },
            )
        })
        .collect()
}

/// The four fixed arrangements (τ = 1) of the convergence study in fig7.
pub fn fig7_arrangements() -> [(ThetaSpec, &'static str); 4] {
    let halves = vec![0.5, 0.5];
    [
        (
            ThetaSpec::clustered(1.0, vec![2.0, -2.0], vec![1.0, 1.0], halves.clone()),
            "two equal clusters of width 1 around 2 and -2",
        ),
        (
            ThetaSpec::clustered(1.0, vec![5.0, -5.0], vec![1.25, 1.25], halves.clone()),
            "two equal clusters of width 1.25 around 5 and -5",
        ),
        (
            ThetaSpec::clustered(1.0, vec![0.5, -0.5], vec![0.25, 0.25], halves),
            "two equal clusters of width 0.25 around 0.5 and -0.5",
        ),
        (ThetaSpec::uniform(2.0), "evenly spaced from -2 to 2"),
    ]
}

fn fig7(s: &Settings, o: &FigureOverrides) -> Result<Vec<Panel>> {
    let grid = o
        .sweep
        .clone()
        .unwrap_or_else(|| vec![50.0, 100.0, 200.0, 500.0, 1000.0, 2000.0]);
    fig7_arrangements()
        .into_iter()
        .zip(SUFFIXES)
        .map(|((spec, arrangement), suffix)| {
            run_mc_panel(
                FigureId::Fig7,
                s,
                McPanel {
                    suffix,
                    arrangement: arrangement.to_string(),
                    n: 1,
                    theta: spec,
                    estimators: &["lindley_plus", "cluster2", "hybrid2"],
                    variable: SweepVariable::N,
                    grid: grid.clone(),
                    with_theory: true,
                },
            )
        })
        .collect()
}

fn fig8(s: &Settings, o: &FigureOverrides) -> Result<Vec<Panel>> {
    let n = o.n.unwrap_or(1000);
    let grid = o.sweep.clone().unwrap_or_else(|| tau_grid(4.0, 0.25));
    let centers = vec![1.5, 0.9, -0.5, -1.25];
    [0.5, 0.25]
        .into_iter()
        .zip(SUFFIXES)
        .map(|(width, suffix)| {
            run_mc_panel(
                FigureId::Fig8,
                s,
                McPanel {
                    suffix,
                    arrangement: format!(
                        "four equal clusters of width {width} tau centred at 1.5, 0.9, -0.5, -1.25 times tau; n = {n}"
                    ),
                    n,
                    theta: ThetaSpec::clustered(1.0, centers.clone(), vec![width; 4], vec![0.25; 4]),
                    estimators: &["js", "lindley_plus", "cluster2", "cluster4", "hybrid4"],
                    variable: SweepVariable::Tau,
                    grid: grid.clone(),
                    with_theory: false,
                },
            )
        })
        .collect()
}

/// Compute every panel of `figure` in memory.
pub fn figure_panels(figure: FigureId, overrides: &FigureOverrides) -> Result<Vec<Panel>> {
    let s = Settings::from(overrides)?;
    match figure {
        FigureId::Fig1 => fig1(&s, overrides),
        FigureId::Fig2 => fig2(&s, overrides),
        FigureId::Fig3 => fig3(&s, overrides),
        FigureId::Fig4 => fig4(&s, overrides),
        FigureId::Fig5 => fig5(&s, overrides),
        FigureId::Fig6 => fig6(&s, overrides),
        FigureId::Fig7 => fig7(&s, overrides),
        FigureId::Fig8 => fig8(&s, overrides),
    }
}

/// Write `<out_dir>/<panel>.csv` for every panel of `figure` and return the paths.
pub fn emit_figure_data(figure: FigureId, overrides: &FigureOverrides, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let panels = figure_panels(figure, overrides)?;
    let mut paths = Vec::with_capacity(panels.len());
    for p in panels {
        let path = out_dir.join(format!("{}.csv", p.name));
        p.table.write_to(&path)?;
        paths.push(path);
    }
    Ok(paths)
}

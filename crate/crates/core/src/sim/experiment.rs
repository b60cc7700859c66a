//! Seeded Monte Carlo runner for averaged normalised loss.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::{default_delta, estimate_cluster_js};
use crate::error::{Error, Result};
use crate::estimators::{
    estimate_js, estimate_js_positive, estimate_lindley, estimate_ml, EstimatorOutput,
    ObservationVector,
};
use crate::hybrid::{select_hybrid, DEFAULT_CANDIDATES};
use crate::rng::{gaussian_noise, theta_rng, trial_rng, SAMPLER_DESCRIPTION};
use crate::sim::table::Table;
use crate::sim::theta::{generate_theta, ThetaSpec};
use crate::theory::{
    asymptotic_loss, separator_limits, theory_l_cluster, theory_two_cluster, LossKind,
    McEstimate, ThetaVector,
};

/// Estimators the harness knows how to run.
///
/// String forms: `ml`, `js`, `js_plus`, `lindley`, `lindley_plus`,
/// `cluster<L>`, `hybrid<L>` (candidates `1, 2, …, L`), `hybrid` (the default
/// `{1, 2, 4}`) and `hybrid:1,2,8` for an explicit candidate list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EstimatorLabel {
    Ml,
    Js,
    JsPlus,
    Lindley,
    LindleyPlus,
    Cluster(usize),
    Hybrid(Vec<usize>),
}

fn powers_up_to(max: usize) -> Vec<usize> {
    std::iter::successors(Some(1usize), |l| Some(l * 2))
        .take_while(|&l| l <= max)
        .collect()
}

fn power_of_two(s: &str, what: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(l) if l >= 1 && l.is_power_of_two() => Ok(l),
        _ => Err(Error::Config(format!(
            "{what} needs a power-of-two cluster count, got {s:?}"
        ))),
    }
}

impl FromStr for EstimatorLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ml" => EstimatorLabel::Ml,
            "js" => EstimatorLabel::Js,
            "js_plus" => EstimatorLabel::JsPlus,
            "lindley" => EstimatorLabel::Lindley,
            "lindley_plus" => EstimatorLabel::LindleyPlus,
            "hybrid" => EstimatorLabel::Hybrid(DEFAULT_CANDIDATES.to_vec()),
            _ => {
                if let Some(list) = s.strip_prefix("hybrid:") {
                    let mut c = list
                        .split(',')
                        .map(|p| power_of_two(p.trim(), "hybrid"))
                        .collect::<Result<Vec<_>>>()?;
                    c.sort_unstable();
                    c.dedup();
                    EstimatorLabel::Hybrid(c)
                } else if let Some(l) = s.strip_prefix("hybrid") {
                    EstimatorLabel::Hybrid(powers_up_to(power_of_two(l, "hybrid")?))
                } else if let Some(l) = s.strip_prefix("cluster") {
                    EstimatorLabel::Cluster(power_of_two(l, "cluster")?)
                } else {
                    return Err(Error::Config(format!("unknown estimator label {s:?}")));
                }
            }
        })
    }
}

impl fmt::Display for EstimatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorLabel::Ml => f.write_str("ml"),
            EstimatorLabel::Js => f.write_str("js"),
            EstimatorLabel::JsPlus => f.write_str("js_plus"),
            EstimatorLabel::Lindley => f.write_str("lindley"),
            EstimatorLabel::LindleyPlus => f.write_str("lindley_plus"),
            EstimatorLabel::Cluster(l) => write!(f, "cluster{l}"),
            EstimatorLabel::Hybrid(c) => {
                let max = c.iter().copied().max().unwrap_or(1);
                if *c == powers_up_to(max) {
                    write!(f, "hybrid{max}")
                } else {
                    let parts: Vec<String> = c.iter().map(|l| l.to_string()).collect();
                    write!(f, "hybrid:{}", parts.join(","))
                }
            }
        }
    }
}

impl TryFrom<String> for EstimatorLabel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<EstimatorLabel> for String {
    fn from(l: EstimatorLabel) -> String {
        l.to_string()
    }
}

impl EstimatorLabel {
    pub fn evaluate(&self, y: &ObservationVector, delta: f64) -> Result<EstimatorOutput> {
        match self {
            EstimatorLabel::Ml => Ok(estimate_ml(y)),
            EstimatorLabel::Js => estimate_js(y),
            EstimatorLabel::JsPlus => Ok(estimate_js_positive(y)),
            EstimatorLabel::Lindley => estimate_lindley(y, false),
            EstimatorLabel::LindleyPlus => estimate_lindley(y, true),
            EstimatorLabel::Cluster(l) => estimate_cluster_js(y, *l, delta),
            EstimatorLabel::Hybrid(c) => select_hybrid(y, c, delta).map(|(_, out)| out),
        }
    }

    /// Limiting normalised loss predicted by the asymptotic theory.
    pub fn theory_loss(&self, theta: &ThetaVector, sigma: f64) -> Result<f64> {
        let var = sigma * sigma;
        match self {
            EstimatorLabel::Ml => Ok(var),
            EstimatorLabel::Js | EstimatorLabel::JsPlus => {
                let g = theta.gamma();
                Ok(g * var / (g + var))
            }
            EstimatorLabel::Lindley | EstimatorLabel::LindleyPlus | EstimatorLabel::Cluster(1) => {
                let r = theta.rho();
                Ok(r * var / (r + var))
            }
            EstimatorLabel::Cluster(l) => cluster_theory_loss(theta, sigma, *l),
            EstimatorLabel::Hybrid(c) => c.iter().try_fold(f64::INFINITY, |best, &l| {
                Ok(best.min(EstimatorLabel::Cluster(l).theory_loss(theta, sigma)?))
            }),
        }
    }
}

fn cluster_theory_loss(theta: &ThetaVector, sigma: f64, clusters: usize) -> Result<f64> {
    let constants = if clusters == 2 {
        theory_two_cluster(theta, sigma)?
    } else {
        let mu = separator_limits(theta, sigma, clusters)?;
        theory_l_cluster(theta, sigma, &mu)?
    };
    Ok(asymptotic_loss(LossKind::Cluster, &constants, sigma))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DeltaRule {
    /// `5/√n`.
    #[default]
    PaperDefault,
    Explicit(f64),
}

impl DeltaRule {
    pub fn resolve(self, n: usize) -> Result<f64> {
        let delta = match self {
            DeltaRule::PaperDefault => default_delta(n),
            DeltaRule::Explicit(d) => d,
        };
        if delta.is_finite() && delta > 0.0 {
            Ok(delta)
        } else {
            Err(Error::Config(format!("delta must be positive, got {delta}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Tau,
    N,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Tau => "tau",
            SweepVariable::N => "n",
        }
    }
}

/// Inclusive grid `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0 && self.start.is_finite() && self.stop.is_finite()) || self.stop < self.start {
            return Err(Error::Config(format!("invalid sweep range {self:?}")));
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| self.start + self.step * i as f64).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Range>,
}

impl Sweep {
    pub fn values(variable: SweepVariable, values: Vec<f64>) -> Self {
        Sweep {
            variable,
            values,
            range: None,
        }
    }

    pub fn range(variable: SweepVariable, start: f64, stop: f64, step: f64) -> Self {
        Sweep {
            variable,
            values: Vec::new(),
            range: Some(Range { start, stop, step }),
        }
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        let grid = match (&self.range, self.values.is_empty()) {
            (Some(r), true) => r.values()?,
            (None, false) => self.values.clone(),
            _ => {
                return Err(Error::Config(
                    "sweep needs exactly one of `values` or `range`".into(),
                ))
            }
        };
        if grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("sweep values must be finite".into()));
        }
        if self.variable == SweepVariable::N
            && grid.iter().any(|&v| v < 1.0 || v.fract() != 0.0)
        {
            return Err(Error::Config("n sweep values must be positive integers".into()));
        }
        Ok(grid)
    }
}

fn default_trials() -> usize {
    1000
}

/// One Monte Carlo experiment. The JSON form mirrors the fields one to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub sigma: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub delta_rule: DeltaRule,
    pub estimators: Vec<EstimatorLabel>,
    pub theta: ThetaSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("experiment config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::Config(format!("sigma must be positive, got {}", self.sigma)));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("no estimators requested".into()));
        }
        if let Some(s) = &self.sweep {
            s.grid()?;
        }
        Ok(())
    }

    /// `(sweep value, n, θ spec)` for every point of the run.
    fn points(&self) -> Result<Vec<(Option<f64>, usize, ThetaSpec)>> {
        match &self.sweep {
            None => Ok(vec![(None, self.n, self.theta.clone())]),
            Some(s) => Ok(s
                .grid()?
                .into_iter()
                .map(|v| match s.variable {
                    SweepVariable::Tau => (Some(v), self.n, self.theta.with_tau(v)),
                    SweepVariable::N => (Some(v), v as usize, self.theta.clone()),
                })
                .collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorSummary {
    pub label: String,
    pub mean_loss: f64,
    pub std_error: f64,
    /// Trials that produced an estimate.
    pub trials: usize,
    /// Trials where the estimator returned an error (e.g. dimension too small).
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryValue {
    pub label: String,
    pub value: f64,
}

/// Averaged losses at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateResult {
    pub sweep_value: Option<f64>,
    pub n: usize,
    pub tau: f64,
    pub delta: f64,
    pub gamma: f64,
    pub rho: f64,
    pub estimators: Vec<EstimatorSummary>,
    pub theory: Vec<TheoryValue>,
}

impl AggregateResult {
    pub fn estimator(&self, label: &str) -> Option<&EstimatorSummary> {
        self.estimators.iter().find(|e| e.label == label)
    }

    pub fn theory_for(&self, label: &str) -> Option<f64> {
        self.theory.iter().find(|t| t.label == label).map(|t| t.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub points: Vec<AggregateResult>,
}

impl ExperimentResult {
    /// CSV with run metadata in `#` comments and theory rows labelled `theory:<estimator>`.
    pub fn to_table(&self) -> Table {
        let cfg = &self.config;
        let var = cfg.sweep.as_ref().map_or("n", |s| s.variable.name());
        let mut t = Table::new(var);
        t.comment(format!("seed: {}", cfg.seed));
        t.comment(format!("trials: {}", cfg.trials));
        t.comment(format!("sigma: {}", cfg.sigma));
        t.comment(format!("sampler: {SAMPLER_DESCRIPTION}"));
        t.comment(THETA_NOTE);
        for p in &self.points {
            let x = p.sweep_value.unwrap_or(p.n as f64);
            for e in &p.estimators {
                if e.failures > 0 {
                    t.comment(format!("{var}={x}: {} failed in {} trials", e.label, e.failures));
                }
            }
        }
        for p in &self.points {
            let x = p.sweep_value.unwrap_or(p.n as f64);
            for e in &p.estimators {
                t.push(x, e.label.clone(), e.mean_loss, Some(e.std_error));
            }
            for th in &p.theory {
                t.push(x, format!("theory:{}", th.label), th.value, None);
            }
        }
        t
    }
}

pub(crate) const THETA_NOTE: &str =
    "theta: fixed across trials; within-cluster placement drawn once per point from the theta stream";

/// Run every sweep point of `config`. Each trial `t` draws its noise from
/// the stream `(seed, t)`, so the output does not depend on thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let mut points = Vec::new();
    for (sweep_value, n, spec) in config.points()? {
        let theta = generate_theta(&spec, n, &mut theta_rng(config.seed))?;
        let delta = config.delta_rule.resolve(n)?;
        let mut point = run_point(config, &theta, delta)?;
        point.sweep_value = sweep_value;
        point.tau = spec.tau;
        points.push(point);
    }
    Ok(ExperimentResult {
        config: config.clone(),
        points,
    })
}

fn run_point(config: &ExperimentConfig, theta: &ThetaVector, delta: f64) -> Result<AggregateResult> {
    let sigma = config.sigma;
    let labels = &config.estimators;
    let per_trial: Vec<Vec<Option<f64>>> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(config.seed, t);
            let w = gaussian_noise(&mut rng, theta.len(), sigma);
            let y: Vec<f64> = theta.values().iter().zip(&w).map(|(a, b)| a + b).collect();
            let y = ObservationVector::new(y, sigma)?;
            Ok(labels
                .iter()
                .map(|l| {
                    l.evaluate(&y, delta)
                        .ok()
                        .map(|out| out.normalized_loss(theta.values()))
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let estimators = labels
        .iter()
        .enumerate()
        .map(|(j, label)| {
            let losses: Vec<f64> = per_trial.iter().filter_map(|r| r[j]).collect();
            let (mean_loss, std_error) = if losses.is_empty() {
                (f64::NAN, f64::NAN)
            } else {
                let mc = McEstimate::from_samples(&losses);
                (mc.mean, mc.std_error)
            };
            EstimatorSummary {
                label: label.to_string(),
                mean_loss,
                std_error,
                trials: losses.len(),
                failures: config.trials - losses.len(),
            }
        })
        .collect();

    let theory = labels
        .iter()
        .filter_map(|label| {
            label.theory_loss(theta, sigma).ok().map(|value| TheoryValue {
                label: label.to_string(),
                value,
            })
        })
        .collect();

    Ok(AggregateResult {
        sweep_value: None,
        n: theta.len(),
        tau: f64::NAN,
        delta,
        gamma: theta.gamma(),
        rho: theta.rho(),
        estimators,
        theory,
    })
}

//! Empirical checks that the statistics used to build the attractors
//! concentrate around their deterministic limits as `n` grows.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{mean, pairwise_sum, pairwise_sum_by};
use crate::qfunc::{phi, q};
use crate::rng::{gaussian_noise, theta_rng, trial_rng};
use crate::sim::experiment::DeltaRule;
use crate::sim::theta::{generate_theta, ThetaSpec};
use crate::theory::ThetaVector;

/// Statistics split at the sample mean `ȳ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `(1/n) Σ y_i 1{y_i > ȳ}`
    Lemma1UpperSum,
    /// `(1/n) Σ y_i 1{y_i ≤ ȳ}`
    Lemma1LowerSum,
    /// `(1/n) Σ θ_i 1{y_i > ȳ}`
    Lemma1UpperTheta,
    /// `(1/n) Σ θ_i 1{y_i ≤ ȳ}`
    Lemma1LowerTheta,
    /// `(1/n) Σ 1{y_i > ȳ}`
    Lemma1UpperCount,
    /// `(1/n) Σ 1{y_i ≤ ȳ}`
    Lemma1LowerCount,
    /// `(σ²/2nδ) Σ 1{|y_i − ȳ| ≤ δ}`
    Lemma2,
}

impl Statistic {
    pub const ALL: [Statistic; 7] = [
        Statistic::Lemma1UpperSum,
        Statistic::Lemma1LowerSum,
        Statistic::Lemma1UpperTheta,
        Statistic::Lemma1LowerTheta,
        Statistic::Lemma1UpperCount,
        Statistic::Lemma1LowerCount,
        Statistic::Lemma2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Lemma1UpperSum => "lemma1_upper_sum",
            Statistic::Lemma1LowerSum => "lemma1_lower_sum",
            Statistic::Lemma1UpperTheta => "lemma1_upper_theta",
            Statistic::Lemma1LowerTheta => "lemma1_lower_theta",
            Statistic::Lemma1UpperCount => "lemma1_upper_count",
            Statistic::Lemma1LowerCount => "lemma1_lower_count",
            Statistic::Lemma2 => "lemma2",
        }
    }

    /// Empirical value on one draw `y = θ + w`.
    pub fn empirical(self, theta: &[f64], y: &[f64], sigma: f64, delta: f64) -> f64 {
        let n = y.len();
        let ybar = mean(y);
        let upper = |i: usize| y[i] > ybar;
        let sum = match self {
            Statistic::Lemma1UpperSum => pairwise_sum_by(n, &|i| if upper(i) { y[i] } else { 0.0 }),
            Statistic::Lemma1LowerSum => pairwise_sum_by(n, &|i| if upper(i) { 0.0 } else { y[i] }),
            Statistic::Lemma1UpperTheta => pairwise_sum_by(n, &|i| if upper(i) { theta[i] } else { 0.0 }),
            Statistic::Lemma1LowerTheta => pairwise_sum_by(n, &|i| if upper(i) { 0.0 } else { theta[i] }),
            Statistic::Lemma1UpperCount => (0..n).filter(|&i| upper(i)).count() as f64,
            Statistic::Lemma1LowerCount => (0..n).filter(|&i| !upper(i)).count() as f64,
            Statistic::Lemma2 => {
                let window = y.iter().filter(|&&v| (v - ybar).abs() <= delta).count() as f64;
                return sigma * sigma * window / (2.0 * n as f64 * delta);
            }
        };
        sum / n as f64
    }

    /// Deterministic limit, written with `u_i = (θ̄ − θ_i)/σ`.
    pub fn predicted(self, theta: &ThetaVector, sigma: f64) -> f64 {
        let t = theta.values();
        let n = t.len();
        let tbar = theta.mean();
        let u = |i: usize| (tbar - t[i]) / sigma;
        let sum = match self {
            Statistic::Lemma1UpperSum => pairwise_sum_by(n, &|i| t[i] * q(u(i)) + sigma * phi(u(i))),
            Statistic::Lemma1LowerSum => pairwise_sum_by(n, &|i| t[i] * q(-u(i)) - sigma * phi(u(i))),
            Statistic::Lemma1UpperTheta => pairwise_sum_by(n, &|i| t[i] * q(u(i))),
            Statistic::Lemma1LowerTheta => pairwise_sum_by(n, &|i| t[i] * q(-u(i))),
            Statistic::Lemma1UpperCount => pairwise_sum_by(n, &|i| q(u(i))),
            Statistic::Lemma1LowerCount => pairwise_sum_by(n, &|i| q(-u(i))),
            Statistic::Lemma2 => sigma * pairwise_sum_by(n, &|i| phi(u(i))),
        };
        sum / n as f64
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        Statistic::ALL
            .into_iter()
            .find(|st| st.name() == norm)
            .ok_or_else(|| Error::Config(format!("unknown statistic {s:?}")))
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcentrationConfig {
    pub statistic: Statistic,
    pub theta: ThetaSpec,
    pub sigma: f64,
    #[serde(default)]
    pub delta_rule: DeltaRule,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Tolerance for the "fraction within ε" column.
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub delta: f64,
    pub predicted: f64,
    pub mean_statistic: f64,
    pub mean_abs_deviation: f64,
    pub max_abs_deviation: f64,
    pub fraction_within: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub statistic: Statistic,
    pub epsilon: f64,
    pub rows: Vec<ConcentrationRow>,
    /// True when the mean absolute deviation falls from the smallest to the
    /// largest `n`, and its median over the upper half of the grid is below
    /// the median over the lower half.
    pub deviation_shrinks: bool,
}

impl ConcentrationReport {
    pub fn row(&self, n: usize) -> Option<&ConcentrationRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn shrinks(rows: &[ConcentrationRow]) -> bool {
    if rows.len() < 2 {
        return false;
    }
    let devs: Vec<f64> = rows.iter().map(|r| r.mean_abs_deviation).collect();
    let half = devs.len() / 2;
    let lower = median(devs[..half].to_vec());
    let upper = median(devs[devs.len() - half..].to_vec());
    devs[devs.len() - 1] < devs[0] && upper < lower
}

pub fn check_concentration(config: &ConcentrationConfig) -> Result<ConcentrationReport> {
    if config.n_grid.is_empty() || config.n_grid.iter().any(|&n| n < 2) {
        return Err(Error::Config("n_grid needs entries of at least 2".into()));
    }
    if config.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if !(config.sigma.is_finite() && config.sigma > 0.0) {
        return Err(Error::Config(format!("sigma must be positive, got {}", config.sigma)));
    }
    if !(config.epsilon.is_finite() && config.epsilon > 0.0) {
        return Err(Error::Config(format!("epsilon must be positive, got {}", config.epsilon)));
    }
    let mut grid = config.n_grid.clone();
    grid.sort_unstable();
    grid.dedup();

    let mut rows = Vec::with_capacity(grid.len());
    for n in grid {
        let theta = generate_theta(&config.theta, n, &mut theta_rng(config.seed))?;
        let delta = config.delta_rule.resolve(n)?;
        let predicted = config.statistic.predicted(&theta, config.sigma);
        let values: Vec<f64> = (0..config.trials as u64)
            .into_par_iter()
            .map(|t| {
                let w = gaussian_noise(&mut trial_rng(config.seed, t), n, config.sigma);
                let y: Vec<f64> = theta.values().iter().zip(&w).map(|(a, b)| a + b).collect();
                config.statistic.empirical(theta.values(), &y, config.sigma, delta)
            })
            .collect();
        let devs: Vec<f64> = values.iter().map(|v| (v - predicted).abs()).collect();
        rows.push(ConcentrationRow {
            n,
            delta,
            predicted,
            mean_statistic: mean(&values),
            mean_abs_deviation: pairwise_sum(&devs) / devs.len() as f64,
            max_abs_deviation: devs.iter().copied().fold(0.0, f64::max),
            fraction_within: devs.iter().filter(|&&d| d <= config.epsilon).count() as f64 / devs.len() as f64,
        });
    }
    Ok(ConcentrationReport {
        statistic: config.statistic,
        epsilon: config.epsilon,
        deviation_shrinks: shrinks(&rows),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg(statistic: Statistic, n_grid: Vec<usize>) -> ConcentrationConfig {
        ConcentrationConfig {
            statistic,
            theta: ThetaSpec::constant(0.0),
            sigma: 1.0,
            delta_rule: DeltaRule::Explicit(0.05),
            n_grid,
            trials: 50,
            seed: 5,
            epsilon: 0.02,
        }
    }

    #[test]
    fn predicted_values_at_origin() {
        let theta = ThetaVector::new(vec![0.0; 10]).unwrap();
        let s = 1.0 / (2.0 * PI).sqrt();
        assert!((Statistic::Lemma1UpperSum.predicted(&theta, 1.0) - s).abs() < 1e-15);
        assert!((Statistic::Lemma1LowerSum.predicted(&theta, 1.0) + s).abs() < 1e-15);
        assert_eq!(Statistic::Lemma1UpperCount.predicted(&theta, 1.0), 0.5);
        assert!((Statistic::Lemma2.predicted(&theta, 2.0) - 2.0 * s).abs() < 1e-15);
    }

    #[test]
    fn split_statistics_add_up() {
        let theta = [1.0, -2.0, 0.5, 3.0];
        let y = [1.3, -2.2, 0.1, 2.9];
        let up = Statistic::Lemma1UpperSum.empirical(&theta, &y, 1.0, 0.1);
        let lo = Statistic::Lemma1LowerSum.empirical(&theta, &y, 1.0, 0.1);
        assert!((up + lo - mean(&y)).abs() < 1e-15);
        let cu = Statistic::Lemma1UpperCount.empirical(&theta, &y, 1.0, 0.1);
        let cl = Statistic::Lemma1LowerCount.empirical(&theta, &y, 1.0, 0.1);
        assert_eq!(cu + cl, 1.0);
    }

    #[test]
    fn upper_count_concentrates_at_half() {
        let r = check_concentration(&cfg(Statistic::Lemma1UpperCount, vec![100, 10_000])).unwrap();
        let big = r.row(10_000).unwrap();
        assert!((big.mean_statistic - 0.5).abs() < 0.02);
        assert!(r.deviation_shrinks);
    }

    #[test]
    fn names_parse_with_either_separator() {
        assert_eq!("lemma1-upper-sum".parse::<Statistic>().unwrap(), Statistic::Lemma1UpperSum);
        assert_eq!("lemma2".parse::<Statistic>().unwrap(), Statistic::Lemma2);
        assert!("lemma3".parse::<Statistic>().is_err());
    }

    #[test]
    fn invalid_grid_rejected() {
        assert!(check_concentration(&cfg(Statistic::Lemma2, vec![])).is_err());
        assert!(check_concentration(&cfg(Statistic::Lemma2, vec![1])).is_err());
    }
}

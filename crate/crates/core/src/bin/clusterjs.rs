use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use clusterjs::cluster::{default_delta, fit_cluster_js};
use clusterjs::hybrid::select_hybrid;
use clusterjs::io::read_vector;
use clusterjs::sim::{
    check_concentration, emit_figure_data, run_experiment, ConcentrationConfig, DeltaRule,
    EstimatorLabel, ExperimentConfig, FigureId, FigureOverrides, Statistic, ThetaSpec,
};
use clusterjs::sim::theta::generate_theta;
use clusterjs::theory::{separator_limits, theory_l_cluster, theory_two_cluster, ThetaVector};
use clusterjs::{rng, Error, ObservationVector, Result};

#[derive(Parser)]
#[command(name = "clusterjs", version, about = "Cluster-based James-Stein shrinkage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate θ from one observation vector and print JSON diagnostics.
    Estimate {
        /// Single-column CSV or JSON array of reals.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sigma: f64,
        /// ml, js, js_plus, lindley, lindley_plus, cluster<L>, hybrid<L>, hybrid.
        #[arg(long, default_value = "hybrid")]
        estimator: String,
        /// δ-window half-width; defaults to 5/√n.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Run an experiment config (JSON) and print or write the CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print asymptotic constants and losses for a θ arrangement.
    Theory {
        /// ThetaSpec JSON file.
        #[arg(long, conflicts_with = "theta_values")]
        spec: Option<PathBuf>,
        /// Explicit θ as a CSV column or JSON array.
        #[arg(long)]
        theta_values: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Seed for within-cluster placement.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4])]
        clusters: Vec<usize>,
    },
    /// Write figure CSVs.
    Figures {
        /// fig1..fig8, or `all`.
        #[arg(long, default_value = "all")]
        figure: String,
        #[arg(long, default_value = "figures")]
        out_dir: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        /// Replacement sweep grid, comma separated.
        #[arg(long, value_delimiter = ',')]
        sweep: Option<Vec<f64>>,
    },
    /// Check that a split statistic concentrates around its limit.
    CheckConcentration {
        /// lemma1_upper_sum, lemma1_lower_sum, lemma1_upper_theta,
        /// lemma1_lower_theta, lemma1_upper_count, lemma1_lower_count, lemma2.
        #[arg(long)]
        statistic: String,
        /// ThetaSpec JSON file; θ = 0 when absent.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Fixed δ; defaults to 5/√n per grid point.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [100usize, 1000, 10000])]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.03)]
        epsilon: f64,
    },
}

fn read_text(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.clone(),
        source: e,
    })
}

fn read_spec(path: &PathBuf) -> Result<ThetaSpec> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Error::Config(format!("theta spec: {e}")))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn estimate(input: PathBuf, sigma: f64, estimator: String, delta: Option<f64>) -> Result<()> {
    let label: EstimatorLabel = estimator.parse()?;
    let y = ObservationVector::new(read_vector(&input)?, sigma)?;
    let delta = delta.unwrap_or_else(|| default_delta(y.len()));
    let mut report = json!({ "estimator": label.to_string(), "n": y.len(), "sigma": sigma });
    let output = match &label {
        EstimatorLabel::Cluster(l) if *l > 1 => {
            let fit = fit_cluster_js(&y, *l, delta)?;
            report["delta"] = json!(delta);
            report["separators"] = json!(fit.partition.separators());
            report["cluster_counts"] = json!(fit.assignment.counts);
            report["attractors"] = json!(fit.attractors.attractors);
            report["boundary_counts"] = json!(fit.attractors.boundary_counts);
            report["empty_clusters"] = json!(fit.attractors.empty_clusters);
            fit.output
        }
        EstimatorLabel::Hybrid(c) => {
            let (sel, out) = select_hybrid(&y, c, delta)?;
            report["delta"] = json!(delta);
            report["selection"] = json!(sel);
            out
        }
        other => other.evaluate(&y, delta)?,
    };
    report["shrinkage_factor"] = json!(output.shrinkage_factor);
    report["estimate"] = json!(output.estimate);
    report["attracting_vector"] = json!(output.attracting_vector);
    print_json(&report);
    Ok(())
}

fn simulate(config: PathBuf, out: Option<PathBuf>) -> Result<()> {
    let cfg = ExperimentConfig::from_json(&read_text(&config)?)?;
    let table = run_experiment(&cfg)?.to_table();
    match out {
        Some(path) => table.write_to(&path),
        None => {
            print!("{}", table.render());
            Ok(())
        }
    }
}

fn theory(
    spec: Option<PathBuf>,
    theta_values: Option<PathBuf>,
    n: usize,
    sigma: f64,
    seed: u64,
    clusters: Vec<usize>,
) -> Result<()> {
    let theta = match (spec, theta_values) {
        (_, Some(path)) => ThetaVector::new(read_vector(&path)?)?,
        (Some(path), None) => generate_theta(&read_spec(&path)?, n, &mut rng::theta_rng(seed))?,
        (None, None) => return Err(Error::Config("theory needs --spec or --theta-values".into())),
    };
    let mut constants = serde_json::Map::new();
    let mut losses = serde_json::Map::new();
    for label in ["ml", "js_plus", "lindley_plus"] {
        let l: EstimatorLabel = label.parse()?;
        losses.insert(label.into(), json!(l.theory_loss(&theta, sigma)?));
    }
    for &l in &clusters {
        let c = if l == 2 {
            theory_two_cluster(&theta, sigma)?
        } else {
            theory_l_cluster(&theta, sigma, &separator_limits(&theta, sigma, l)?)?
        };
        constants.insert(format!("cluster{l}"), json!(c));
        let label = EstimatorLabel::Cluster(l);
        losses.insert(label.to_string(), json!(label.theory_loss(&theta, sigma)?));
    }
    let mut candidates = vec![1];
    candidates.extend(clusters.iter().copied());
    candidates.sort_unstable();
    candidates.dedup();
    let hybrid = EstimatorLabel::Hybrid(candidates);
    losses.insert(hybrid.to_string(), json!(hybrid.theory_loss(&theta, sigma)?));
    print_json(&json!({
        "n": theta.len(),
        "sigma": sigma,
        "gamma": theta.gamma(),
        "rho": theta.rho(),
        "constants": constants,
        "asymptotic_loss": losses,
    }));
    Ok(())
}

fn figures(
    figure: String,
    out_dir: PathBuf,
    overrides: FigureOverrides,
) -> Result<()> {
    let ids: Vec<FigureId> = if figure == "all" {
        FigureId::ALL.to_vec()
    } else {
        figure
            .split(',')
            .map(|f| f.trim().parse())
            .collect::<Result<_>>()?
    };
    for id in ids {
        for path in emit_figure_data(id, &overrides, &out_dir)? {
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate {
            input,
            sigma,
            estimator,
            delta,
        } => estimate(input, sigma, estimator, delta),
        Command::Simulate { config, out } => simulate(config, out),
        Command::Theory {
            spec,
            theta_values,
            n,
            sigma,
            seed,
            clusters,
        } => theory(spec, theta_values, n, sigma, seed, clusters),
        Command::Figures {
            figure,
            out_dir,
            trials,
            seed,
            n,
            sweep,
        } => figures(figure, out_dir, FigureOverrides { trials, seed, n, sweep }),
        Command::CheckConcentration {
            statistic,
            spec,
            sigma,
            delta,
            n_grid,
            trials,
            seed,
            epsilon,
        } => {
            let theta = match spec {
                Some(path) => read_spec(&path)?,
                None => ThetaSpec::constant(0.0),
            };
            let cfg = ConcentrationConfig {
                statistic: statistic.parse::<Statistic>()?,
                theta,
                sigma,
                delta_rule: delta.map_or(DeltaRule::PaperDefault, DeltaRule::Explicit),
                n_grid,
                trials,
                seed,
                epsilon,
            };
            let report = check_concentration(&cfg)?;
            print_json(&json!(report));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

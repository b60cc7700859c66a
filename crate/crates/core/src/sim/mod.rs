//! Seeded Monte Carlo harness: θ generators, experiment runner,
//! concentration checks and figure data.

pub mod concentration;
pub mod experiment;
pub mod figures;
pub mod table;
pub mod theta;

pub use concentration::{check_concentration, ConcentrationConfig, ConcentrationReport, Statistic};
pub use experiment::{
    run_experiment, AggregateResult, DeltaRule, EstimatorLabel, ExperimentConfig, ExperimentResult,
    Sweep, SweepVariable,
};
pub use figures::{emit_figure_data, figure_panels, FigureId, FigureOverrides};
pub use table::{format_g9, Table};
pub use theta::{generate_theta, ThetaKind, ThetaSpec};

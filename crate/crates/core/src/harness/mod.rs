//! Experiment specs, recipes, the property suite, statistical checks and reports.

mod corpus;
mod density;
mod experiments;
mod recipes;
mod report;
mod spec;
mod stats;
mod suite;

pub use corpus::{attach_edges, sample_configurations, sample_corpus};
pub use density::{run_density_check, Functional};
pub use experiments::{run_diagnostics_experiment, run_displacement_experiment, DisplacementRow};
pub use recipes::{recipe, RECIPES};
pub use report::{write_csv, CheckSummary, DensityRow, ExperimentReport, StatRow};
pub use spec::{BoundarySource, ExperimentSpec, OutputPaths, Setup, TransformSettings};
pub use stats::{poisson_chi_square, Estimate};
pub use suite::{
    check_configuration, replay, run_property_suite, run_property_suite_on, summarize, write_replay, ConfigVerdict,
    ReplayArtifact, ROUND_TRIP_TOLERANCE,
};

use thiserror::Error;

use crate::config::ConfigError;
use crate::gibbs::GibbsError;
use crate::potential::PotentialError;
use crate::transform::TransformError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Gibbs(#[from] GibbsError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

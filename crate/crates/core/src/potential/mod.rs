//! Pair potentials with hard cores and their smooth decompositions.

mod constants;
mod decomposition;
mod model;
mod mollifier;
pub mod quad;
pub mod segment;

pub use constants::{
    derive_constants, evaluate_constants, gamma_for, DecompositionReport, DerivedConstants, SPIN_GRID,
};
pub use decomposition::{smooth_decompose, CoreShape, SmoothDecomposition, Smoothing, PSI_EXPONENT};
pub use model::{make_model, PotentialDescriptor, PotentialModel};
pub use mollifier::{Bump, Profile};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("infeasible decomposition: {bound} violated (value {value})")]
    Infeasible { bound: String, value: f64 },
}

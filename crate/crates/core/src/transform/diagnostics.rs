//! The per-configuration quantities `S₁` and `S₂`.

use serde::{Deserialize, Serialize};

use super::build::{apply_transform, build_transform};
use super::{Direction, TransformError, TransformParams};
use crate::config::MarkedConfiguration;
use crate::gibbs::hamiltonian_bar;
use crate::potential::SmoothDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `|H^Ū(𝒯Y) + H^Ū(𝒯⁻Y) − 2H^Ū(Y)|`.
    pub s1: f64,
    /// `|log(θ θ⁻)|`.
    pub s2: f64,
    pub theta: f64,
    pub theta_minus: f64,
}

/// Builds the recursion once; `𝒯` and `𝒯⁻` share it and differ only in the
/// sign of the displacement.
pub fn diagnostics(
    config: &MarkedConfiguration,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
) -> Result<Diagnostics, TransformError> {
    let fwd = params.with_direction(Direction::Forward);
    let result = build_transform(config, &fwd, decomp)?;
    let plus = apply_transform(config, &result, Direction::Forward);
    let minus = apply_transform(config, &result, Direction::Backward);
    let s1 = (hamiltonian_bar(decomp, &plus) + hamiltonian_bar(decomp, &minus) - 2.0 * hamiltonian_bar(decomp, config)).abs();
    let s2 = (result.theta.ln() + result.theta_opposite.ln()).abs();
    Ok(Diagnostics {
        s1,
        s2,
        theta: result.theta,
        theta_minus: result.theta_opposite,
    })
}

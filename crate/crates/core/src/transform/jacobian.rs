//! Pivot slopes and the Radon–Nikodym density `φ`.

use super::build::{apply_transform, ActivePiece, TransformResult};
use super::profile::shift_proposal_derivative;
use super::TransformParams;
use crate::config::{MarkedConfiguration, Particle};
use crate::gibbs::hamiltonian_bar;
use crate::potential::SmoothDecomposition;

/// `∂_{e₁} t_k(y)` for the piece attaining `t_k` at the pivot `y`.
///
/// `source` is the particle generating a `Slowdown` piece and is ignored
/// otherwise. On the diagonals `|x₁| = |x₂|` the sup norm has no partial
/// derivative and the one-sided value along the vertical face, 0, is used.
pub fn pivot_slope(
    y: &Particle,
    piece: ActivePiece,
    source: Option<&Particle>,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
) -> f64 {
    match piece {
        ActivePiece::Base => {
            let [x1, x2] = y.x;
            if x1.abs() > x2.abs() {
                shift_proposal_derivative(y.sup_norm(), params.n, params.c) * x1.signum()
            } else {
                0.0
            }
        }
        ActivePiece::Cap { .. } => 0.0,
        ActivePiece::Slowdown { h, .. } => {
            let src = source.expect("a slow-down piece needs its source particle");
            h / params.eps * decomp.d_k_grad_e1(src, y)
        }
    }
}

/// `(θ, φ)` for a built transform, with
/// `φ(Y) = exp(−β(H^Ū(𝒯Y) − H^Ū(Y))) θ(Y)`.
pub fn jacobian_density(
    config: &MarkedConfiguration,
    result: &TransformResult,
    decomp: &SmoothDecomposition,
    beta: f64,
) -> (f64, f64) {
    let moved = apply_transform(config, result, result.direction);
    let dh = hamiltonian_bar(decomp, &moved) - hamiltonian_bar(decomp, config);
    (result.theta, (-beta * dh).exp() * result.theta)
}

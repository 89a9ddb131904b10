//! The shift transformation `𝒯ₙ`, its inverse, the good-configuration
//! classifier, the Jacobian density and the per-configuration diagnostics.

mod build;
mod checks;
mod diagnostics;
mod good;
mod invert;
mod jacobian;
mod profile;

pub use build::{apply_transform, build_transform, ActivePiece, ClusterRecord, PivotRecord, TransformResult};
pub use checks::{
    check_lower_bound, check_monotone, check_t2, check_t3, check_t4, check_t5, CheckOutcome, Violation,
    LIPSCHITZ_SLACK,
};
pub use diagnostics::{diagnostics, Diagnostics};
pub use good::{allowance, is_good, GoodnessVerdict, Witness};
pub use invert::{invert_transform, InverseResult};
pub use jacobian::{jacobian_density, pivot_slope};
pub use profile::{h_value, shift_proposal, shift_proposal_derivative, slowdown};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::ConfigError;
use crate::potential::SmoothDecomposition;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("invalid transform parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Shift along `+e₁` (`𝒯ₙ`) or `−e₁` (`𝒯ₙ⁻`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformParams {
    /// Window half-size.
    pub n: f64,
    /// Shift amplitude.
    pub c: f64,
    /// Lipschitz budget `δ`.
    pub delta: f64,
    /// The `ε` of `K_ε`.
    pub eps: f64,
    /// `c_K = ‖K_ε‖`.
    pub c_k: f64,
    pub direction: Direction,
    pub strict: bool,
}

impl TransformParams {
    /// Parameters with `ε` and `c_K` taken from the decomposition.
    pub fn new(n: f64, c: f64, delta: f64, decomp: &SmoothDecomposition, strict: bool) -> Result<Self, TransformError> {
        let p = TransformParams {
            n,
            c,
            delta,
            eps: decomp.eps(),
            c_k: decomp.c_k(),
            direction: Direction::Forward,
            strict,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_direction(self, direction: Direction) -> Self {
        TransformParams { direction, ..self }
    }

    pub fn validate(&self) -> Result<(), TransformError> {
        let bad = |msg: String| Err(TransformError::Parameter(msg));
        if !(self.n > 1.0 && self.n.is_finite()) {
            return bad(format!("n must exceed 1, got {}", self.n));
        }
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return bad(format!("c must be nonnegative, got {}", self.c));
        }
        if !(self.delta > 0.0 && self.delta <= 0.5) {
            return bad(format!("delta must lie in (0, 1/2], got {}", self.delta));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("eps must lie in (0, 1), got {}", self.eps));
        }
        if !(self.c_k >= 0.0 && self.c_k.is_finite()) {
            return bad(format!("c_K must be finite and nonnegative, got {}", self.c_k));
        }
        if self.strict {
            if !(self.delta < 1e-6) {
                return bad(format!("strict mode needs delta < 1e-6, got {}", self.delta));
            }
            if !(self.delta * self.c_k < 1.0) {
                return bad(format!("strict mode needs delta < 1/c_K, got c_K = {}", self.c_k));
            }
            if self.c > self.delta * self.delta {
                return bad(format!("strict mode needs c <= delta^2, got {}", self.c));
            }
            if self.n < self.delta.powi(-8) {
                return bad(format!("strict mode needs n >= delta^-8, got {}", self.n));
            }
        } else if self.t0_lipschitz() > self.delta {
            return bad(format!(
                "the proposal has slope {} which exceeds delta = {}",
                self.t0_lipschitz(),
                self.delta
            ));
        }
        Ok(())
    }

    /// `c √(log n)`, the value of `𝔱ₙ` on `[0, n^{2/3}]`.
    pub fn plateau(&self) -> f64 {
        self.c * self.n.ln().sqrt()
    }

    /// `𝔱ₙ(s)`.
    pub fn proposal(&self, s: f64) -> f64 {
        shift_proposal(s, self.n, self.c)
    }

    /// Largest slope of `𝔱ₙ`, attained at `s = n^{2/3}`.
    pub fn t0_lipschitz(&self) -> f64 {
        3.0 * self.c / (self.n.powf(2.0 / 3.0) * self.n.ln().sqrt())
    }
}

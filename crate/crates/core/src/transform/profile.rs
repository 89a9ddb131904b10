//! The shift proposal `𝔱ₙ` and the slow-down functions `𝔪_{y,τ}`.

use super::TransformParams;
use crate::config::Particle;
use crate::potential::SmoothDecomposition;

/// `𝔱ₙ(s) = (3c/√log n) log(n / (n^{2/3} ∨ (s ∧ n)))`. Negative arguments are
/// clamped to 0, where the proposal is already on its plateau.
pub fn shift_proposal(s: f64, n: f64, c: f64) -> f64 {
    let knee = n.powf(2.0 / 3.0);
    let s = s.max(0.0);
    if s <= knee {
        return c * n.ln().sqrt();
    }
    if s >= n {
        return 0.0;
    }
    3.0 * c / n.ln().sqrt() * (n / s).ln()
}

/// `𝔱ₙ′(s)`: `−3c/(s √log n)` strictly between the knee and `n`, else 0.
pub fn shift_proposal_derivative(s: f64, n: f64, c: f64) -> f64 {
    if s > n.powf(2.0 / 3.0) && s < n {
        -3.0 * c / (s * n.ln().sqrt())
    } else {
        0.0
    }
}

/// `h_{y,τ} = |𝔱ₙ(‖y‖∞ − c_K) − τ|`.
pub fn h_value(y: &Particle, tau: f64, params: &TransformParams) -> f64 {
    (params.proposal(y.sup_norm() - params.c_k) - tau).abs()
}

/// `𝔪_{y,τ}(y2)`, possibly `+∞`.
pub fn slowdown(y: &Particle, tau: f64, y2: &Particle, params: &TransformParams, decomp: &SmoothDecomposition) -> f64 {
    let h = h_value(y, tau, params);
    if h > params.delta * params.eps {
        return tau;
    }
    let d = decomp.d_k(y, y2);
    if d < params.eps {
        tau + h / params.eps * d
    } else {
        f64::INFINITY
    }
}

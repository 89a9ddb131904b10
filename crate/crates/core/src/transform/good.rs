//! The good-configuration classifier.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{TransformError, TransformParams};
use crate::config::{Adjacency, CellIndex, MarkedConfiguration, Particle};
use crate::potential::SmoothDecomposition;

/// A pair `(y, y′)` in one `B₊`-component with `‖y′‖∞` above the allowance of `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub y: u64,
    pub y_prime: u64,
    /// `(1/δ)(1 ∨ ‖y‖∞ log ‖y‖∞)`.
    pub allowance: f64,
    /// `‖y′‖∞`.
    pub reach: f64,
    /// Ids along a `B₊`-path from `y` to `y′`, both included.
    pub path: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodnessVerdict {
    pub good: bool,
    pub witness: Option<Witness>,
}

/// `(1/δ)(1 ∨ s log s)`.
pub fn allowance(s: f64, delta: f64) -> f64 {
    let v = if s > 1.0 { s * s.ln() } else { 0.0 };
    v.max(1.0) / delta
}

/// Adjacency of `B₊ = B ∪ K_ε` over the flat particle order.
pub(crate) fn b_plus(
    parts: &[Particle],
    config: &MarkedConfiguration,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
) -> Result<Adjacency, TransformError> {
    let mut adj = Adjacency::of(config)?;
    if params.c_k > 0.0 {
        let positions: Vec<[f64; 2]> = parts.iter().map(|p| p.x).collect();
        let index = CellIndex::from_points(&positions, params.c_k);
        for (i, p) in parts.iter().enumerate() {
            for j in index.within(p.x, params.c_k) {
                if j > i && decomp.d_k(p, &parts[j]) < params.eps {
                    adj.add(i, j);
                }
            }
        }
    }
    Ok(adj)
}

fn path(adj: &Adjacency, from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(i) = queue.pop_front() {
        if i == to {
            break;
        }
        for &j in adj.neighbors(i) {
            if prev[j] == usize::MAX {
                prev[j] = i;
                queue.push_back(j);
            }
        }
    }
    let mut out = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        out.push(cur);
    }
    out.reverse();
    out
}

/// Checks `‖y′‖∞ ≤ (1/δ)(1 ∨ ‖y‖∞ log ‖y‖∞)` for every ordered pair in every
/// `B₊`-component. Within a component the binding pair is the particle of
/// smallest norm against the one of largest norm, since the allowance is
/// nondecreasing. Components are scanned in flat order.
pub fn is_good(
    config: &MarkedConfiguration,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
) -> Result<GoodnessVerdict, TransformError> {
    let parts: Vec<Particle> = config.all().copied().collect();
    let adj = b_plus(&parts, config, params, decomp)?;
    let mut seen = vec![false; parts.len()];
    for start in 0..parts.len() {
        if seen[start] {
            continue;
        }
        let comp = adj.closure(&[start], |_| true);
        for &i in &comp {
            seen[i] = true;
        }
        let norm = |i: &usize| parts[*i].sup_norm();
        let lo = *comp.iter().min_by(|a, b| norm(a).total_cmp(&norm(b))).expect("nonempty");
        let hi = *comp.iter().max_by(|a, b| norm(a).total_cmp(&norm(b))).expect("nonempty");
        let bound = allowance(norm(&lo), params.delta);
        if norm(&hi) > bound {
            let ids = path(&adj, lo, hi).into_iter().map(|i| parts[i].id).collect();
            return Ok(GoodnessVerdict {
                good: false,
                witness: Some(Witness {
                    y: parts[lo].id,
                    y_prime: parts[hi].id,
                    allowance: bound,
                    reach: norm(&hi),
                    path: ids,
                }),
            });
        }
    }
    Ok(GoodnessVerdict {
        good: true,
        witness: None,
    })
}

//! The Bernoulli edge process `π_Λ^{βu}`.

use rand::Rng;

use super::stream_rng;
use crate::config::{CellIndex, EdgeSet, MarkedConfiguration, Particle};
use crate::potential::{DerivedConstants, SmoothDecomposition};

/// Each pair of `E_Λ(Y)` within `range` becomes an edge independently with
/// probability `1 − e^{−β u(b)}`.
pub fn sample_edges_with<R: Rng + ?Sized>(
    config: &MarkedConfiguration,
    range: f64,
    beta: f64,
    u: impl Fn(&Particle, &Particle) -> f64,
    rng: &mut R,
) -> EdgeSet {
    let mut edges = EdgeSet::new();
    if config.interior.is_empty() || !(range > 0.0) {
        return edges;
    }
    let all: Vec<&Particle> = config.all().collect();
    let index = CellIndex::build(config, range);
    for i in 0..config.interior.len() {
        for j in index.within(all[i].x, range) {
            if j <= i {
                continue;
            }
            let w = beta * u(all[i], all[j]);
            if w > 0.0 && rng.random::<f64>() < -(-w).exp_m1() {
                edges.insert(all[i].id, all[j].id).expect("distinct particles");
            }
        }
    }
    edges
}

pub fn sample_edges_rng<R: Rng + ?Sized>(
    decomp: &SmoothDecomposition,
    beta: f64,
    config: &MarkedConfiguration,
    rng: &mut R,
) -> EdgeSet {
    sample_edges_with(config, decomp.u_range(), beta, |a, b| decomp.u_small(a, b), rng)
}

pub fn sample_edges(
    decomp: &SmoothDecomposition,
    constants: &DerivedConstants,
    config: &MarkedConfiguration,
    seed: u64,
) -> EdgeSet {
    sample_edges_rng(decomp, constants.beta, config, &mut stream_rng(seed, 0))
}

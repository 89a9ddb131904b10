//! Sampled configurations with their edge sets.

use rayon::prelude::*;

use super::{HarnessError, Setup};
use crate::config::MarkedConfiguration;
use crate::gibbs::{run_chains, sample_edges_rng, stream_rng, McmcSettings};

/// Offset of the generator streams used for edges, one per sample.
const EDGE_STREAM: u64 = 1 << 32;

/// `count` configurations from `spec.chains` parallel chains, each run for
/// `burn_in` steps and then thinned by `thin`; `mcmc.steps` is derived from
/// the count. Samples are ordered by chain, then by time.
pub fn sample_configurations(setup: &Setup, count: usize) -> Result<Vec<MarkedConfiguration>, HarnessError> {
    let spec = &setup.spec;
    let chains = spec.chains.min(count as u64).max(1);
    let per_chain = (count as u64).div_ceil(chains);
    let settings = McmcSettings {
        steps: spec.mcmc.burn_in + per_chain * spec.mcmc.thin,
        ..spec.mcmc
    };
    let mut out: Vec<MarkedConfiguration> = run_chains(&setup.gibbs, &settings, chains)?.into_iter().flatten().collect();
    out.truncate(count);
    Ok(out)
}

/// Draws `B ~ πᵘ` for each configuration; sample `i` uses its own stream.
pub fn attach_edges(setup: &Setup, configs: &mut [MarkedConfiguration]) {
    let (seed, beta) = (setup.spec.seed, setup.spec.beta);
    configs.par_iter_mut().enumerate().for_each(|(i, c)| {
        let mut rng = stream_rng(seed, EDGE_STREAM + i as u64);
        c.edges = sample_edges_rng(&setup.decomp, beta, c, &mut rng);
    });
}

/// `spec.samples` configurations with edges.
pub fn sample_corpus(setup: &Setup) -> Result<Vec<MarkedConfiguration>, HarnessError> {
    let mut configs = sample_configurations(setup, setup.spec.samples)?;
    attach_edges(setup, &mut configs);
    Ok(configs)
}

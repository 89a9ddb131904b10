//! Poisson reference process, Hamiltonians, Gibbs samplers and the edge
//! process.

mod correlation;
mod edges;
mod energy;
mod exact;
mod mcmc;
mod poisson;

pub use correlation::{estimate_correlation, CorrelationEstimate, Rect};
pub use edges::{sample_edges, sample_edges_rng, sample_edges_with};
pub use energy::{hamiltonian, hamiltonian_bar, interaction_energy, pair_sum};
pub use exact::{exact_sample_small, partition_terms, ExactSampler};
pub use mcmc::{mh_acceptance, run_chains, sample_gibbs, sample_gibbs_chain, GibbsChain};
pub use poisson::{poisson_particles, sample_poisson};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, Particle, Window};
use crate::potential::{DerivedConstants, PotentialModel, SmoothDecomposition};

#[derive(Debug, Error)]
pub enum GibbsError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("exact sampler: {0}")]
    Oracle(String),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
}

/// Everything that determines a conditional Gibbs distribution `μ_Λ(·|Y′)`.
#[derive(Clone, Debug)]
pub struct GibbsParams {
    pub model: PotentialModel,
    pub decomp: SmoothDecomposition,
    pub constants: DerivedConstants,
    pub window: Window,
    pub boundary: Vec<Particle>,
}

impl GibbsParams {
    pub fn new(
        model: PotentialModel,
        decomp: SmoothDecomposition,
        constants: DerivedConstants,
        window: Window,
        boundary: Vec<Particle>,
    ) -> Result<Self, GibbsError> {
        if !(constants.beta > 0.0 && constants.z > 0.0) {
            return Err(GibbsError::Parameter(format!(
                "need beta > 0 and z > 0, got {} and {}",
                constants.beta, constants.z
            )));
        }
        if let Some(p) = boundary.iter().find(|p| window.contains(p.x)) {
            return Err(ConfigError::Membership {
                id: p.id,
                x: p.x[0],
                y: p.x[1],
            }
            .into());
        }
        Ok(GibbsParams {
            model,
            decomp,
            constants,
            window,
            boundary,
        })
    }

    pub fn beta(&self) -> f64 {
        self.constants.beta
    }

    pub fn z(&self) -> f64 {
        self.constants.z
    }
}

/// Chain length, thinning, seed and move mix of the Metropolis–Hastings sampler.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcSettings {
    pub steps: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
    /// Probabilities of birth, death and translate moves.
    pub move_probs: [f64; 3],
}

impl Default for McmcSettings {
    fn default() -> Self {
        McmcSettings {
            steps: 20_000,
            burn_in: 10_000,
            thin: 100,
            seed: 1,
            move_probs: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        }
    }
}

impl McmcSettings {
    pub fn validate(&self) -> Result<(), GibbsError> {
        if self.burn_in > self.steps {
            return Err(GibbsError::Parameter(format!(
                "burn_in {} exceeds steps {}",
                self.burn_in, self.steps
            )));
        }
        if self.thin == 0 {
            return Err(GibbsError::Parameter("thin must be at least 1".into()));
        }
        let sum: f64 = self.move_probs.iter().sum();
        if self.move_probs.iter().any(|&p| !(p >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(GibbsError::Parameter(format!(
                "move probabilities must be nonnegative and sum to 1, got {:?}",
                self.move_probs
            )));
        }
        if self.move_probs[0] > 0.0 && self.move_probs[1] == 0.0 || self.move_probs[1] > 0.0 && self.move_probs[0] == 0.0 {
            return Err(GibbsError::Parameter("birth and death must both be enabled or both disabled".into()));
        }
        Ok(())
    }
}

/// Generator for `stream` of the run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

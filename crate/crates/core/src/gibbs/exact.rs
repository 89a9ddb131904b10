//! Exact sampling in tiny windows, used as ground truth for the chain.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use statrs::distribution::{DiscreteCDF, Poisson as PoissonLaw};

use super::energy::interaction_energy;
use super::{hamiltonian, stream_rng, GibbsError, GibbsParams};
use crate::config::{MarkedConfiguration, Particle, Window};

/// Largest accepted tail mass `P(N > k_max)` of the dominating Poisson law.
pub const TAIL_BOUND: f64 = 1e-6;

/// Rejection sampler for `μ_Λ(·|Y′)` with a nonnegative potential.
///
/// A Poisson(`z`) configuration is accepted with probability `e^{−βH}`, which
/// is at most 1 when `U ≥ 0`. Draws with more than `k_max` particles are
/// discarded; their mass under the dominating Poisson law is below
/// [`TAIL_BOUND`].
pub struct ExactSampler<'a> {
    params: &'a GibbsParams,
    k_max: usize,
    counts: Poisson<f64>,
    first_id: u64,
}

impl<'a> ExactSampler<'a> {
    pub fn new(params: &'a GibbsParams, k_max: usize) -> Result<Self, GibbsError> {
        if !params.model.is_nonnegative() {
            return Err(GibbsError::Oracle("the rejection sampler needs a nonnegative potential".into()));
        }
        let mean = params.z() * params.window.area();
        let tail = PoissonLaw::new(mean)
            .map_err(|e| GibbsError::Parameter(e.to_string()))?
            .sf(k_max as u64);
        if tail >= TAIL_BOUND {
            return Err(GibbsError::Oracle(format!(
                "P(N > {k_max}) = {tail:.3e} under Poisson({mean}) is not below {TAIL_BOUND:e}"
            )));
        }
        Ok(ExactSampler {
            params,
            k_max,
            counts: Poisson::new(mean).map_err(|e| GibbsError::Parameter(e.to_string()))?,
            first_id: params.boundary.iter().map(|p| p.id + 1).max().unwrap_or(0),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> MarkedConfiguration {
        let window = self.params.window;
        let space = self.params.model.spin_space();
        let beta = self.params.beta();
        loop {
            let k = self.counts.sample(rng) as usize;
            if k > self.k_max {
                continue;
            }
            let interior: Vec<Particle> = (0..k)
                .map(|i| Particle::new(self.first_id + i as u64, window.uniform(rng), space.sample(rng)))
                .collect();
            let config = MarkedConfiguration {
                window_n: window.n,
                interior,
                boundary: self.params.boundary.clone(),
                edges: Default::default(),
            };
            let h = hamiltonian(&self.params.model, &config);
            if h == f64::INFINITY {
                continue;
            }
            if rng.random::<f64>() < (-beta * h).exp() {
                return config;
            }
        }
    }
}

/// One exact draw.
pub fn exact_sample_small(params: &GibbsParams, k_max: usize, seed: u64) -> Result<MarkedConfiguration, GibbsError> {
    let sampler = ExactSampler::new(params, k_max)?;
    Ok(sampler.sample(&mut stream_rng(seed, 0)))
}

/// `P(N = k)` for `k ≤ k_max`, from midpoint tensor-grid quadrature of the
/// `k`-particle terms `z^k/k! ∫ e^{−βH}`. The grid has `grid²` cells per
/// particle and spins use the quadrature nodes of the spin space; tuples
/// that hit the hard core are pruned. Cost grows like `(grid²·spins)^k_max`.
pub fn partition_terms(params: &GibbsParams, k_max: usize, grid: usize) -> Vec<f64> {
    let window: Window = params.window;
    let h = 2.0 * window.n / grid as f64;
    let spins = params.model.spin_space().quadrature(8);
    let mut sites = Vec::with_capacity(grid * grid * spins.len());
    for i in 0..grid {
        for j in 0..grid {
            let x = [-window.n + h * (i as f64 + 0.5), -window.n + h * (j as f64 + 0.5)];
            for s in &spins {
                sites.push(Particle::new(u64::MAX - sites.len() as u64, x, *s));
            }
        }
    }
    let cell = h * h / spins.len() as f64;
    let beta = params.beta();
    let single: Vec<f64> = sites
        .iter()
        .map(|p| interaction_energy(&params.model, std::slice::from_ref(p), &params.boundary))
        .collect();
    let mut sums = vec![0.0; k_max + 1];
    let mut chosen: Vec<usize> = Vec::with_capacity(k_max);
    fn recurse(
        params: &GibbsParams,
        sites: &[Particle],
        single: &[f64],
        beta: f64,
        energy: f64,
        chosen: &mut Vec<usize>,
        sums: &mut [f64],
    ) {
        sums[chosen.len()] += (-beta * energy).exp();
        if chosen.len() + 1 == sums.len() {
            return;
        }
        for s in 0..sites.len() {
            if single[s] == f64::INFINITY {
                continue;
            }
            let mut e = energy + single[s];
            for &c in chosen.iter() {
                e += params.model.evaluate(&sites[s], &sites[c]);
            }
            if e == f64::INFINITY {
                continue;
            }
            chosen.push(s);
            recurse(params, sites, single, beta, e, chosen, sums);
            chosen.pop();
        }
    }
    recurse(params, &sites, &single, beta, 0.0, &mut chosen, &mut sums);
    let z = params.z();
    let mut fact = 1.0;
    let weights: Vec<f64> = sums
        .iter()
        .enumerate()
        .map(|(k, s)| {
            if k > 0 {
                fact *= k as f64;
            }
            (z * cell).powi(k as i32) / fact * s
        })
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

//! Birth/death/translate Metropolis–Hastings chain for `μ_Λ(·|Y′)`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{stream_rng, GibbsError, GibbsParams, McmcSettings};
use crate::config::{CellIndex, EdgeSet, MarkedConfiguration, Particle, SpinSpace};

/// `min(1, prefactor · e^{−βΔH})`, and 0 when `ΔH = +∞`.
pub fn mh_acceptance(delta_energy: f64, beta: f64, prefactor: f64) -> f64 {
    if delta_energy == f64::INFINITY {
        return 0.0;
    }
    (prefactor * (-beta * delta_energy).exp()).min(1.0)
}

const NONE: usize = usize::MAX;

pub struct GibbsChain<'a> {
    params: &'a GibbsParams,
    settings: McmcSettings,
    rng: ChaCha8Rng,
    slots: Vec<Option<Particle>>,
    alive: Vec<usize>,
    alive_pos: Vec<usize>,
    free: Vec<usize>,
    index: CellIndex,
    next_id: u64,
    sigma: f64,
    range: f64,
    space: SpinSpace,
}

impl<'a> GibbsChain<'a> {
    /// A chain started from the empty interior, drawing from `stream` of the seed.
    pub fn new(params: &'a GibbsParams, settings: McmcSettings, stream: u64) -> Result<Self, GibbsError> {
        settings.validate()?;
        let range = params.model.range();
        let mut index = CellIndex::new(range);
        let mut slots = Vec::with_capacity(params.boundary.len());
        for p in &params.boundary {
            index.push(p.x);
            slots.push(Some(*p));
        }
        let next_id = params.boundary.iter().map(|p| p.id + 1).max().unwrap_or(0);
        let core = params.model.max_core_radius();
        Ok(GibbsChain {
            params,
            settings,
            rng: stream_rng(settings.seed, stream),
            alive_pos: vec![NONE; slots.len()],
            slots,
            alive: Vec::new(),
            free: Vec::new(),
            index,
            next_id,
            sigma: if core > 0.0 { 0.5 * core } else { 0.1 },
            range,
            space: params.model.spin_space(),
        })
    }

    /// Standard deviation of the translate step.
    pub fn step_size(&self) -> f64 {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.alive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alive.is_empty()
    }

    /// Energy of `p` against every stored particle except slot `skip`.
    fn local_energy(&self, p: &Particle, skip: usize) -> f64 {
        if !(self.range > 0.0) {
            return 0.0;
        }
        let mut total = 0.0;
        for j in self.index.within(p.x, self.range) {
            if j == skip {
                continue;
            }
            if let Some(q) = &self.slots[j] {
                let v = self.params.model.evaluate(p, q);
                if v == f64::INFINITY {
                    return v;
                }
                total += v;
            }
        }
        total
    }

    fn insert(&mut self, p: Particle) {
        let slot = match self.free.pop() {
            Some(s) => {
                self.index.relocate(s, p.x);
                self.slots[s] = Some(p);
                s
            }
            None => {
                self.slots.push(Some(p));
                self.alive_pos.push(NONE);
                self.index.push(p.x)
            }
        };
        self.alive_pos[slot] = self.alive.len();
        self.alive.push(slot);
    }

    fn delete(&mut self, slot: usize) {
        self.index.remove(slot);
        self.slots[slot] = None;
        let pos = self.alive_pos[slot];
        self.alive.swap_remove(pos);
        if pos < self.alive.len() {
            self.alive_pos[self.alive[pos]] = pos;
        }
        self.alive_pos[slot] = NONE;
        self.free.push(slot);
    }

    pub fn step(&mut self) {
        let [pb, pd, _] = self.settings.move_probs;
        let u: f64 = self.rng.random();
        let beta = self.params.beta();
        let za = self.params.z() * self.params.window.area();
        let n = self.alive.len() as f64;
        if u < pb {
            let x = self.params.window.uniform(&mut self.rng);
            let p = Particle::new(self.next_id, x, self.space.sample(&mut self.rng));
            let de = self.local_energy(&p, NONE);
            let a = mh_acceptance(de, beta, za / (n + 1.0) * pd / pb);
            if self.rng.random::<f64>() < a {
                self.insert(p);
                self.next_id += 1;
            }
        } else if u < pb + pd {
            if self.alive.is_empty() {
                return;
            }
            let slot = self.alive[self.rng.random_range(0..self.alive.len())];
            let p = self.slots[slot].expect("alive slot");
            let de = -self.local_energy(&p, slot);
            let a = mh_acceptance(de, beta, n / za * pb / pd);
            if self.rng.random::<f64>() < a {
                self.delete(slot);
            }
        } else {
            if self.alive.is_empty() {
                return;
            }
            let slot = self.alive[self.rng.random_range(0..self.alive.len())];
            let old = self.slots[slot].expect("alive slot");
            let dx: f64 = self.rng.sample(StandardNormal);
            let dy: f64 = self.rng.sample(StandardNormal);
            let mut new = Particle::new(old.id, [old.x[0] + self.sigma * dx, old.x[1] + self.sigma * dy], old.spin);
            if self.rng.random_bool(0.5) {
                new.spin = self.space.sample(&mut self.rng);
            }
            if !self.params.window.contains(new.x) {
                return;
            }
            let de = self.local_energy(&new, slot) - self.local_energy(&old, slot);
            let a = mh_acceptance(de, beta, 1.0);
            if self.rng.random::<f64>() < a {
                self.index.relocate(slot, new.x);
                self.slots[slot] = Some(new);
            }
        }
    }

    /// The current state with interior particles ordered by id.
    pub fn state(&self) -> MarkedConfiguration {
        let mut interior: Vec<Particle> = self.alive.iter().map(|&s| self.slots[s].expect("alive slot")).collect();
        interior.sort_by_key(|p| p.id);
        MarkedConfiguration {
            window_n: self.params.window.n,
            interior,
            boundary: self.params.boundary.clone(),
            edges: EdgeSet::new(),
        }
    }
}

/// The state after `settings.steps` steps from the empty interior.
pub fn sample_gibbs(params: &GibbsParams, settings: &McmcSettings) -> Result<MarkedConfiguration, GibbsError> {
    let mut chain = GibbsChain::new(params, *settings, 0)?;
    for _ in 0..settings.steps {
        chain.step();
    }
    Ok(chain.state())
}

/// States after burn-in, every `thin` steps, from the given stream.
pub fn sample_gibbs_chain(
    params: &GibbsParams,
    settings: &McmcSettings,
    stream: u64,
) -> Result<Vec<MarkedConfiguration>, GibbsError> {
    let mut chain = GibbsChain::new(params, *settings, stream)?;
    let mut out = Vec::new();
    for t in 1..=settings.steps {
        chain.step();
        if t > settings.burn_in && (t - settings.burn_in) % settings.thin == 0 {
            out.push(chain.state());
        }
    }
    Ok(out)
}

/// Independent chains on streams `0..chains`, run in parallel; results keep
/// stream order.
pub fn run_chains(
    params: &GibbsParams,
    settings: &McmcSettings,
    chains: u64,
) -> Result<Vec<Vec<MarkedConfiguration>>, GibbsError> {
    (0..chains)
        .into_par_iter()
        .map(|s| sample_gibbs_chain(params, settings, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Spin, Window};
    use crate::potential::{derive_constants, make_model, PotentialDescriptor, SmoothDecomposition};

    fn params(desc: PotentialDescriptor, n: f64, z: f64) -> GibbsParams {
        let m = make_model(desc).unwrap();
        let d = SmoothDecomposition::trivial(&m, 0.1).unwrap();
        let c = derive_constants(&d, 0.01, 1.0, z).unwrap();
        GibbsParams::new(m, d, c, Window::new(n).unwrap(), vec![]).unwrap()
    }

    #[test]
    fn hard_core_is_respected_at_high_activity() {
        let p = params(PotentialDescriptor::HardCore { r0: 1.0 }, 3.0, 5.0);
        let s = McmcSettings { steps: 20_000, burn_in: 0, thin: 500, ..Default::default() };
        for c in sample_gibbs_chain(&p, &s, 0).unwrap() {
            assert!(crate::gibbs::hamiltonian(&p.model, &c).is_finite());
        }
    }

    #[test]
    fn boundary_inside_window_is_rejected() {
        let m = make_model(PotentialDescriptor::Ideal).unwrap();
        let d = SmoothDecomposition::trivial(&m, 0.1).unwrap();
        let c = derive_constants(&d, 0.5, 1.0, 0.5).unwrap();
        let b = vec![Particle::new(0, [0.0, 0.0], Spin::Unit)];
        assert!(GibbsParams::new(m, d, c, Window::new(1.0).unwrap(), b).is_err());
    }

    #[test]
    fn settings_are_validated() {
        let bad = McmcSettings { move_probs: [0.5, 0.5, 0.5], ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = McmcSettings { steps: 10, burn_in: 20, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn chains_are_reproducible() {
        let p = params(PotentialDescriptor::HardCore { r0: 0.5 }, 2.0, 1.0);
        let s = McmcSettings { steps: 2_000, burn_in: 1_000, thin: 100, seed: 42, ..Default::default() };
        assert_eq!(sample_gibbs_chain(&p, &s, 3).unwrap(), sample_gibbs_chain(&p, &s, 3).unwrap());
    }

    #[test]
    fn acceptance_handles_infinite_energy() {
        assert_eq!(mh_acceptance(f64::INFINITY, 1.0, 10.0), 0.0);
        assert_eq!(mh_acceptance(-1.0, 1.0, 1.0), 1.0);
        assert!((mh_acceptance(1.0, 2.0, 1.0) - (-2.0f64).exp()).abs() < 1e-15);
    }
}

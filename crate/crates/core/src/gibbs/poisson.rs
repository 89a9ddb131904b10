use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{stream_rng, GibbsError};
use crate::config::{MarkedConfiguration, Particle, SpinSpace, Window};

/// Poisson number of particles, uniform in `window`, spins drawn from `space`,
/// with ids counting up from `first_id`.
pub fn poisson_particles<R: Rng + ?Sized>(
    window: Window,
    space: &SpinSpace,
    intensity: f64,
    first_id: u64,
    rng: &mut R,
) -> Result<Vec<Particle>, GibbsError> {
    let mean = intensity * window.area();
    let dist = Poisson::new(mean)
        .map_err(|e| GibbsError::Parameter(format!("intensity {intensity}: {e}")))?;
    let count = dist.sample(rng) as u64;
    Ok((0..count)
        .map(|k| {
            let x = window.uniform(rng);
            Particle::new(first_id + k, x, space.sample(rng))
        })
        .collect())
}

/// A sample of the marked Poisson process `ν_Λ` with the given intensity.
pub fn sample_poisson(
    window: Window,
    space: &SpinSpace,
    intensity: f64,
    seed: u64,
) -> Result<MarkedConfiguration, GibbsError> {
    let mut rng = stream_rng(seed, 0);
    let mut config = MarkedConfiguration::empty(window);
    config.interior = poisson_particles(window, space, intensity, 0, &mut rng)?;
    Ok(config)
}

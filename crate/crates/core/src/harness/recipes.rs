//! Bundled experiment recipes at desk scale.

use super::spec::{BoundarySource, ExperimentSpec, OutputPaths, TransformSettings};
use crate::gibbs::McmcSettings;
use crate::potential::PotentialDescriptor;

/// Names accepted by [`recipe`].
pub const RECIPES: [&str; 6] = [
    "poisson-sanity",
    "hard-disks",
    "widom-rowlinson",
    "lennard-jones-well",
    "hard-rods",
    "hard-disks-oracle",
];

fn base(name: &str, model: PotentialDescriptor, n: f64) -> ExperimentSpec {
    ExperimentSpec {
        name: name.into(),
        model,
        beta: 1.0,
        z: 0.5,
        xi: 0.5,
        n,
        pad: 2.0,
        boundary: BoundarySource::Sampled,
        mcmc: McmcSettings {
            steps: 325_000,
            burn_in: 200_000,
            thin: 5_000,
            seed: 2024,
            move_probs: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        },
        chains: 4,
        transform: TransformSettings {
            c: 0.05,
            delta: 0.1,
            strict: false,
            mollifier_width: 1e-3,
        },
        samples: 100,
        output: OutputPaths::default(),
        seed: 2024,
    }
}

/// The named recipe, or `None`.
///
/// `hard-disks-oracle` is sized for the density check: `Λ₂` inside a pad of
/// 0.5 with activity low enough that `P(N > 4) < 10⁻⁶` on `Λ_{2.5}`.
pub fn recipe(name: &str) -> Option<ExperimentSpec> {
    use PotentialDescriptor::*;
    Some(match name {
        "poisson-sanity" => ExperimentSpec {
            boundary: BoundarySource::Empty,
            pad: 0.0,
            ..base(name, Ideal, 16.0)
        },
        "hard-disks" => base(name, HardCore { r0: 0.5 }, 32.0),
        "widom-rowlinson" => base(name, WidomRowlinson { q: 2, r: 0.4 }, 32.0),
        "lennard-jones-well" => base(
            name,
            Well {
                r0: 0.5,
                r1: 0.8,
                c1: 0.5,
                c2: 0.2,
                cutoff: None,
            },
            32.0,
        ),
        "hard-rods" => base(name, HardRods { r: 0.5 }, 32.0),
        "hard-disks-oracle" => ExperimentSpec {
            z: 0.006,
            pad: 0.5,
            boundary: BoundarySource::Empty,
            transform: TransformSettings {
                c: 0.04,
                ..base(name, Ideal, 2.0).transform
            },
            ..base(name, HardCore { r0: 0.5 }, 2.0)
        },
        _ => return None,
    })
}

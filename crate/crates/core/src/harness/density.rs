//! Monte-Carlo check of `E[φ f(𝒯Y)] = E[f(Y)]` with exact samples.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{DensityRow, ExperimentReport};
use super::stats::Estimate;
use super::{HarnessError, Setup};
use crate::config::{MarkedConfiguration, Window};
use crate::gibbs::{sample_edges_rng, stream_rng, ExactSampler, GibbsParams, Rect};
use crate::transform::{apply_transform, build_transform, jacobian_density};

/// Bounded test functions of a configuration with edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Functional {
    /// `f ≡ 1`.
    One,
    /// Interior particles with `x₁ < 0`.
    CountLeftHalf,
    /// `|B|`.
    EdgeCount,
    /// `1{exactly k interior particles in the cell}`.
    CellOccupancy { cell: Rect, k: usize },
}

impl Functional {
    pub fn name(&self) -> String {
        match self {
            Functional::One => "one".into(),
            Functional::CountLeftHalf => "count-left-half".into(),
            Functional::EdgeCount => "edge-count".into(),
            Functional::CellOccupancy { k, .. } => format!("cell-occupancy-{k}"),
        }
    }

    pub fn eval(&self, c: &MarkedConfiguration) -> f64 {
        match self {
            Functional::One => 1.0,
            Functional::CountLeftHalf => c.interior.iter().filter(|p| p.x[0] < 0.0).count() as f64,
            Functional::EdgeCount => c.edges.len() as f64,
            Functional::CellOccupancy { cell, k } => {
                f64::from(u8::from(c.interior.iter().filter(|p| cell.contains(p.x)).count() == *k))
            }
        }
    }

    /// The bundled set: `1`, the left-half count and the edge count.
    pub fn defaults() -> Vec<Functional> {
        vec![Functional::One, Functional::CountLeftHalf, Functional::EdgeCount]
    }
}

/// Generator streams of the edge draws, offset from the oracle streams.
const EDGE_STREAM: u64 = 1 << 40;

/// Draws `samples` exact configurations on `Λ_{n+pad}`, keeps the part in
/// `Λₙ` as interior and the rest as boundary, attaches edges and compares
/// `E[φ f(𝒯Y)]` with `E[f(Y)]`. Rows pass when the two means agree within
/// three combined standard errors.
pub fn run_density_check(
    setup: &Setup,
    functionals: &[Functional],
    samples: usize,
    k_max: usize,
) -> Result<ExperimentReport, HarnessError> {
    let spec = &setup.spec;
    let outer = GibbsParams::new(
        setup.model,
        setup.decomp.clone(),
        setup.constants,
        Window::new(spec.n + spec.pad)?,
        Vec::new(),
    )?;
    let sampler = ExactSampler::new(&outer, k_max)?;
    let window = Window::new(spec.n)?;
    let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(spec.seed, i as u64);
            let draw = sampler.sample(&mut rng);
            let (interior, boundary) = draw.interior.into_iter().partition(|p| window.contains(p.x));
            let mut config = MarkedConfiguration {
                window_n: spec.n,
                interior,
                boundary,
                edges: Default::default(),
            };
            config.edges = sample_edges_rng(&setup.decomp, spec.beta, &config, &mut stream_rng(spec.seed, EDGE_STREAM + i as u64));
            let result = build_transform(&config, &setup.transform, &setup.decomp)?;
            let (_, phi) = jacobian_density(&config, &result, &setup.decomp, spec.beta);
            let image = apply_transform(&config, &result, result.direction);
            let lhs = functionals.iter().map(|f| phi * f.eval(&image)).collect();
            let rhs = functionals.iter().map(|f| f.eval(&config)).collect();
            Ok((lhs, rhs))
        })
        .collect::<Result<_, HarnessError>>()?;
    let mut report = ExperimentReport::new(setup);
    for (j, f) in functionals.iter().enumerate() {
        let lhs = Estimate::of(&rows.iter().map(|r| r.0[j]).collect::<Vec<_>>());
        let rhs = Estimate::of(&rows.iter().map(|r| r.1[j]).collect::<Vec<_>>());
        let combined = lhs.stderr.hypot(rhs.stderr);
        let difference = lhs.mean - rhs.mean;
        report.density.push(DensityRow {
            functional: f.name(),
            lhs: lhs.mean,
            lhs_stderr: lhs.stderr,
            rhs: rhs.mean,
            rhs_stderr: rhs.stderr,
            difference,
            combined_stderr: combined,
            pass: difference.abs() <= 3.0 * combined,
        });
    }
    Ok(report)
}

//! Displacement-versus-window-size and diagnostics experiments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::ExperimentReport;
use super::stats::Estimate;
use super::{sample_corpus, HarnessError, Setup};
use crate::transform::{build_transform, diagnostics, is_good};

/// One row of the displacement table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacementRow {
    pub n: f64,
    pub log_n: f64,
    /// `c √log n`.
    pub central_shift: f64,
    /// Mean shift of particles in `Λ_√n` over good configurations.
    pub good_central_mean: f64,
    pub good_fraction: f64,
    pub good_fraction_stderr: f64,
    /// Mean shift of particles in `Λ_√n` over all configurations.
    pub mean_central_shift: f64,
    pub mean_central_shift_stderr: f64,
    pub configs: usize,
}

/// For each `n`, samples `spec.samples` configurations on `Λₙ` and tabulates
/// the central shift.
pub fn run_displacement_experiment(setup: &Setup, n_values: &[f64]) -> Result<Vec<DisplacementRow>, HarnessError> {
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::Spec("n values must be increasing".into()));
    }
    let mut rows = Vec::new();
    for &n in n_values {
        let s = setup.with_n(n)?;
        let configs = sample_corpus(&s)?;
        let per: Vec<(bool, Vec<f64>)> = configs
            .par_iter()
            .map(|c| {
                let r = build_transform(c, &s.transform, &s.decomp)?;
                let good = is_good(c, &s.transform, &s.decomp)?.good;
                let radius = n.sqrt();
                let shifts = c.interior.iter().filter(|p| p.sup_norm() <= radius).map(|p| r.shift(p.id)).collect();
                Ok((good, shifts))
            })
            .collect::<Result<_, HarnessError>>()?;
        let good = Estimate::of(&per.iter().map(|(g, _)| f64::from(u8::from(*g))).collect::<Vec<_>>());
        let means: Vec<f64> = per
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(_, s)| s.iter().sum::<f64>() / s.len() as f64)
            .collect();
        let good_shifts: Vec<f64> = per.iter().filter(|(g, _)| *g).flat_map(|(_, s)| s.iter().copied()).collect();
        let all = Estimate::of(&means);
        rows.push(DisplacementRow {
            n,
            log_n: n.ln(),
            central_shift: s.transform.plateau(),
            good_central_mean: Estimate::of(&good_shifts).mean,
            good_fraction: good.mean,
            good_fraction_stderr: good.stderr,
            mean_central_shift: all.mean,
            mean_central_shift_stderr: all.stderr,
            configs: configs.len(),
        });
    }
    Ok(rows)
}

/// Means of `β S₁` and `S₂` over the corpus, reported against `δ`.
pub fn run_diagnostics_experiment(setup: &Setup) -> Result<ExperimentReport, HarnessError> {
    let configs = sample_corpus(setup)?;
    let values: Vec<(f64, f64)> = configs
        .par_iter()
        .map(|c| {
            let d = diagnostics(c, &setup.transform, &setup.decomp)?;
            Ok((setup.spec.beta * d.s1, d.s2))
        })
        .collect::<Result<_, HarnessError>>()?;
    let mut report = ExperimentReport::new(setup);
    let delta = setup.spec.transform.delta;
    report.push_stat("beta*S1", Estimate::of(&values.iter().map(|v| v.0).collect::<Vec<_>>()), delta, "<=");
    report.push_stat("S2", Estimate::of(&values.iter().map(|v| v.1).collect::<Vec<_>>()), delta, "<=");
    Ok(report)
}

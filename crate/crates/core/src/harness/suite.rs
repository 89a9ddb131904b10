//! The per-configuration property suite and its replay artifacts.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{CheckSummary, ExperimentReport};
use super::stats::Estimate;
use super::{HarnessError, Setup};
use crate::config::MarkedConfiguration;
use crate::potential::SmoothDecomposition;
use crate::transform::{
    apply_transform, build_transform, check_lower_bound, check_monotone, check_t2, check_t3, check_t4, check_t5,
    diagnostics, invert_transform, is_good, CheckOutcome, Direction, TransformParams, Violation,
};

/// Largest accepted per-coordinate round-trip error.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-9;

/// Everything needed to rerun the checks on one configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayArtifact {
    pub spec: super::ExperimentSpec,
    pub index: usize,
    pub config: MarkedConfiguration,
    pub failed: Vec<String>,
}

/// Outcome of every check on one configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigVerdict {
    pub index: usize,
    pub checks: Vec<CheckOutcome>,
    pub good: bool,
    pub m: usize,
    pub m_star: usize,
    pub s1: f64,
    pub s2: f64,
}

impl ConfigVerdict {
    pub fn hard_failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| c.hard && !c.passed()).map(|c| c.name.clone()).collect()
    }
}

fn round_trip(
    config: &MarkedConfiguration,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
    shifts: &crate::transform::TransformResult,
) -> Result<CheckOutcome, HarnessError> {
    let mut out = CheckOutcome {
        name: "round-trip".into(),
        hard: true,
        checked: 0,
        violations: Vec::new(),
    };
    for dir in [Direction::Forward, Direction::Backward] {
        let p = params.with_direction(dir);
        let image = apply_transform(config, shifts, dir);
        let back = invert_transform(&image, &p, decomp)?.preimage;
        for (a, b) in config.all().zip(back.all()) {
            let err = (a.x[0] - b.x[0]).abs().max((a.x[1] - b.x[1]).abs());
            out.checked += 1;
            if !(err <= ROUND_TRIP_TOLERANCE && a.id == b.id) {
                out.violations.push(Violation {
                    ids: vec![a.id],
                    observed: err,
                    bound: ROUND_TRIP_TOLERANCE,
                    detail: format!("{dir:?} inverse missed the original position"),
                });
            }
        }
    }
    Ok(out)
}

fn direction_symmetry(
    config: &MarkedConfiguration,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
    forward: &crate::transform::TransformResult,
) -> Result<CheckOutcome, HarnessError> {
    let backward = build_transform(config, &params.with_direction(Direction::Backward), decomp)?;
    let same = backward.shift_of == forward.shift_of && backward.taus() == forward.taus();
    Ok(CheckOutcome {
        name: "direction-symmetry".into(),
        hard: true,
        checked: 1,
        violations: if same {
            Vec::new()
        } else {
            vec![Violation {
                ids: vec![],
                observed: f64::NAN,
                bound: 0.0,
                detail: "backward recursion differs from forward".into(),
            }]
        },
    })
}

/// Runs every check on one configuration.
pub fn check_configuration(setup: &Setup, index: usize, config: &MarkedConfiguration) -> Result<ConfigVerdict, HarnessError> {
    let params = setup.transform;
    let decomp = &setup.decomp;
    let result = build_transform(config, &params, decomp)?;
    let verdict = is_good(config, &params, decomp)?;
    let mut checks = vec![
        check_t2(config, &result, &params),
        check_t4(config, &result, &params, decomp),
        check_t5(config, &result, &params),
        check_monotone(config, &result, &params, decomp),
        check_lower_bound(config, &result, &params, decomp)?,
        round_trip(config, &params, decomp, &result)?,
        direction_symmetry(config, &params, decomp, &result)?,
        check_t3(config, &result, &params, &verdict),
    ];
    // On good configurations the cap never fires; a hard check only in strict mode.
    checks.push(CheckOutcome {
        name: "m-star".into(),
        hard: params.strict,
        checked: usize::from(verdict.good),
        violations: if verdict.good && result.m_star != result.m {
            vec![Violation {
                ids: vec![],
                observed: result.m_star as f64,
                bound: result.m as f64,
                detail: "good configuration with m* < m".into(),
            }]
        } else {
            Vec::new()
        },
    });
    let d = diagnostics(config, &params, decomp)?;
    Ok(ConfigVerdict {
        index,
        checks,
        good: verdict.good,
        m: result.m,
        m_star: result.m_star,
        s1: d.s1,
        s2: d.s2,
    })
}

/// Writes a replay artifact and returns its path.
pub fn write_replay(dir: &Path, artifact: &ReplayArtifact) -> Result<PathBuf, HarnessError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("replay-{}-{}.json", artifact.spec.name, artifact.index));
    std::fs::write(&path, serde_json::to_string_pretty(artifact)?)?;
    Ok(path)
}

/// Reruns the checks stored in a replay file.
pub fn replay(path: &Path) -> Result<(ReplayArtifact, ConfigVerdict), HarnessError> {
    let artifact: ReplayArtifact = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    artifact.config.validate()?;
    let setup = Setup::new(&artifact.spec)?;
    let verdict = check_configuration(&setup, artifact.index, &artifact.config)?;
    Ok((artifact, verdict))
}

/// Aggregates per-configuration outcomes into check summaries, keeping the
/// order in which the checks are listed.
pub fn summarize(verdicts: &[ConfigVerdict]) -> Vec<CheckSummary> {
    let mut out: Vec<CheckSummary> = Vec::new();
    for v in verdicts {
        for c in &v.checks {
            let pos = match out.iter().position(|s| s.name == c.name) {
                Some(p) => p,
                None => {
                    out.push(CheckSummary::new(&c.name, c.hard));
                    out.len() - 1
                }
            };
            let s = &mut out[pos];
            s.checked += c.checked;
            s.violations += c.violations.len();
            s.failing_configs += usize::from(!c.passed());
            s.passed = s.violations == 0;
        }
    }
    out
}

/// Samples the corpus, checks every configuration, writes replay artifacts for
/// hard failures and returns the report. Good-configuration fraction and the
/// `S₁`, `S₂` means are reported against `1 − δ` and `δ`.
pub fn run_property_suite(setup: &Setup) -> Result<ExperimentReport, HarnessError> {
    let configs = super::sample_corpus(setup)?;
    run_property_suite_on(setup, &configs)
}

pub fn run_property_suite_on(setup: &Setup, configs: &[MarkedConfiguration]) -> Result<ExperimentReport, HarnessError> {
    let verdicts: Vec<ConfigVerdict> = configs
        .par_iter()
        .enumerate()
        .map(|(i, c)| check_configuration(setup, i, c))
        .collect::<Result<_, _>>()?;
    let mut report = ExperimentReport::new(setup);
    report.checks = summarize(&verdicts);
    let good: Vec<f64> = verdicts.iter().map(|v| f64::from(u8::from(v.good))).collect();
    report.push_stat("good-fraction", Estimate::of(&good), 1.0 - setup.spec.transform.delta, ">=");
    let beta = setup.spec.beta;
    let s1: Vec<f64> = verdicts.iter().map(|v| beta * v.s1).collect();
    let s2: Vec<f64> = verdicts.iter().map(|v| v.s2).collect();
    report.push_stat("beta*S1", Estimate::of(&s1), setup.spec.transform.delta, "<=");
    report.push_stat("S2", Estimate::of(&s2), setup.spec.transform.delta, "<=");
    if let Some(dir) = &setup.spec.output.dir {
        for v in verdicts.iter().filter(|v| !v.hard_failures().is_empty()) {
            let artifact = ReplayArtifact {
                spec: setup.spec.clone(),
                index: v.index,
                config: configs[v.index].clone(),
                failed: v.hard_failures(),
            };
            report.replays.push(write_replay(dir, &artifact)?);
        }
    }
    Ok(report)
}

//! Experiment reports and their CSV/JSON emission.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::stats::Estimate;
use super::{ExperimentSpec, HarnessError, Setup};
use crate::potential::DecompositionReport;

/// Aggregate of one named check over a corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub hard: bool,
    pub passed: bool,
    pub checked: usize,
    pub violations: usize,
    pub failing_configs: usize,
}

impl CheckSummary {
    pub fn new(name: &str, hard: bool) -> Self {
        CheckSummary {
            name: name.into(),
            hard,
            passed: true,
            checked: 0,
            violations: 0,
            failing_configs: 0,
        }
    }
}

/// A Monte-Carlo quantity compared against a bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub quantity: String,
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
    pub bound: f64,
    /// `"<="` or `">="`.
    pub relation: String,
    /// Whether the mean satisfies the relation within three standard errors.
    pub within: bool,
}

/// Both sides of the density identity for one functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub functional: String,
    pub lhs: f64,
    pub lhs_stderr: f64,
    pub rhs: f64,
    pub rhs_stderr: f64,
    pub difference: f64,
    pub combined_stderr: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub mode: String,
    pub seed: u64,
    pub spec: ExperimentSpec,
    pub constants: DecompositionReport,
    pub checks: Vec<CheckSummary>,
    pub stats: Vec<StatRow>,
    pub density: Vec<DensityRow>,
    pub replays: Vec<PathBuf>,
}

impl ExperimentReport {
    pub fn new(setup: &Setup) -> Self {
        ExperimentReport {
            name: setup.spec.name.clone(),
            mode: setup.spec.mode().into(),
            seed: setup.spec.seed,
            spec: setup.spec.clone(),
            constants: setup.constants.report(),
            checks: Vec::new(),
            stats: Vec::new(),
            density: Vec::new(),
            replays: Vec::new(),
        }
    }

    pub fn push_stat(&mut self, quantity: &str, e: Estimate, bound: f64, relation: &str) {
        let slack = 3.0 * if e.stderr.is_finite() { e.stderr } else { 0.0 };
        let within = match relation {
            "<=" => e.mean <= bound + slack,
            _ => e.mean >= bound - slack,
        };
        self.stats.push(StatRow {
            quantity: quantity.into(),
            mean: e.mean,
            stderr: e.stderr,
            count: e.count,
            bound,
            relation: relation.into(),
            within,
        });
    }

    /// True when every hard check and every density verdict passed.
    pub fn hard_passed(&self) -> bool {
        self.checks.iter().all(|c| !c.hard || c.passed) && self.density.iter().all(|d| d.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line per check, statistic and density row.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut out = vec![format!("{} [{} mode, seed {}]", self.name, self.mode, self.seed)];
        for c in &self.checks {
            out.push(format!(
                "{:<6} {:<20} {} checked, {} violations{}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.checked,
                c.violations,
                if c.hard { "" } else { " (reported only)" }
            ));
        }
        for s in &self.stats {
            out.push(format!(
                "{:<6} {:<20} {:.6} ± {:.6} (n = {}) vs {} {} (reported only)",
                if s.within { "ok" } else { "over" },
                s.quantity,
                s.mean,
                s.stderr,
                s.count,
                s.relation,
                s.bound
            ));
        }
        for d in &self.density {
            out.push(format!(
                "{:<6} {:<20} lhs {:.6} rhs {:.6} diff {:.3e} (3σ = {:.3e})",
                if d.pass { "PASS" } else { "FAIL" },
                d.functional,
                d.lhs,
                d.rhs,
                d.difference,
                3.0 * d.combined_stderr
            ));
        }
        out
    }

    /// Writes `report.json`, `checks.csv`, `stats.csv` and `density.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), HarnessError> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        write_csv(&dir.join("checks.csv"), &self.checks)?;
        write_csv(&dir.join("stats.csv"), &self.stats)?;
        write_csv(&dir.join("density.csv"), &self.density)?;
        Ok(())
    }
}

/// Serializes `rows` with a header line.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

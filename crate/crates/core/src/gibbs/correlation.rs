//! Empirical correlation functions against a Ruelle bound `ξ^m`.

use serde::{Deserialize, Serialize};

use super::GibbsError;
use crate::config::MarkedConfiguration;

/// Minimum number of samples for a correlation estimate.
pub const MIN_SAMPLES: usize = 30;

/// Axis-parallel test cell `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn contains(&self, x: [f64; 2]) -> bool {
        x[0] >= self.x0 && x[0] <= self.x1 && x[1] >= self.y0 && x[1] <= self.y1
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0).max(0.0) * (self.y1 - self.y0).max(0.0)
    }

    fn intersect(&self, o: &Rect) -> Rect {
        Rect {
            x0: self.x0.max(o.x0),
            x1: self.x1.min(o.x1),
            y0: self.y0.max(o.y0),
            y1: self.y1.min(o.y1),
        }
    }
}

/// One row of the estimator CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    pub quantity: String,
    pub estimate: f64,
    pub stderr: f64,
    pub bound: f64,
    /// Estimate exceeds the bound by more than three standard errors.
    pub flag: bool,
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Estimates `E[Σ≠ 1{y₁ ∈ A₁, …, y_m ∈ A_m}]` over interior particles for
/// each cell (`m = 1`) or ordered cell pair (`m = 2`), against `ξ^m ∏ λ²(Aᵢ)`.
pub fn estimate_correlation(
    samples: &[MarkedConfiguration],
    m: usize,
    cells: &[Rect],
    xi: f64,
) -> Result<Vec<CorrelationEstimate>, GibbsError> {
    if samples.len() < MIN_SAMPLES {
        return Err(GibbsError::TooFewSamples {
            need: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    let count = |c: &MarkedConfiguration, r: &Rect| c.interior.iter().filter(|p| r.contains(p.x)).count() as f64;
    let row = |quantity: String, values: Vec<f64>, bound: f64| {
        let (estimate, stderr) = mean_se(&values);
        CorrelationEstimate {
            quantity,
            estimate,
            stderr,
            bound,
            flag: estimate > bound + 3.0 * stderr,
        }
    };
    match m {
        1 => Ok(cells
            .iter()
            .enumerate()
            .map(|(i, a)| row(format!("rho1[{i}]"), samples.iter().map(|c| count(c, a)).collect(), xi * a.area()))
            .collect()),
        2 => {
            let mut out = Vec::new();
            for (i, a) in cells.iter().enumerate() {
                for (j, b) in cells.iter().enumerate() {
                    let both = a.intersect(b);
                    let values = samples
                        .iter()
                        .map(|c| count(c, a) * count(c, b) - if both.area() > 0.0 { count(c, &both) } else { 0.0 })
                        .collect();
                    out.push(row(format!("rho2[{i},{j}]"), values, xi * xi * a.area() * b.area()));
                }
            }
            Ok(out)
        }
        _ => Err(GibbsError::Parameter(format!("m must be 1 or 2, got {m}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{SpinSpace, Window};
    use crate::gibbs::sample_poisson;

    #[test]
    fn empty_sample_list_is_an_error() {
        assert!(estimate_correlation(&[], 1, &[], 1.0).is_err());
    }

    #[test]
    fn poisson_intensity_is_recovered() {
        let w = Window::new(2.0).unwrap();
        let samples: Vec<_> = (0..400).map(|s| sample_poisson(w, &SpinSpace::Unit, 0.5, s).unwrap()).collect();
        let cell = Rect { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0 };
        let e = &estimate_correlation(&samples, 1, &[cell], 0.5).unwrap()[0];
        assert!((e.estimate - 2.0).abs() < 3.0 * e.stderr, "{e:?}");
        let e2 = estimate_correlation(&samples, 2, &[cell], 0.5).unwrap();
        assert!((e2[0].estimate - 4.0).abs() < 3.0 * e2[0].stderr, "{e2:?}");
    }
}

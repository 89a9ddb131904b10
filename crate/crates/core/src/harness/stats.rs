//! Small statistical helpers for the verdicts.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

impl Estimate {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Estimate {
                mean: f64::NAN,
                stderr: f64::NAN,
                count: 0,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            f64::NAN
        };
        Estimate { mean, stderr, count: n }
    }

    /// `|a − b| ≤ k √(se_a² + se_b²)`.
    pub fn agrees_with(&self, other: &Estimate, k: f64) -> bool {
        (self.mean - other.mean).abs() <= k * self.stderr.hypot(other.stderr)
    }
}

/// Pearson test of nonnegative integer counts against `Poisson(mean)`.
/// Cells are `{0}, …, {k}` and a tail `{> k}`, with `k` the largest value
/// keeping every expected cell count at least 5. Returns `(statistic, dof, p)`.
pub fn poisson_chi_square(counts: &[usize], mean: f64) -> (f64, usize, f64) {
    let law = Poisson::new(mean).expect("positive mean");
    let total = counts.len() as f64;
    let mut k = 0u64;
    while total * law.pmf(k + 1) >= 5.0 && total * law.sf(k + 1) >= 5.0 {
        k += 1;
    }
    let mut observed = vec![0.0; k as usize + 2];
    for &c in counts {
        observed[(c as u64).min(k + 1) as usize] += 1.0;
    }
    let mut stat = 0.0;
    for (j, o) in observed.iter().enumerate() {
        let p = if (j as u64) <= k { law.pmf(j as u64) } else { law.sf(k) };
        let e = total * p;
        stat += (o - e).powi(2) / e;
    }
    let dof = observed.len() - 1;
    let p = ChiSquared::new(dof as f64).expect("positive dof").sf(stat);
    (stat, dof, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::Distribution;

    #[test]
    fn estimate_of_constant_has_zero_error() {
        let e = Estimate::of(&[2.0, 2.0, 2.0]);
        assert_eq!((e.mean, e.stderr, e.count), (2.0, 0.0, 3));
    }

    #[test]
    fn chi_square_accepts_poisson_and_rejects_shifted() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let law = rand_distr::Poisson::new(4.0).unwrap();
        let counts: Vec<usize> = (0..5000).map(|_| law.sample(&mut rng) as usize).collect();
        assert!(poisson_chi_square(&counts, 4.0).2 > 0.01);
        assert!(poisson_chi_square(&counts, 4.5).2 < 1e-6);
    }
}

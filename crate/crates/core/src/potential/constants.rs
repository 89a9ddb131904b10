//! The constants `c_K`, `c_ψ`, `c_u`, `c_u′` of a decomposition.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::decomposition::{CoreShape, SmoothDecomposition, PSI_EXPONENT};
use super::quad::gauss8_piecewise;
use super::{segment, PotentialError};
use crate::config::{Particle, Spin, SpinSpace};

/// Number of spin points used for suprema and spin averages.
pub const SPIN_GRID: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub eps0: f64,
    pub eps: f64,
    #[serde(rename = "c_K")]
    pub c_k: f64,
    pub c_psi: f64,
    pub c_u: f64,
    pub c_u_prime: f64,
    pub xi: f64,
    pub beta: f64,
    pub z: f64,
    pub gamma: f64,
    pub feasible: bool,
}

/// The JSON report of a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub eps0: f64,
    pub eps: f64,
    #[serde(rename = "c_K")]
    pub c_k: f64,
    pub c_psi: f64,
    pub c_u: f64,
    pub c_u_prime: f64,
    pub gamma: f64,
    pub feasible: bool,
}

impl DerivedConstants {
    pub fn report(&self) -> DecompositionReport {
        DecompositionReport {
            eps0: self.eps0,
            eps: self.eps,
            c_k: self.c_k,
            c_psi: self.c_psi,
            c_u: self.c_u,
            c_u_prime: self.c_u_prime,
            gamma: self.gamma,
            feasible: self.feasible,
        }
    }
}

/// `γ = 1 / (3ξ(1 ∨ β))`.
pub fn gamma_for(xi: f64, beta: f64) -> f64 {
    1.0 / (3.0 * xi * beta.max(1.0))
}

/// Evaluates all constants without enforcing `c_u < 1`.
pub fn evaluate_constants(
    decomp: &SmoothDecomposition,
    xi: f64,
    beta: f64,
    z: f64,
) -> Result<DerivedConstants, PotentialError> {
    for (name, v) in [("xi", xi), ("beta", beta), ("z", z)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(PotentialError::Parameter(format!("{name} must be positive, got {v}")));
        }
    }
    let eps = decomp.eps();
    let (c_psi, c_u, c_u_prime) = match decomp.core() {
        CoreShape::Empty => (0.0, 0.0, 0.0),
        CoreShape::Rods { r } => {
            let area = 8.0 * r * eps + PI * eps * eps;
            (0.0, xi * area, xi * rod_second_moment(decomp, r))
        }
        CoreShape::Radial { .. } => radial_integrals(decomp, beta, xi),
    };
    Ok(DerivedConstants {
        eps0: decomp.eps0(),
        eps,
        c_k: decomp.c_k(),
        c_psi,
        c_u,
        c_u_prime,
        xi,
        beta,
        z,
        gamma: gamma_for(xi, beta),
        feasible: c_u < 1.0,
    })
}

/// Evaluates the constants and fails unless `c_u < 1`.
pub fn derive_constants(
    decomp: &SmoothDecomposition,
    xi: f64,
    beta: f64,
    z: f64,
) -> Result<DerivedConstants, PotentialError> {
    let c = evaluate_constants(decomp, xi, beta, z)?;
    if !c.feasible {
        return Err(PotentialError::Infeasible {
            bound: "c_u < 1".into(),
            value: c.c_u,
        });
    }
    Ok(c)
}

/// Spin pairs `(σ, weights over σ′)` for suprema over `σ` and averages over `σ′`.
fn spin_points(space: &SpinSpace) -> (Vec<Spin>, Vec<Spin>) {
    (space.grid(SPIN_GRID), space.quadrature(SPIN_GRID))
}

fn radial_integrals(decomp: &SmoothDecomposition, beta: f64, xi: f64) -> (f64, f64, f64) {
    let model = decomp.model();
    let eps = decomp.eps();
    let (sups, avgs) = spin_points(&model.spin_space());
    let mut c_u = 0.0f64;
    let mut c_u2 = 0.0f64;
    let mut rk_min = f64::INFINITY;
    let smoothing = decomp.smoothing();
    for s in &sups {
        let a = Particle::new(0, [0.0, 0.0], *s);
        let (mut m0, mut m2) = (0.0, 0.0);
        for t in &avgs {
            let b = Particle::new(1, [0.0, 0.0], *t);
            let rk = decomp.core_radius(&a, &b).unwrap_or(0.0);
            let r0 = model.core_radius(&a, &b).unwrap_or(0.0);
            rk_min = rk_min.min(rk);
            let outer = rk + eps;
            m0 += PI * (outer * outer - r0 * r0);
            m2 += 0.5 * PI * (outer.powi(4) - r0.powi(4));
            if let Some(sm) = smoothing {
                let top = decomp.u_range();
                if top > rk {
                    let breaks = [sm.big_r - sm.collar - sm.delta, sm.big_r, sm.big_r + sm.delta];
                    let width = sm.delta / 4.0;
                    let g = |r: f64| {
                        let u = decomp.u_small(&a, &Particle::new(1, [r, 0.0], *t));
                        (beta * u).min(1.0)
                    };
                    m0 += 2.0 * PI * gauss8_piecewise(rk, top, &breaks, width, |r| g(r) * r);
                    m2 += 2.0 * PI * gauss8_piecewise(rk, top, &breaks, width, |r| g(r) * r.powi(3));
                }
            }
        }
        let w = avgs.len() as f64;
        c_u = c_u.max(m0 / w);
        c_u2 = c_u2.max(m2 / w);
    }
    let c_psi = match smoothing {
        Some(sm) => {
            debug_assert_eq!(PSI_EXPONENT, 5);
            let r = rk_min;
            let inner = if r < 1.0 { (r.powi(-3) - 1.0) / 3.0 } else { 0.0 };
            xi * 2.0 * PI * sm.c_second * (inner + 1.0 / r.max(1.0))
        }
        None => 0.0,
    };
    (c_psi, xi * c_u, xi * c_u2)
}

/// `∫_{K_ε∖K} ‖x‖² dx` for rods, averaged over relative angles.
fn rod_second_moment(decomp: &SmoothDecomposition, r: f64) -> f64 {
    const ANGLES: usize = 32;
    const GRID: usize = 200;
    let eps = decomp.eps();
    let half = 2.0 * r + eps;
    let h = 2.0 * half / GRID as f64;
    let mut total = 0.0;
    for k in 0..ANGLES {
        let phi = PI * (k as f64 + 0.5) / ANGLES as f64;
        let (p, q) = segment::rod([0.0, 0.0], r, 0.0);
        let mut acc = 0.0;
        for i in 0..GRID {
            for j in 0..GRID {
                let x = [-half + h * (i as f64 + 0.5), -half + h * (j as f64 + 0.5)];
                let (s, t) = segment::rod(x, r, phi);
                let d = segment::distance(p, q, s, t);
                if d > 0.0 && d < eps {
                    acc += x[0] * x[0] + x[1] * x[1];
                }
            }
        }
        total += acc * h * h;
    }
    total / ANGLES as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{make_model, smooth_decompose, PotentialDescriptor};

    fn hard_disk(eps: f64) -> SmoothDecomposition {
        let m = make_model(PotentialDescriptor::HardCore { r0: 1.0 }).unwrap();
        SmoothDecomposition::trivial(&m, eps).unwrap()
    }

    #[test]
    fn annulus_area_for_trivial_decomposition() {
        let c = derive_constants(&hard_disk(0.1), 1.0, 1.0, 1.0).unwrap();
        assert_eq!(c.c_psi, 0.0);
        assert!((c.c_u - PI * (1.21 - 1.0)).abs() < 1e-12);
        assert!((c.c_u - 0.6597).abs() < 1e-4);
        assert_eq!(c.c_k, 1.1);
    }

    #[test]
    fn doubling_xi_is_infeasible() {
        let e = derive_constants(&hard_disk(0.1), 2.0, 1.0, 1.0).unwrap_err();
        assert!(matches!(e, PotentialError::Infeasible { value, .. } if (value - 1.3195).abs() < 1e-3));
        let raw = evaluate_constants(&hard_disk(0.1), 2.0, 1.0, 1.0).unwrap();
        assert!(!raw.feasible);
    }

    #[test]
    fn derived_enlargements_are_feasible() {
        let (xi, beta) = (0.5, 1.0);
        let gamma = gamma_for(xi, beta);
        for desc in [
            PotentialDescriptor::HardCore { r0: 1.0 },
            PotentialDescriptor::SoftCore { c1: 1.0, r1: 1.0 },
            PotentialDescriptor::Well { r0: 1.0, r1: 1.5, c1: 1.0, c2: 1.0, cutoff: None },
            PotentialDescriptor::WidomRowlinson { q: 2, r: 0.5 },
            PotentialDescriptor::RandomRadiiDisks { r_max: 0.5 },
            PotentialDescriptor::HardRods { r: 1.0 },
        ] {
            let m = make_model(desc).unwrap();
            let d = smooth_decompose(&m, gamma, 1e-3).unwrap();
            let c = derive_constants(&d, xi, beta, 0.5).unwrap();
            assert!(c.c_u < 1.0 && c.c_u >= 0.0, "{desc:?} {c:?}");
            assert!(c.c_u_prime.is_finite() && c.c_psi.is_finite());
        }
    }

    #[test]
    fn report_uses_capitalised_core_key() {
        let c = derive_constants(&hard_disk(0.1), 1.0, 1.0, 1.0).unwrap();
        let json = serde_json::to_string(&c.report()).unwrap();
        assert!(json.contains("\"c_K\":1.1"));
        assert!(json.contains("\"feasible\":true"));
    }
}

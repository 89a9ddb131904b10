//! Smooth decompositions `U = Ū − u` off an enlarged core `K`.

use std::f64::consts::PI;

use super::mollifier::{Bump, Piece, Profile, Segment};
use super::model::{PotentialDescriptor, PotentialModel};
use super::{segment, PotentialError};
use crate::config::{dist, Particle};

/// Decay exponent of the second-derivative bound `ψ = c″ / ‖x‖^α`.
pub const PSI_EXPONENT: i32 = 5;

/// Inflation applied to the grid maximum when bounding `|V̄″| + 2|V̄′|/r`.
const GRID_SAFETY: f64 = 1.01;

/// Shape of the enlarged core `K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CoreShape {
    /// `K = ∅`, the ideal gas.
    Empty,
    /// `‖x − x′‖ ≤ r⁰(σ, σ′) + pad`.
    Radial { pad: f64 },
    /// The rod-intersection set itself.
    Rods { r: f64 },
}

/// Data of the mollification used for potentials with jumps or tails.
#[derive(Clone, Debug)]
pub struct Smoothing {
    profile: Profile,
    /// Collar half-width around each jump.
    pub collar: f64,
    /// Bump half-width.
    pub delta: f64,
    /// Lipschitz constant of `V` between collars, outside `K`.
    pub lipschitz: f64,
    /// Collar height `M`.
    pub height: f64,
    /// Outermost jump radius `R`; beyond `R + 2δ` the profile equals `V`.
    pub big_r: f64,
    /// Grid maximum of `r^α (|V̄″| + 2|V̄′|/r)` outside `K`, inflated slightly.
    pub c_prime: f64,
    /// `c′ 2^α`.
    pub c_second: f64,
}

impl Smoothing {
    pub fn profile(&self) -> &Profile {
        &self.profile
    }
}

/// `(K, Ū, u, ψ)` together with the enlargement `ε`.
#[derive(Clone, Debug)]
pub struct SmoothDecomposition {
    model: PotentialModel,
    core: CoreShape,
    eps: f64,
    eps0: f64,
    gamma_target: f64,
    u_range: f64,
    smoothing: Option<Smoothing>,
}

/// Half of the positive root of `π e² + 2 a π e = γ`.
fn half_root_radial(a: f64, gamma: f64) -> f64 {
    0.5 * ((a * a + gamma / PI).sqrt() - a)
}

/// Half of the positive root of `π e² + 8 r e = γ`, the area of the
/// `e`-neighbourhood of a parallelogram with side lengths `2r`.
fn half_root_rods(r: f64, gamma: f64) -> f64 {
    0.5 * ((64.0 * r * r + 4.0 * PI * gamma).sqrt() - 8.0 * r) / (2.0 * PI)
}

pub fn smooth_decompose(
    model: &PotentialModel,
    gamma: f64,
    mollifier_width: f64,
) -> Result<SmoothDecomposition, PotentialError> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(PotentialError::Parameter(format!("gamma must be positive, got {gamma}")));
    }
    if !(mollifier_width > 0.0) {
        return Err(PotentialError::Parameter(format!(
            "mollifier width must be positive, got {mollifier_width}"
        )));
    }
    use PotentialDescriptor::*;
    let base = SmoothDecomposition {
        model: *model,
        core: CoreShape::Empty,
        eps: 0.5,
        eps0: 0.0,
        gamma_target: gamma,
        u_range: 0.0,
        smoothing: None,
    };
    Ok(match model.descriptor() {
        Ideal => base,
        HardRods { r } => SmoothDecomposition {
            core: CoreShape::Rods { r },
            eps: half_root_rods(r, gamma).min(0.5),
            ..base
        },
        HardCore { .. } | WidomRowlinson { .. } | RandomRadiiDisks { .. } => {
            let r = model.max_core_radius();
            let eps0 = half_root_radial(r.max(1.0), gamma).min(0.5);
            SmoothDecomposition {
                core: CoreShape::Radial { pad: eps0 },
                eps: half_root_radial(r + eps0, gamma).min(0.5),
                eps0,
                ..base
            }
        }
        SoftCore { r1, .. } | Well { r1, .. } => mollified(model, gamma, mollifier_width, Some(r1))?,
        LennardJones { .. } => mollified(model, gamma, mollifier_width, None)?,
    })
}

/// The mollification for a radial profile with a single outer jump `r1`,
/// or none (smooth away from the origin).
fn mollified(
    model: &PotentialModel,
    gamma: f64,
    width: f64,
    jump: Option<f64>,
) -> Result<SmoothDecomposition, PotentialError> {
    let r0 = model.max_core_radius();
    let r_eff = jump.unwrap_or(r0).max(1.0);
    let eps0 = half_root_radial(r_eff, gamma).min(0.5);
    let r_k = r0 + eps0;
    // A smooth profile gets a nominal jump inside K, which makes u vanish off K.
    let big_r = jump.unwrap_or(0.5 * eps0);
    let jumps = [big_r];
    let n = jumps.len() as f64;
    let collar = (0.25 * eps0).min(0.5 * gamma / (16.0 * n * PI * r_eff));
    let height = model.sup_abs_beyond(r0 + collar);

    // Gaps between collars, before the bump width is fixed.
    let raw_gaps = gaps(r0, &jumps, collar);
    let lipschitz = raw_gaps
        .iter()
        .filter_map(|&(a, b)| {
            let a = a.max(r_k);
            (a < b).then(|| {
                (0..=2000)
                    .map(|i| model.radial(a + (b - a) * i as f64 / 2000.0)[1].abs())
                    .fold(0.0, f64::max)
            })
        })
        .fold(0.0, f64::max);
    let mut delta = width.min(0.25 * collar);
    if lipschitz > 0.0 {
        delta = delta.min(0.5 * gamma / (4.0 * lipschitz * (r_eff + collar).powi(2) * PI));
    }
    if !(delta > 1e-12 * r_eff) {
        return Err(PotentialError::Infeasible {
            bound: "mollifier width".into(),
            value: delta,
        });
    }

    let segments = build_segments(model, r0, &jumps, collar, delta, height, lipschitz);
    let profile = Profile::new(*model, Bump::new(delta), segments.clone(), big_r);

    let mut pts: Vec<f64> = Vec::new();
    let top = big_r + 3.0 * delta;
    if r_k < top {
        pts.extend((0..=20_000).map(|i| r_k + (top - r_k) * i as f64 / 20_000.0));
        let mut knots: Vec<f64> = segments.iter().flat_map(|s| [s.a, s.b]).filter(|x| x.is_finite()).collect();
        knots.extend([big_r, big_r + delta, big_r + 2.0 * delta]);
        for k in knots {
            pts.extend((0..=400).map(|i| k - 2.0 * delta + 4.0 * delta * i as f64 / 400.0).filter(|&r| r >= r_k));
        }
    }
    let tail_lo = r_k.max(big_r + 2.0 * delta);
    let tail_hi = model.range().max(tail_lo);
    if tail_hi > tail_lo {
        let ratio = (tail_hi / tail_lo).ln();
        pts.extend((0..=4000).map(|i| tail_lo * (ratio * i as f64 / 4000.0).exp()));
    }
    let c_prime = GRID_SAFETY
        * pts
            .iter()
            .map(|&r| {
                let v = profile.bar(r);
                r.powi(PSI_EXPONENT) * (v[2].abs() + 2.0 * v[1].abs() / r)
            })
            .fold(0.0, f64::max);
    if !c_prime.is_finite() {
        return Err(PotentialError::Infeasible {
            bound: "c'".into(),
            value: c_prime,
        });
    }

    Ok(SmoothDecomposition {
        model: *model,
        core: CoreShape::Radial { pad: eps0 },
        eps: half_root_radial(r_k, gamma).min(0.5),
        eps0,
        gamma_target: gamma,
        u_range: big_r + collar + 2.0 * delta,
        smoothing: Some(Smoothing {
            profile,
            collar,
            delta,
            lipschitz,
            height,
            big_r,
            c_prime,
            c_second: c_prime * 2f64.powi(PSI_EXPONENT),
        }),
    })
}

/// Open intervals between the collars `[r⁽ⁱ⁾ − ε, r⁽ⁱ⁾ + ε]`, with
/// everything below `r⁰ + ε` and above `R − ε` counted as collar.
fn gaps(r0: f64, jumps: &[f64], collar: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut lo = r0 + collar;
    for &r in jumps {
        let hi = r - collar;
        if hi > lo {
            out.push((lo, hi));
        }
        lo = lo.max(r + collar);
    }
    out
}

fn build_segments(
    model: &PotentialModel,
    r0: f64,
    jumps: &[f64],
    collar: f64,
    delta: f64,
    height: f64,
    lipschitz: f64,
) -> Vec<Segment> {
    let lift = delta * lipschitz;
    let w = collar + delta;
    let mut segs: Vec<Segment> = Vec::new();
    let mut push = |a: f64, b: f64, piece: Piece| {
        if let Some(last) = segs.last_mut() {
            if last.piece == piece && matches!(piece, Piece::Const(_)) {
                last.b = b;
                return;
            }
        }
        segs.push(Segment { a, b, piece });
    };
    let mut lo = f64::NEG_INFINITY;
    let mut hi = r0 + w;
    for (i, &r) in jumps.iter().enumerate() {
        let start = r - w;
        if start > hi {
            push(lo, hi, Piece::Const(height));
            let (a, b) = (hi, start);
            let mid = 0.5 * (a + b);
            let flat = (0..=64).all(|k| {
                let v = model.radial(a + (b - a) * k as f64 / 64.0);
                v[1] == 0.0 && v[0] == model.radial(mid)[0]
            });
            let piece = if flat {
                Piece::Const(model.radial(mid)[0] + lift)
            } else {
                Piece::Lifted(lift)
            };
            push(a, b, piece);
            lo = start;
        }
        hi = if i + 1 == jumps.len() { f64::INFINITY } else { hi.max(r + w) };
    }
    push(lo, f64::INFINITY.max(hi), Piece::Const(height));
    segs
}

impl SmoothDecomposition {
    pub fn model(&self) -> &PotentialModel {
        &self.model
    }

    pub fn core(&self) -> CoreShape {
        self.core
    }

    /// The enlargement `ε` of `K_ε`.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Replaces the enlargement `ε`.
    pub fn with_eps(mut self, eps: f64) -> Result<Self, PotentialError> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(PotentialError::Parameter(format!("eps must lie in (0, 1), got {eps}")));
        }
        self.eps = eps;
        Ok(self)
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn gamma_target(&self) -> f64 {
        self.gamma_target
    }

    /// Distance beyond which `u` vanishes.
    pub fn u_range(&self) -> f64 {
        self.u_range
    }

    pub fn smoothing(&self) -> Option<&Smoothing> {
        self.smoothing.as_ref()
    }

    /// Distance beyond which `Ū` vanishes.
    pub fn u_bar_range(&self) -> f64 {
        if self.smoothing.is_some() {
            self.model.range().max(self.u_range)
        } else {
            0.0
        }
    }

    /// The trivial decomposition `K = K^U`, `Ū = u = ψ = 0` for a pure hard
    /// core, with a caller-chosen enlargement.
    pub fn trivial(model: &PotentialModel, eps: f64) -> Result<Self, PotentialError> {
        if !model.is_pure_hard_core() {
            return Err(PotentialError::Parameter(
                "the trivial decomposition needs a pure hard-core model".into(),
            ));
        }
        let core = match model.descriptor() {
            PotentialDescriptor::Ideal => CoreShape::Empty,
            PotentialDescriptor::HardRods { r } => CoreShape::Rods { r },
            _ => CoreShape::Radial { pad: 0.0 },
        };
        SmoothDecomposition {
            model: *model,
            core,
            eps: 0.5,
            eps0: 0.0,
            gamma_target: f64::NAN,
            u_range: 0.0,
            smoothing: None,
        }
        .with_eps(eps)
    }

    /// Radius of the radial core for this spin pair.
    pub fn core_radius(&self, a: &Particle, b: &Particle) -> Option<f64> {
        match self.core {
            CoreShape::Radial { pad } => Some(self.model.core_radius(a, b).unwrap_or(0.0) + pad),
            _ => None,
        }
    }

    /// `d_K(a, b) = inf{ε′ > 0 : (a, b) ∈ K_ε′}`; `+∞` when `K` is empty.
    pub fn d_k(&self, a: &Particle, b: &Particle) -> f64 {
        match self.core {
            CoreShape::Empty => f64::INFINITY,
            CoreShape::Radial { .. } => {
                let d = dist(a.x, b.x);
                let rk = self.core_radius(a, b).unwrap_or(0.0);
                if d <= rk {
                    0.0
                } else {
                    d - rk
                }
            }
            CoreShape::Rods { .. } => {
                let (p, q, s, t) = self.model.rod_pair(a, b).expect("rod model");
                segment::distance(p, q, s, t)
            }
        }
    }

    /// `∂/∂x₁` of `d_K(a, ·)` at `b`.
    pub fn d_k_grad_e1(&self, a: &Particle, b: &Particle) -> f64 {
        match self.core {
            CoreShape::Empty => 0.0,
            CoreShape::Radial { .. } => {
                let d = dist(a.x, b.x);
                if d <= self.core_radius(a, b).unwrap_or(0.0) {
                    0.0
                } else {
                    (b.x[0] - a.x[0]) / d
                }
            }
            CoreShape::Rods { .. } => {
                let h = 1e-6 * (1.0 + b.x[0].hypot(b.x[1]));
                (self.d_k(a, &b.shifted(h)) - self.d_k(a, &b.shifted(-h))) / (2.0 * h)
            }
        }
    }

    /// Closed-core membership `(a, b) ∈ K`.
    pub fn k_test(&self, a: &Particle, b: &Particle) -> bool {
        self.d_k(a, b) == 0.0
    }

    /// `(a, b) ∈ K_ε`.
    pub fn in_k_eps(&self, a: &Particle, b: &Particle) -> bool {
        self.d_k(a, b) < self.eps
    }

    /// `‖K_ε‖`, the largest position offset of a pair in `K_ε`.
    pub fn c_k(&self) -> f64 {
        match self.core {
            CoreShape::Empty => 0.0,
            CoreShape::Radial { pad } => self.model.max_core_radius() + pad + self.eps,
            CoreShape::Rods { r } => 2.0 * r + self.eps,
        }
    }

    pub fn u_bar(&self, a: &Particle, b: &Particle) -> f64 {
        match &self.smoothing {
            Some(s) if !self.k_test(a, b) => s.profile.bar(dist(a.x, b.x))[0],
            _ => 0.0,
        }
    }

    pub fn u_small(&self, a: &Particle, b: &Particle) -> f64 {
        match &self.smoothing {
            Some(s) if !self.k_test(a, b) => {
                let r = dist(a.x, b.x);
                if r > self.u_range {
                    0.0
                } else {
                    (s.profile.bar(r)[0] - self.model.evaluate(a, b)).max(0.0)
                }
            }
            _ => 0.0,
        }
    }

    pub fn psi(&self, a: &Particle, b: &Particle) -> f64 {
        match &self.smoothing {
            Some(s) if !self.k_test(a, b) => s.c_second / dist(a.x, b.x).powi(PSI_EXPONENT),
            _ => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Spin;
    use crate::potential::make_model;

    fn at(x: f64, y: f64) -> Particle {
        Particle::new(0, [x, y], Spin::Unit)
    }

    #[test]
    fn hard_core_enlargement_solves_the_area_budget() {
        let m = make_model(PotentialDescriptor::HardCore { r0: 1.0 }).unwrap();
        let d = smooth_decompose(&m, 0.1, 1e-3).unwrap();
        let e0 = d.eps0();
        assert!(2.0 * e0 * PI + e0 * e0 * PI < 0.1);
        assert!(e0 > 0.0);
        assert_eq!(d.core_radius(&at(0.0, 0.0), &at(1.0, 0.0)), Some(1.0 + e0));
        assert_eq!(d.u_small(&at(0.0, 0.0), &at(3.0, 0.0)), 0.0);
        assert_eq!(d.u_bar(&at(0.0, 0.0), &at(3.0, 0.0)), 0.0);
    }

    #[test]
    fn radial_distance_to_core() {
        let m = make_model(PotentialDescriptor::HardCore { r0: 1.0 }).unwrap();
        let d = SmoothDecomposition::trivial(&m, 0.1).unwrap();
        assert_eq!(d.d_k(&at(0.0, 0.0), &at(1.0, 0.0)), 0.0);
        assert_eq!(d.d_k(&at(0.0, 0.0), &at(2.5, 0.0)), 1.5);
        assert!(d.k_test(&at(0.0, 0.0), &at(0.0, 1.0)));
        assert!(d.in_k_eps(&at(0.0, 0.0), &at(1.05, 0.0)));
        assert!(!d.in_k_eps(&at(0.0, 0.0), &at(1.1, 0.0)));
    }

    #[test]
    fn soft_core_profile_is_a_smoothed_step() {
        let m = make_model(PotentialDescriptor::SoftCore { c1: 1.0, r1: 1.0 }).unwrap();
        let d = smooth_decompose(&m, 2.0 / 3.0, 1e-3).unwrap();
        let s = d.smoothing().unwrap();
        assert_eq!(s.lipschitz, 0.0);
        assert_eq!(d.u_bar(&at(0.0, 0.0), &at(0.5, 0.0)), 1.0);
        assert_eq!(d.u_small(&at(0.0, 0.0), &at(0.5, 0.0)), 0.0);
        let past = 1.0 + 2.0 * s.delta + 1e-9;
        assert_eq!(d.u_bar(&at(0.0, 0.0), &at(past, 0.0)), 0.0);
        let mid = d.u_small(&at(0.0, 0.0), &at(1.0 + s.delta, 0.0));
        assert!((mid - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lennard_jones_needs_no_small_part() {
        let m = make_model(PotentialDescriptor::LennardJones { c1: 4.0, c2: 4.0, cutoff: None }).unwrap();
        let d = smooth_decompose(&m, 0.2, 1e-3).unwrap();
        for &r in &[d.eps0() * 1.001, 0.5, 1.0, 1.3, 2.0] {
            let (a, b) = (at(0.0, 0.0), at(r, 0.0));
            assert_eq!(d.u_small(&a, &b), 0.0, "{r}");
            assert_eq!(d.u_bar(&a, &b), m.evaluate(&a, &b));
        }
    }

    #[test]
    fn trivial_requires_pure_hard_core() {
        let m = make_model(PotentialDescriptor::SoftCore { c1: 1.0, r1: 1.0 }).unwrap();
        assert!(SmoothDecomposition::trivial(&m, 0.1).is_err());
    }
}

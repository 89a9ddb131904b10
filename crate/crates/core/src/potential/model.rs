use serde::{Deserialize, Serialize};

use super::{segment, PotentialError};
use crate::config::{dist, Particle, SpinSpace};

/// Model descriptor as it appears in experiment files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PotentialDescriptor {
    /// `U ≡ 0`.
    Ideal,
    /// `U = ∞` below `r0`, zero beyond.
    HardCore { r0: f64 },
    /// `U = c1` below `r1`, zero beyond.
    SoftCore { c1: f64, r1: f64 },
    /// Hard core below `r0`, well of depth `c1` up to `r1`, tail `c2 / r³`.
    Well {
        r0: f64,
        r1: f64,
        c1: f64,
        c2: f64,
        #[serde(default)]
        cutoff: Option<f64>,
    },
    /// `c1 / r¹² − c2 / r⁶`.
    LennardJones {
        c1: f64,
        c2: f64,
        #[serde(default)]
        cutoff: Option<f64>,
    },
    /// `q` species; unlike species cannot come closer than `2r`.
    WidomRowlinson { q: u32, r: f64 },
    /// Disks with radius marks uniform on `[0, r_max]`.
    RandomRadiiDisks { r_max: f64 },
    /// Rods of half-length `r` that may not intersect.
    HardRods { r: f64 },
}

/// Smooth tails are multiplied by a C² switch on `[on, cut]` so that every
/// model has a finite interaction range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Switch {
    pub on: f64,
    pub cut: f64,
}

impl Switch {
    fn new(cut: f64) -> Self {
        Switch { on: 0.8 * cut, cut }
    }

    /// `(S, S', S'')` at `r`.
    pub fn eval(&self, r: f64) -> [f64; 3] {
        if r <= self.on {
            return [1.0, 0.0, 0.0];
        }
        if r >= self.cut {
            return [0.0, 0.0, 0.0];
        }
        let w = self.cut - self.on;
        let x = (r - self.on) / w;
        let x2 = x * x;
        let s = 1.0 - x * x2 * (10.0 - 15.0 * x + 6.0 * x2);
        let d1 = -30.0 * x2 * (1.0 - x) * (1.0 - x) / w;
        let d2 = -60.0 * x * (1.0 - x) * (1.0 - 2.0 * x) / (w * w);
        [s, d1, d2]
    }
}

/// A validated pair potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialModel {
    desc: PotentialDescriptor,
    switch: Option<Switch>,
}

pub fn make_model(desc: PotentialDescriptor) -> Result<PotentialModel, PotentialError> {
    use PotentialDescriptor::*;
    let pos = |name: &'static str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(PotentialError::Parameter(format!("{name} must be positive and finite, got {v}")))
        }
    };
    let switch = match desc {
        Ideal => None,
        HardCore { r0 } => {
            pos("r0", r0)?;
            None
        }
        SoftCore { c1, r1 } => {
            pos("c1", c1)?;
            pos("r1", r1)?;
            None
        }
        Well { r0, r1, c1, c2, cutoff } => {
            pos("r0", r0)?;
            pos("r1", r1)?;
            pos("c1", c1)?;
            pos("c2", c2)?;
            if r1 <= r0 {
                return Err(PotentialError::Parameter(format!("need r0 < r1, got {r0} >= {r1}")));
            }
            let sw = Switch::new(cutoff.unwrap_or(3.0 * r1));
            if sw.on < r1 {
                return Err(PotentialError::Parameter(format!(
                    "cutoff {} leaves no room for the tail switch beyond r1 = {r1}",
                    sw.cut
                )));
            }
            Some(sw)
        }
        LennardJones { c1, c2, cutoff } => {
            pos("c1", c1)?;
            pos("c2", c2)?;
            let sigma = (c1 / c2).powf(1.0 / 6.0);
            let cut = cutoff.unwrap_or(2.5 * sigma);
            pos("cutoff", cut)?;
            Some(Switch::new(cut))
        }
        WidomRowlinson { q, r } => {
            pos("r", r)?;
            if q < 2 {
                return Err(PotentialError::Parameter(format!("need q >= 2, got {q}")));
            }
            None
        }
        RandomRadiiDisks { r_max } => {
            pos("r_max", r_max)?;
            None
        }
        HardRods { r } => {
            pos("r", r)?;
            None
        }
    };
    Ok(PotentialModel { desc, switch })
}

impl PotentialModel {
    pub fn descriptor(&self) -> PotentialDescriptor {
        self.desc
    }

    pub fn spin_space(&self) -> SpinSpace {
        match self.desc {
            PotentialDescriptor::WidomRowlinson { q, .. } => SpinSpace::Discrete { q },
            PotentialDescriptor::RandomRadiiDisks { r_max } => SpinSpace::Scalar { lo: 0.0, hi: r_max },
            PotentialDescriptor::HardRods { .. } => SpinSpace::Direction,
            _ => SpinSpace::Unit,
        }
    }

    /// Distance beyond which `U` vanishes identically.
    pub fn range(&self) -> f64 {
        use PotentialDescriptor::*;
        match self.desc {
            Ideal => 0.0,
            HardCore { r0 } => r0,
            SoftCore { r1, .. } => r1,
            Well { .. } | LennardJones { .. } => self.switch.map_or(0.0, |s| s.cut),
            WidomRowlinson { r, .. } => 2.0 * r,
            RandomRadiiDisks { r_max } => 2.0 * r_max,
            HardRods { r } => 2.0 * r,
        }
    }

    /// Whether `U ≥ 0` everywhere.
    pub fn is_nonnegative(&self) -> bool {
        !matches!(
            self.desc,
            PotentialDescriptor::Well { .. } | PotentialDescriptor::LennardJones { .. }
        )
    }

    /// Whether `U` only takes the values 0 and ∞.
    pub fn is_pure_hard_core(&self) -> bool {
        use PotentialDescriptor::*;
        matches!(
            self.desc,
            Ideal | HardCore { .. } | WidomRowlinson { .. } | RandomRadiiDisks { .. } | HardRods { .. }
        )
    }

    /// Hard-core radius `r⁰` for radially symmetric cores; `None` for rods
    /// and for the ideal gas.
    pub fn core_radius(&self, a: &Particle, b: &Particle) -> Option<f64> {
        use PotentialDescriptor::*;
        match self.desc {
            Ideal | HardRods { .. } => None,
            HardCore { r0 } | Well { r0, .. } => Some(r0),
            SoftCore { .. } | LennardJones { .. } => Some(0.0),
            WidomRowlinson { r, .. } => Some(if a.spin.label() != b.spin.label() { 2.0 * r } else { 0.0 }),
            RandomRadiiDisks { .. } => Some(a.spin.scalar().unwrap_or(0.0) + b.spin.scalar().unwrap_or(0.0)),
        }
    }

    /// Supremum of `r⁰` over the spin space.
    pub fn max_core_radius(&self) -> f64 {
        use PotentialDescriptor::*;
        match self.desc {
            Ideal | HardRods { .. } | SoftCore { .. } | LennardJones { .. } => 0.0,
            HardCore { r0 } | Well { r0, .. } => r0,
            WidomRowlinson { r, .. } => 2.0 * r,
            RandomRadiiDisks { r_max } => 2.0 * r_max,
        }
    }

    /// `(U, U', U'')` of the radial profile at distance `r`, for the
    /// spin-free radial models. Values below the hard core are `+∞`.
    pub fn radial(&self, r: f64) -> [f64; 3] {
        use PotentialDescriptor::*;
        let inf = [f64::INFINITY, 0.0, 0.0];
        match self.desc {
            Ideal => [0.0; 3],
            HardCore { r0 } => {
                if r < r0 {
                    inf
                } else {
                    [0.0; 3]
                }
            }
            SoftCore { c1, r1 } => {
                if r < r1 {
                    [c1, 0.0, 0.0]
                } else {
                    [0.0; 3]
                }
            }
            Well { r0, r1, c1, c2, .. } => {
                if r < r0 {
                    inf
                } else if r < r1 {
                    [-c1, 0.0, 0.0]
                } else {
                    let v = [c2 / r.powi(3), -3.0 * c2 / r.powi(4), 12.0 * c2 / r.powi(5)];
                    self.switched(v, r)
                }
            }
            LennardJones { c1, c2, .. } => {
                if r <= 0.0 {
                    return inf;
                }
                let r6 = r.powi(6);
                let r12 = r6 * r6;
                let v = [
                    c1 / r12 - c2 / r6,
                    -12.0 * c1 / (r12 * r) + 6.0 * c2 / (r6 * r),
                    156.0 * c1 / (r12 * r * r) - 42.0 * c2 / (r6 * r * r),
                ];
                self.switched(v, r)
            }
            WidomRowlinson { .. } | RandomRadiiDisks { .. } | HardRods { .. } => [f64::NAN; 3],
        }
    }

    fn switched(&self, v: [f64; 3], r: f64) -> [f64; 3] {
        let Some(sw) = self.switch else { return v };
        let [s, s1, s2] = sw.eval(r);
        [
            v[0] * s,
            v[1] * s + v[0] * s1,
            v[2] * s + 2.0 * v[1] * s1 + v[0] * s2,
        ]
    }

    /// Hard-core membership `(a, b) ∈ K^U`.
    pub fn hard_core_test(&self, a: &Particle, b: &Particle) -> bool {
        self.evaluate(a, b) == f64::INFINITY
    }

    /// `U(a, b)`, possibly `+∞`.
    pub fn evaluate(&self, a: &Particle, b: &Particle) -> f64 {
        use PotentialDescriptor::*;
        let dx = [b.x[0] - a.x[0], b.x[1] - a.x[1]];
        match self.desc {
            Ideal => 0.0,
            HardRods { r } => {
                let (p, q) = segment::rod([0.0, 0.0], r, a.spin.angle().unwrap_or(0.0));
                let (s, t) = segment::rod(dx, r, b.spin.angle().unwrap_or(0.0));
                if segment::intersect(p, q, s, t) {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            WidomRowlinson { .. } | RandomRadiiDisks { .. } => {
                let r0 = self.core_radius(a, b).unwrap_or(0.0);
                if dist([0.0, 0.0], dx) < r0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            _ => self.radial(dist([0.0, 0.0], dx))[0],
        }
    }

    /// Rod endpoints relative to `a`, used by the distance-to-core function.
    pub(crate) fn rod_pair(&self, a: &Particle, b: &Particle) -> Option<([f64; 2], [f64; 2], [f64; 2], [f64; 2])> {
        let PotentialDescriptor::HardRods { r } = self.desc else {
            return None;
        };
        let dx = [b.x[0] - a.x[0], b.x[1] - a.x[1]];
        let (p, q) = segment::rod([0.0, 0.0], r, a.spin.angle().unwrap_or(0.0));
        let (s, t) = segment::rod(dx, r, b.spin.angle().unwrap_or(0.0));
        Some((p, q, s, t))
    }

    /// Largest finite `|U|` on `[a, ∞)`, used as the collar height `M`.
    pub(crate) fn sup_abs_beyond(&self, a: f64) -> f64 {
        use PotentialDescriptor::*;
        match self.desc {
            SoftCore { c1, r1 } => {
                if a < r1 {
                    c1
                } else {
                    0.0
                }
            }
            Well { r1, c1, c2, .. } => {
                let tail = c2 / a.max(r1).powi(3);
                if a < r1 {
                    c1.max(tail)
                } else {
                    tail
                }
            }
            LennardJones { c1, c2, .. } => {
                let rmin = (2.0 * c1 / c2).powf(1.0 / 6.0);
                let depth = if rmin >= a { c2 * c2 / (4.0 * c1) } else { 0.0 };
                self.radial(a)[0].abs().max(depth)
            }
            _ => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Spin;

    fn at(x: f64, y: f64, spin: Spin) -> Particle {
        Particle::new(0, [x, y], spin)
    }

    #[test]
    fn widom_rowlinson_blocks_unlike_species_only() {
        let m = make_model(PotentialDescriptor::WidomRowlinson { q: 2, r: 0.5 }).unwrap();
        let a = at(0.0, 0.0, Spin::Discrete { label: 0 });
        let b = at(0.6, 0.0, Spin::Discrete { label: 1 });
        let c = at(0.6, 0.0, Spin::Discrete { label: 0 });
        assert_eq!(m.evaluate(&a, &b), f64::INFINITY);
        assert_eq!(m.evaluate(&a, &c), 0.0);
    }

    #[test]
    fn lennard_jones_zero_crossing() {
        let m = make_model(PotentialDescriptor::LennardJones { c1: 4.0, c2: 4.0, cutoff: None }).unwrap();
        assert_eq!(m.evaluate(&at(0.0, 0.0, Spin::Unit), &at(1.0, 0.0, Spin::Unit)), 0.0);
        assert_eq!(m.evaluate(&at(0.0, 0.0, Spin::Unit), &at(0.0, 0.0, Spin::Unit)), f64::INFINITY);
    }

    #[test]
    fn rods_overlap_when_collinear() {
        let m = make_model(PotentialDescriptor::HardRods { r: 1.0 }).unwrap();
        let d = Spin::Direction { angle: 0.0 };
        assert_eq!(m.evaluate(&at(0.0, 0.0, d), &at(0.1, 0.0, d)), f64::INFINITY);
        assert_eq!(m.evaluate(&at(0.0, 0.0, d), &at(0.0, 0.1, d)), 0.0);
        let v = Spin::Direction { angle: std::f64::consts::FRAC_PI_2 };
        assert_eq!(m.evaluate(&at(0.0, 0.0, v), &at(0.0, 0.1, v)), f64::INFINITY);
    }

    #[test]
    fn parameter_errors() {
        assert!(make_model(PotentialDescriptor::HardCore { r0: 0.0 }).is_err());
        assert!(make_model(PotentialDescriptor::WidomRowlinson { q: 1, r: 1.0 }).is_err());
        assert!(make_model(PotentialDescriptor::HardRods { r: -1.0 }).is_err());
        assert!(make_model(PotentialDescriptor::Well { r0: 1.0, r1: 0.5, c1: 1.0, c2: 1.0, cutoff: None }).is_err());
    }

    #[test]
    fn switch_is_c2() {
        let sw = Switch::new(2.0);
        for &r in &[sw.on, sw.cut] {
            let lo = sw.eval(r - 1e-9);
            let hi = sw.eval(r + 1e-9);
            for k in 0..3 {
                assert!((lo[k] - hi[k]).abs() < 1e-6, "{k} {lo:?} {hi:?}");
            }
        }
        let h = 1e-5;
        let r = 0.8 * 2.0 + 0.13;
        let fd1 = (sw.eval(r + h)[0] - sw.eval(r - h)[0]) / (2.0 * h);
        let fd2 = (sw.eval(r + h)[1] - sw.eval(r - h)[1]) / (2.0 * h);
        assert!((fd1 - sw.eval(r)[1]).abs() < 1e-7);
        assert!((fd2 - sw.eval(r)[2]).abs() < 1e-6);
    }

    #[test]
    fn radial_derivatives_match_differences() {
        let models = [
            PotentialDescriptor::Well { r0: 1.0, r1: 1.5, c1: 1.0, c2: 1.0, cutoff: None },
            PotentialDescriptor::LennardJones { c1: 4.0, c2: 4.0, cutoff: None },
        ];
        for d in models {
            let m = make_model(d).unwrap();
            for &r in &[1.7, 2.1, 2.3, 2.45, 3.9] {
                let h = 1e-5;
                let fd1 = (m.radial(r + h)[0] - m.radial(r - h)[0]) / (2.0 * h);
                let fd2 = (m.radial(r + h)[1] - m.radial(r - h)[1]) / (2.0 * h);
                assert!((fd1 - m.radial(r)[1]).abs() < 1e-6, "{d:?} {r}");
                assert!((fd2 - m.radial(r)[2]).abs() < 1e-5, "{d:?} {r}");
            }
        }
    }
}

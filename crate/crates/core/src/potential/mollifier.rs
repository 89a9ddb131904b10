//! Smoothing of piecewise radial profiles by convolution with a bump.

use super::model::PotentialModel;
use super::quad::{gauss8, gauss8_composite};

const CELLS: usize = 256;

/// The density `exp(−1/(1−(s/δ)²))`, normalized, supported on `(−δ, δ)`.
#[derive(Clone, Debug)]
pub struct Bump {
    delta: f64,
    norm: f64,
    h: f64,
    cum: Vec<f64>,
}

fn kernel(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

impl Bump {
    pub fn new(delta: f64) -> Self {
        let norm = gauss8_composite(-1.0, 1.0, 512, kernel);
        let h = 2.0 * delta / CELLS as f64;
        let mut bump = Bump {
            delta,
            norm,
            h,
            cum: Vec::with_capacity(CELLS + 1),
        };
        let mut acc = 0.0;
        bump.cum.push(0.0);
        for i in 0..CELLS {
            let lo = -delta + h * i as f64;
            acc += gauss8(lo, lo + h, |s| bump.pdf(s));
            bump.cum.push(acc);
        }
        bump
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn pdf(&self, s: f64) -> f64 {
        kernel(s / self.delta) / (self.norm * self.delta)
    }

    pub fn d1(&self, s: f64) -> f64 {
        let x = s / self.delta;
        if x.abs() >= 1.0 {
            return 0.0;
        }
        let w = 1.0 - x * x;
        self.pdf(s) * (-2.0 * x) / (self.delta * w * w)
    }

    pub fn d2(&self, s: f64) -> f64 {
        let x = s / self.delta;
        if x.abs() >= 1.0 {
            return 0.0;
        }
        let w = 1.0 - x * x;
        let g = -2.0 * x / (w * w);
        let dg = -2.0 / (w * w) - 8.0 * x * x / (w * w * w);
        self.pdf(s) * (g * g + dg) / (self.delta * self.delta)
    }

    pub fn cdf(&self, s: f64) -> f64 {
        if s <= -self.delta {
            return 0.0;
        }
        if s >= self.delta {
            return 1.0;
        }
        let i = (((s + self.delta) / self.h).floor() as usize).min(CELLS - 1);
        let lo = -self.delta + self.h * i as f64;
        self.cum[i] + gauss8(lo, s, |t| self.pdf(t))
    }
}

/// What the pre-smoothing profile `V̂` looks like on one interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Piece {
    /// Constant value, used for the collars.
    Const(f64),
    /// `V + lift` between collars.
    Lifted(f64),
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Segment {
    pub a: f64,
    pub b: f64,
    pub piece: Piece,
}

/// `V̄`: the mollified profile below `R`, blended into `V` beyond it.
#[derive(Clone, Debug)]
pub struct Profile {
    model: PotentialModel,
    bump: Bump,
    segments: Vec<Segment>,
    big_r: f64,
}

impl Profile {
    pub(crate) fn new(model: PotentialModel, bump: Bump, segments: Vec<Segment>, big_r: f64) -> Self {
        Profile {
            model,
            bump,
            segments,
            big_r,
        }
    }

    pub fn bump(&self) -> &Bump {
        &self.bump
    }

    /// `(Ṽ, Ṽ', Ṽ'')`, the convolution of `V̂` with the bump.
    pub fn tilde(&self, r: f64) -> [f64; 3] {
        let f = &self.bump;
        let d = f.delta();
        let mut out = [0.0; 3];
        for seg in &self.segments {
            match seg.piece {
                Piece::Const(v) => {
                    let (fa, fb) = (f.cdf(r - seg.a), f.cdf(r - seg.b));
                    out[0] += v * (fa - fb);
                    out[1] += v * (f.pdf(r - seg.a) - f.pdf(r - seg.b));
                    out[2] += v * (f.d1(r - seg.a) - f.d1(r - seg.b));
                }
                Piece::Lifted(lift) => {
                    let lo = (r - seg.b).max(-d);
                    let hi = (r - seg.a).min(d);
                    if lo < hi {
                        out[0] += gauss8_composite(lo, hi, 8, |s| f.pdf(s) * (self.model.radial(r - s)[0] + lift));
                        out[1] += gauss8_composite(lo, hi, 8, |s| f.pdf(s) * self.model.radial(r - s)[1]);
                        out[2] += gauss8_composite(lo, hi, 8, |s| f.pdf(s) * self.model.radial(r - s)[2]);
                    }
                    let va = self.model.radial(seg.a);
                    let vb = self.model.radial(seg.b);
                    let (ga, gb) = (va[0] + lift, vb[0] + lift);
                    out[1] += f.pdf(r - seg.a) * ga - f.pdf(r - seg.b) * gb;
                    out[2] += f.d1(r - seg.a) * ga - f.d1(r - seg.b) * gb + f.pdf(r - seg.a) * va[1]
                        - f.pdf(r - seg.b) * vb[1];
                }
            }
        }
        out
    }

    /// `(V̄, V̄', V̄'')` at `r`.
    pub fn bar(&self, r: f64) -> [f64; 3] {
        let d = self.bump.delta();
        let big_r = self.big_r;
        if r >= big_r + 2.0 * d {
            return self.model.radial(r);
        }
        let t = self.tilde(r);
        if r <= big_r {
            return t;
        }
        let s = r - big_r - d;
        let (cf, f, f1) = (self.bump.cdf(s), self.bump.pdf(s), self.bump.d1(s));
        let v = self.model.radial(r);
        [
            t[0] * (1.0 - cf) + v[0] * cf,
            t[1] * (1.0 - cf) - t[0] * f + v[1] * cf + v[0] * f,
            t[2] * (1.0 - cf) - 2.0 * t[1] * f - t[0] * f1 + v[2] * cf + 2.0 * v[1] * f + v[0] * f1,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{make_model, PotentialDescriptor};

    #[test]
    fn bump_is_a_probability_density() {
        let b = Bump::new(0.01);
        assert!((b.cdf(0.01) - 1.0).abs() < 1e-15);
        assert!((b.cdf(0.0) - 0.5).abs() < 1e-13);
        assert!((b.cum[CELLS] - 1.0).abs() < 1e-12);
        let h = 1e-7;
        for &s in &[-0.007, -0.002, 0.0031, 0.0088] {
            assert!(((b.cdf(s + h) - b.cdf(s - h)) / (2.0 * h) - b.pdf(s)).abs() < 1e-5 * b.pdf(0.0));
            assert!(((b.pdf(s + h) - b.pdf(s - h)) / (2.0 * h) - b.d1(s)).abs() < 1e-5 * b.d1(0.005).abs());
            assert!(((b.d1(s + h) - b.d1(s - h)) / (2.0 * h) - b.d2(s)).abs() < 1e-4 * b.d2(0.0).abs());
        }
    }

    #[test]
    fn lifted_segment_reproduces_smooth_profile() {
        // Away from its ends, a lifted segment convolves to `V` shifted by the
        // lift plus a second-order smoothing error.
        let m = make_model(PotentialDescriptor::Well { r0: 1.0, r1: 1.5, c1: 1.0, c2: 1.0, cutoff: Some(10.0) }).unwrap();
        let seg = Segment { a: 1.6, b: 3.0, piece: Piece::Lifted(0.25) };
        let p = Profile::new(m, Bump::new(1e-3), vec![seg], 5.0);
        for &r in &[1.8, 2.0, 2.7] {
            let t = p.tilde(r);
            let v = m.radial(r);
            assert!((t[0] - v[0] - 0.25).abs() < 1e-6, "{r} {t:?} {v:?}");
            assert!((t[1] - v[1]).abs() < 1e-6);
            assert!((t[2] - v[2]).abs() < 1e-5);
        }
        // Near an end the value falls off like the bump cdf.
        let t = p.tilde(1.6);
        let g = m.radial(1.6)[0] + 0.25;
        assert!((t[0] - 0.5 * g).abs() < 1e-4);
    }

    #[test]
    fn constant_segment_is_a_smoothed_step() {
        let m = make_model(PotentialDescriptor::SoftCore { c1: 1.0, r1: 1.0 }).unwrap();
        let segs = vec![Segment { a: f64::NEG_INFINITY, b: 1.0, piece: Piece::Const(2.0) }];
        let p = Profile::new(m, Bump::new(0.01), segs, 10.0);
        assert_eq!(p.tilde(0.98)[0], 2.0);
        assert!((p.tilde(1.0)[0] - 1.0).abs() < 1e-13);
        assert_eq!(p.tilde(1.02)[0], 0.0);
    }
}

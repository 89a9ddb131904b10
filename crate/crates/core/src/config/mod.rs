//! Particles, spins, windows and marked configurations.
//!
//! A configuration is split into interior particles (inside the closed box
//! `[-n, n]²`) and a finite truncation of the boundary condition outside it.
//! Edges are stored by particle id so they survive any transformation that
//! moves particles.

mod cell_index;
mod cluster;
mod configuration;
mod edges;

pub use cell_index::CellIndex;
pub use cluster::{b_cluster, Adjacency};
pub use configuration::{read_jsonl, write_jsonl, MarkedConfiguration};
pub use edges::EdgeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by configuration constructors and lookups.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("window half-size must be positive, got {0}")]
    Window(f64),
    #[error("particle id {0} appears more than once")]
    DuplicateId(u64),
    #[error("unknown particle id {0}")]
    UnknownId(u64),
    #[error("edge {0}-{0} is a self-loop")]
    SelfLoop(u64),
    #[error("particle {id} at ({x}, {y}) is on the wrong side of the window")]
    Membership { id: u64, x: f64, y: f64 },
    #[error("particle {id} has a non-finite position")]
    NonFinite { id: u64 },
    #[error("spin of particle {id} is outside its space: {reason}")]
    Spin { id: u64, reason: String },
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A spin mark attached to a particle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Spin {
    /// The trivial spin space `{0}`.
    Unit,
    /// A type label, e.g. the species in a Widom-Rowlinson mixture.
    Discrete { label: u32 },
    /// A real mark such as a disk radius.
    Scalar { value: f64 },
    /// Orientation angle in `[0, π)`.
    Direction { angle: f64 },
}

impl Spin {
    pub fn label(&self) -> Option<u32> {
        match *self {
            Spin::Discrete { label } => Some(label),
            _ => None,
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match *self {
            Spin::Scalar { value } => Some(value),
            _ => None,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Spin::Direction { angle } => Some(angle),
            _ => None,
        }
    }
}

/// The spin space together with its a-priori law.
///
/// Discrete labels are uniform on `0..q`, scalars uniform on `[lo, hi]`,
/// directions uniform on `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpinSpace {
    Unit,
    Discrete { q: u32 },
    Scalar { lo: f64, hi: f64 },
    Direction,
}

impl SpinSpace {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Spin {
        match *self {
            SpinSpace::Unit => Spin::Unit,
            SpinSpace::Discrete { q } => Spin::Discrete {
                label: rng.random_range(0..q),
            },
            SpinSpace::Scalar { lo, hi } => Spin::Scalar {
                value: lo + (hi - lo) * rng.random::<f64>(),
            },
            SpinSpace::Direction => Spin::Direction {
                angle: std::f64::consts::PI * rng.random::<f64>(),
            },
        }
    }

    pub fn contains(&self, spin: &Spin) -> Result<(), String> {
        match (*self, *spin) {
            (SpinSpace::Unit, Spin::Unit) => Ok(()),
            (SpinSpace::Discrete { q }, Spin::Discrete { label }) if label < q => Ok(()),
            (SpinSpace::Scalar { lo, hi }, Spin::Scalar { value }) if (lo..=hi).contains(&value) => {
                Ok(())
            }
            (SpinSpace::Direction, Spin::Direction { angle })
                if (0.0..std::f64::consts::PI).contains(&angle) =>
            {
                Ok(())
            }
            (space, spin) => Err(format!("{spin:?} not in {space:?}")),
        }
    }

    /// Grid used for suprema over spins. Discrete spaces list every label;
    /// continuous ones use `points` equally spaced values including the ends.
    pub fn grid(&self, points: usize) -> Vec<Spin> {
        let points = points.max(2);
        match *self {
            SpinSpace::Unit => vec![Spin::Unit],
            SpinSpace::Discrete { q } => (0..q).map(|label| Spin::Discrete { label }).collect(),
            SpinSpace::Scalar { lo, hi } => (0..points)
                .map(|i| Spin::Scalar {
                    value: lo + (hi - lo) * i as f64 / (points - 1) as f64,
                })
                .collect(),
            SpinSpace::Direction => (0..points)
                .map(|i| Spin::Direction {
                    angle: std::f64::consts::PI * i as f64 / points as f64,
                })
                .collect(),
        }
    }

    /// Midpoint rule nodes for integrating against the spin law. Each node
    /// carries equal weight `1 / len`.
    pub fn quadrature(&self, points: usize) -> Vec<Spin> {
        let points = points.max(1);
        match *self {
            SpinSpace::Unit => vec![Spin::Unit],
            SpinSpace::Discrete { q } => (0..q).map(|label| Spin::Discrete { label }).collect(),
            SpinSpace::Scalar { lo, hi } => (0..points)
                .map(|i| Spin::Scalar {
                    value: lo + (hi - lo) * (i as f64 + 0.5) / points as f64,
                })
                .collect(),
            SpinSpace::Direction => (0..points)
                .map(|i| Spin::Direction {
                    angle: std::f64::consts::PI * (i as f64 + 0.5) / points as f64,
                })
                .collect(),
        }
    }
}

/// A marked point: position in the plane plus spin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub id: u64,
    pub x: [f64; 2],
    pub spin: Spin,
}

impl Particle {
    pub fn new(id: u64, x: [f64; 2], spin: Spin) -> Self {
        Particle { id, x, spin }
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(self.x)
    }

    /// Copy moved by `dx` along the first axis.
    pub fn shifted(&self, dx: f64) -> Self {
        Particle {
            x: [self.x[0] + dx, self.x[1]],
            ..*self
        }
    }
}

pub fn sup_norm(x: [f64; 2]) -> f64 {
    x[0].abs().max(x[1].abs())
}

pub fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// The closed box `[-n, n]²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub n: f64,
}

impl Window {
    pub fn new(n: f64) -> Result<Self, ConfigError> {
        if n > 0.0 && n.is_finite() {
            Ok(Window { n })
        } else {
            Err(ConfigError::Window(n))
        }
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        sup_norm(x) <= self.n
    }

    pub fn area(&self) -> f64 {
        4.0 * self.n * self.n
    }

    pub fn uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2] {
        [
            self.n * (2.0 * rng.random::<f64>() - 1.0),
            self.n * (2.0 * rng.random::<f64>() - 1.0),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_norm_examples() {
        assert_eq!(sup_norm([0.0, 0.0]), 0.0);
        assert_eq!(sup_norm([3.0, -4.0]), 4.0);
        assert_eq!(sup_norm([-5.0, 2.0]), 5.0);
    }

    #[test]
    fn window_is_closed() {
        let w = Window::new(2.0).unwrap();
        assert!(w.contains([2.0, -2.0]));
        assert!(!w.contains([2.0 + 1e-12, 0.0]));
        assert!(Window::new(0.0).is_err());
    }

    #[test]
    fn spin_space_membership() {
        assert!(SpinSpace::Direction
            .contains(&Spin::Direction { angle: std::f64::consts::PI })
            .is_err());
        assert!(SpinSpace::Discrete { q: 2 }
            .contains(&Spin::Discrete { label: 1 })
            .is_ok());
        assert!(SpinSpace::Scalar { lo: 0.0, hi: 1.0 }
            .contains(&Spin::Scalar { value: 1.5 })
            .is_err());
    }
}

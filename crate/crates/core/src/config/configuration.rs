use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{ConfigError, EdgeSet, Particle, Window};

/// Interior particles in `Λₙ`, a finite boundary truncation outside it, and
/// an edge set over all of them.
///
/// Wherever a flat index is used, interior particles come first, followed by
/// the boundary particles, each in stored order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkedConfiguration {
    pub window_n: f64,
    pub interior: Vec<Particle>,
    pub boundary: Vec<Particle>,
    pub edges: EdgeSet,
}

impl MarkedConfiguration {
    pub fn new(
        window: Window,
        interior: Vec<Particle>,
        boundary: Vec<Particle>,
        edges: EdgeSet,
    ) -> Result<Self, ConfigError> {
        let config = MarkedConfiguration {
            window_n: window.n,
            interior,
            boundary,
            edges,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn empty(window: Window) -> Self {
        MarkedConfiguration {
            window_n: window.n,
            interior: Vec::new(),
            boundary: Vec::new(),
            edges: EdgeSet::new(),
        }
    }

    pub fn window(&self) -> Window {
        Window { n: self.window_n }
    }

    /// Checks window membership, id uniqueness and edge endpoints.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let window = Window::new(self.window_n)?;
        let mut seen = HashMap::with_capacity(self.len());
        for (i, p) in self.all().enumerate() {
            if !(p.x[0].is_finite() && p.x[1].is_finite()) {
                return Err(ConfigError::NonFinite { id: p.id });
            }
            let inside = window.contains(p.x);
            if inside != (i < self.interior.len()) {
                return Err(ConfigError::Membership {
                    id: p.id,
                    x: p.x[0],
                    y: p.x[1],
                });
            }
            if seen.insert(p.id, ()).is_some() {
                return Err(ConfigError::DuplicateId(p.id));
            }
        }
        for (a, b) in self.edges.iter() {
            for id in [a, b] {
                if !seen.contains_key(&id) {
                    return Err(ConfigError::UnknownId(id));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.interior.len() + self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Interior then boundary particles.
    pub fn all(&self) -> impl Iterator<Item = &Particle> + '_ {
        self.interior.iter().chain(self.boundary.iter())
    }

    pub fn particle(&self, index: usize) -> &Particle {
        if index < self.interior.len() {
            &self.interior[index]
        } else {
            &self.boundary[index - self.interior.len()]
        }
    }

    pub fn is_boundary(&self, index: usize) -> bool {
        index >= self.interior.len()
    }

    /// Map from id to flat index.
    pub fn id_index(&self) -> HashMap<u64, usize> {
        self.all().enumerate().map(|(i, p)| (p.id, i)).collect()
    }

    pub fn positions(&self) -> Vec<[f64; 2]> {
        self.all().map(|p| p.x).collect()
    }

    /// Smallest id not used by any particle.
    pub fn next_id(&self) -> u64 {
        self.all().map(|p| p.id + 1).max().unwrap_or(0)
    }
}

/// Writes one configuration per line.
pub fn write_jsonl<W: Write>(mut out: W, configs: &[MarkedConfiguration]) -> Result<(), ConfigError> {
    for c in configs {
        serde_json::to_writer(&mut out, c).map_err(|source| ConfigError::Json { line: 0, source })?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads and validates one configuration per non-empty line.
pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<MarkedConfiguration>, ConfigError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let config: MarkedConfiguration =
            serde_json::from_str(&line).map_err(|source| ConfigError::Json { line: i + 1, source })?;
        config.validate()?;
        out.push(config);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Spin;

    fn p(id: u64, x: f64, y: f64) -> Particle {
        Particle::new(id, [x, y], Spin::Unit)
    }

    #[test]
    fn membership_is_checked() {
        let w = Window::new(1.0).unwrap();
        assert!(MarkedConfiguration::new(w, vec![p(0, 1.5, 0.0)], vec![], EdgeSet::new()).is_err());
        assert!(MarkedConfiguration::new(w, vec![], vec![p(0, 0.5, 0.0)], EdgeSet::new()).is_err());
        assert!(MarkedConfiguration::new(w, vec![p(0, 1.0, 1.0)], vec![p(1, 1.0, 1.5)], EdgeSet::new()).is_ok());
    }

    #[test]
    fn duplicate_ids_and_dangling_edges() {
        let w = Window::new(1.0).unwrap();
        assert!(matches!(
            MarkedConfiguration::new(w, vec![p(0, 0.0, 0.0), p(0, 0.5, 0.0)], vec![], EdgeSet::new()),
            Err(ConfigError::DuplicateId(0))
        ));
        let edges: EdgeSet = [(0, 7)].into_iter().collect();
        assert!(matches!(
            MarkedConfiguration::new(w, vec![p(0, 0.0, 0.0)], vec![], edges),
            Err(ConfigError::UnknownId(7))
        ));
    }

    #[test]
    fn jsonl_round_trip_is_bit_exact() {
        let w = Window::new(3.0).unwrap();
        let interior = vec![
            Particle::new(1, [0.1 + 0.2, -1.0 / 3.0], Spin::Discrete { label: 1 }),
            Particle::new(2, [f64::MIN_POSITIVE, 2.999999999999999], Spin::Direction { angle: 1.0e-300 }),
        ];
        let boundary = vec![Particle::new(5, [3.0000000000000004, 0.0], Spin::Scalar { value: 0.7 })];
        let edges: EdgeSet = [(1, 5)].into_iter().collect();
        let c = MarkedConfiguration::new(w, interior, boundary, edges).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&mut buf, std::slice::from_ref(&c)).unwrap();
        let back = read_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 1);
        for (a, b) in c.all().zip(back[0].all()) {
            assert_eq!(a.x[0].to_bits(), b.x[0].to_bits());
            assert_eq!(a.x[1].to_bits(), b.x[1].to_bits());
            assert_eq!(a.spin, b.spin);
        }
        assert_eq!(back[0], c);
    }
}

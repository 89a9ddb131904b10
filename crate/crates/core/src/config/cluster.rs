use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{ConfigError, EdgeSet, MarkedConfiguration};

/// Adjacency lists over the flat particle order of a configuration.
#[derive(Clone, Debug)]
pub struct Adjacency {
    lists: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn from_edges(
        ids: &HashMap<u64, usize>,
        len: usize,
        edges: &EdgeSet,
    ) -> Result<Self, ConfigError> {
        let mut lists = vec![Vec::new(); len];
        for (a, b) in edges.iter() {
            let ia = *ids.get(&a).ok_or(ConfigError::UnknownId(a))?;
            let ib = *ids.get(&b).ok_or(ConfigError::UnknownId(b))?;
            lists[ia].push(ib);
            lists[ib].push(ia);
        }
        Ok(Adjacency { lists })
    }

    pub fn of(config: &MarkedConfiguration) -> Result<Self, ConfigError> {
        Self::from_edges(&config.id_index(), config.len(), &config.edges)
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.lists[i]
    }

    pub fn add(&mut self, a: usize, b: usize) {
        self.lists[a].push(b);
        self.lists[b].push(a);
    }

    /// Breadth-first closure of `seeds`, visiting only indices accepted by
    /// `allow`. Seeds themselves are always included. Output keeps visit order.
    pub fn closure(&self, seeds: &[usize], mut allow: impl FnMut(usize) -> bool) -> Vec<usize> {
        let mut seen = vec![false; self.lists.len()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for &s in seeds {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(i) = queue.pop_front() {
            out.push(i);
            for &j in &self.lists[i] {
                if !seen[j] && allow(j) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        out
    }
}

/// All particles joined to a seed by a path of `edges`, seeds included.
pub fn b_cluster(
    config: &MarkedConfiguration,
    edges: &EdgeSet,
    seeds: &BTreeSet<u64>,
) -> Result<BTreeSet<u64>, ConfigError> {
    let ids = config.id_index();
    let adj = Adjacency::from_edges(&ids, config.len(), edges)?;
    let start = seeds
        .iter()
        .map(|id| ids.get(id).copied().ok_or(ConfigError::UnknownId(*id)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(adj
        .closure(&start, |_| true)
        .into_iter()
        .map(|i| config.particle(i).id)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Particle, Spin, Window};

    fn line(k: u64) -> MarkedConfiguration {
        let interior = (0..k)
            .map(|i| Particle::new(i, [i as f64 * 0.1, 0.0], Spin::Unit))
            .collect();
        MarkedConfiguration::new(Window::new(1.0).unwrap(), interior, vec![], EdgeSet::new()).unwrap()
    }

    fn set(ids: &[u64]) -> BTreeSet<u64> {
        ids.iter().copied().collect()
    }

    #[test]
    fn examples() {
        let c = line(4);
        let ab: EdgeSet = [(0, 1)].into_iter().collect();
        assert_eq!(b_cluster(&c, &ab, &set(&[0])).unwrap(), set(&[0, 1]));
        assert_eq!(b_cluster(&c, &EdgeSet::new(), &set(&[2])).unwrap(), set(&[2]));
        let chain: EdgeSet = [(0, 1), (1, 2)].into_iter().collect();
        assert_eq!(b_cluster(&c, &chain, &set(&[0])).unwrap(), set(&[0, 1, 2]));
    }

    #[test]
    fn unknown_seed() {
        let c = line(2);
        assert!(matches!(
            b_cluster(&c, &EdgeSet::new(), &set(&[9])),
            Err(ConfigError::UnknownId(9))
        ));
    }
}

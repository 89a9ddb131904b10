use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ConfigError;

/// Unordered pairs of particle ids, stored as `(min, max)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeSet {
    pairs: BTreeSet<(u64, u64)>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `{a, b}`. Returns `false` if it was already present.
    pub fn insert(&mut self, a: u64, b: u64) -> Result<bool, ConfigError> {
        if a == b {
            return Err(ConfigError::SelfLoop(a));
        }
        Ok(self.pairs.insert((a.min(b), a.max(b))))
    }

    pub fn contains(&self, a: u64, b: u64) -> bool {
        self.pairs.contains(&(a.min(b), a.max(b)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.pairs.iter().copied()
    }
}

impl FromIterator<(u64, u64)> for EdgeSet {
    /// Self-loops are dropped.
    fn from_iter<I: IntoIterator<Item = (u64, u64)>>(iter: I) -> Self {
        let pairs = iter
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        EdgeSet { pairs }
    }
}

impl Serialize for EdgeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.pairs.iter().map(|&(a, b)| [a, b]))
    }
}

impl<'de> Deserialize<'de> for EdgeSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<[u64; 2]> = Vec::deserialize(d)?;
        let mut set = EdgeSet::new();
        for [a, b] in raw {
            set.insert(a, b).map_err(serde::de::Error::custom)?;
        }
        Ok(set)
    }
}

//! Uniform grid for fixed-range neighbor queries.

use std::collections::HashMap;

use super::{dist, MarkedConfiguration};

/// Buckets point indices by square cells of side `cell`.
#[derive(Clone, Debug)]
pub struct CellIndex {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<[f64; 2]>,
}

impl CellIndex {
    /// Empty index. A non-positive or non-finite `cell` falls back to 1.
    pub fn new(cell: f64) -> Self {
        let cell = if cell > 0.0 && cell.is_finite() { cell } else { 1.0 };
        CellIndex {
            cell,
            cells: HashMap::new(),
            points: Vec::new(),
        }
    }

    pub fn from_points(points: &[[f64; 2]], cell: f64) -> Self {
        let mut idx = CellIndex::new(cell);
        for &p in points {
            idx.push(p);
        }
        idx
    }

    /// Index over the flat particle order of `config`.
    pub fn build(config: &MarkedConfiguration, range: f64) -> Self {
        Self::from_points(&config.positions(), range)
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    fn key(&self, x: [f64; 2]) -> (i64, i64) {
        ((x[0] / self.cell).floor() as i64, (x[1] / self.cell).floor() as i64)
    }

    /// Appends a point and returns its index.
    pub fn push(&mut self, x: [f64; 2]) -> usize {
        let i = self.points.len();
        self.points.push(x);
        let k = self.key(x);
        self.cells.entry(k).or_default().push(i);
        i
    }

    /// Removes point `i` from its bucket; the index stays reserved.
    pub fn remove(&mut self, i: usize) {
        let k = self.key(self.points[i]);
        if let Some(bucket) = self.cells.get_mut(&k) {
            if let Some(pos) = bucket.iter().position(|&j| j == i) {
                bucket.swap_remove(pos);
            }
            if bucket.is_empty() {
                self.cells.remove(&k);
            }
        }
    }

    /// Moves point `i` to `x`.
    pub fn relocate(&mut self, i: usize, x: [f64; 2]) {
        self.remove(i);
        self.points[i] = x;
        let k = self.key(x);
        self.cells.entry(k).or_default().push(i);
    }

    pub fn point(&self, i: usize) -> [f64; 2] {
        self.points[i]
    }

    /// Calls `f` for every candidate in the cells overlapping the square of
    /// half-side `range` around `x`. Candidates may be farther than `range`.
    pub fn for_each_candidate(&self, x: [f64; 2], range: f64, mut f: impl FnMut(usize)) {
        let (cx, cy) = self.key(x);
        let reach = (range / self.cell).ceil().max(1.0) as i64;
        for i in cx - reach..=cx + reach {
            for j in cy - reach..=cy + reach {
                if let Some(bucket) = self.cells.get(&(i, j)) {
                    bucket.iter().for_each(|&k| f(k));
                }
            }
        }
    }

    /// Indices within Euclidean distance `≤ range` of `x`, in ascending order.
    pub fn within(&self, x: [f64; 2], range: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_candidate(x, range, |k| {
            if dist(self.points[k], x) <= range {
                out.push(k);
            }
        });
        out.sort_unstable();
        out
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

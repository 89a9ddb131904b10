//! The cluster recursion defining `t_n^Ȳ`, and its application.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use super::jacobian::pivot_slope;
use super::profile::h_value;
use super::{Direction, TransformError, TransformParams};
use crate::config::{Adjacency, CellIndex, MarkedConfiguration, Particle};
use crate::potential::SmoothDecomposition;

/// Which term of `t_k = t₀ ∧ min 𝔪` attains the minimum at a pivot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ActivePiece {
    /// `t₀ = 𝔱ₙ(‖·‖∞)`.
    Base,
    /// A constant slow-down `𝔪 ≡ τ` from a cluster with `h > δε`.
    Cap { cluster: usize },
    /// `τ + (h/ε) d_K(source, ·)` from a member of an earlier cluster.
    Slowdown { source: u64, cluster: usize, h: f64 },
}

impl ActivePiece {
    /// Rank used to break exact ties: `t₀` first, then earlier clusters.
    fn rank(&self) -> usize {
        match *self {
            ActivePiece::Base => 0,
            ActivePiece::Cap { cluster } | ActivePiece::Slowdown { cluster, .. } => cluster + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PivotRecord {
    pub id: u64,
    pub piece: ActivePiece,
    /// `∂_{e₁} t_k` at the pivot.
    pub slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub k: usize,
    pub tau: f64,
    /// `P_k`; for `k = 0` the boundary particles.
    pub pivots: Vec<PivotRecord>,
    /// `C_k`, in breadth-first order from the pivots.
    pub members: Vec<u64>,
    /// Largest `h_{y,τ_k}` over the members.
    pub max_h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformResult {
    pub clusters: Vec<ClusterRecord>,
    pub m: usize,
    pub m_star: usize,
    pub shift_of: BTreeMap<u64, f64>,
    pub cluster_of: BTreeMap<u64, usize>,
    /// `|1 + ∂_{e₁} t_k(y)|` for each pivot `y ∈ P_k`, `k ≥ 1`.
    pub jacobian_factors: BTreeMap<u64, f64>,
    /// `θₙ` for the direction the parameters were built with.
    pub theta: f64,
    /// `θ` of the opposite direction, `∏ |1 − ∂_{e₁} t_k(y)|` relative to `theta`.
    pub theta_opposite: f64,
    pub direction: Direction,
}

impl TransformResult {
    pub fn shift(&self, id: u64) -> f64 {
        self.shift_of.get(&id).copied().unwrap_or(0.0)
    }

    pub fn taus(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.tau).collect()
    }
}

/// Heap key ordered by value, then by flat index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Key(pub f64, pub usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    // Reversed so that `BinaryHeap` pops the smallest value first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

pub(crate) const UNASSIGNED: usize = usize::MAX;

struct Forward<'a> {
    parts: Vec<Particle>,
    ids: HashMap<u64, usize>,
    adj: Adjacency,
    index: CellIndex,
    params: &'a TransformParams,
    decomp: &'a SmoothDecomposition,
    cluster_of: Vec<usize>,
    cur: Vec<(f64, ActivePiece)>,
    heap: BinaryHeap<Key>,
    cap: Option<(f64, usize)>,
    m_star: Option<usize>,
    remaining: usize,
    clusters: Vec<ClusterRecord>,
}

impl Forward<'_> {
    fn finalize(&mut self, k: usize, tau: f64, pivots: Vec<PivotRecord>, members: Vec<usize>) {
        for &y in &members {
            self.cluster_of[y] = k;
        }
        self.remaining -= members.len();
        let (eps, budget) = (self.params.eps, self.params.delta * self.params.eps);
        let mut max_h = 0.0f64;
        for &y in &members {
            let py = self.parts[y];
            let h = h_value(&py, tau, self.params);
            max_h = max_h.max(h);
            if h > budget {
                if self.cap.is_none_or(|(v, _)| tau < v) {
                    self.cap = Some((tau, k));
                }
                self.m_star.get_or_insert(k);
                continue;
            }
            if !(self.params.c_k > 0.0) {
                continue;
            }
            for q in self.index.within(py.x, self.params.c_k) {
                if self.cluster_of[q] != UNASSIGNED {
                    continue;
                }
                let d = self.decomp.d_k(&py, &self.parts[q]);
                if d < eps {
                    let val = tau + h / eps * d;
                    if val < self.cur[q].0 {
                        self.cur[q] = (
                            val,
                            ActivePiece::Slowdown {
                                source: py.id,
                                cluster: k,
                                h,
                            },
                        );
                        self.heap.push(Key(val, q));
                    }
                }
            }
        }
        self.clusters.push(ClusterRecord {
            k,
            tau,
            pivots,
            members: members.iter().map(|&i| self.parts[i].id).collect(),
            max_h,
        });
    }

    fn valid(&self, key: &Key) -> bool {
        self.cluster_of[key.1] == UNASSIGNED && self.cur[key.1].0 == key.0
    }

    fn pivot(&self, i: usize, piece: ActivePiece) -> PivotRecord {
        let source = match piece {
            ActivePiece::Slowdown { source, .. } => Some(&self.parts[self.ids[&source]]),
            _ => None,
        };
        let slope = pivot_slope(&self.parts[i], piece, source, self.params, self.decomp);
        PivotRecord {
            id: self.parts[i].id,
            piece,
            slope,
        }
    }
}

/// Runs the recursion `t₀, C₀, τ₀ = 0; t_k, P_k, τ_k, C_k` to exhaustion.
pub fn build_transform(
    config: &MarkedConfiguration,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
) -> Result<TransformResult, TransformError> {
    params.validate()?;
    let parts: Vec<Particle> = config.all().copied().collect();
    let n_int = config.interior.len();
    let adj = Adjacency::of(config)?;
    let positions: Vec<[f64; 2]> = parts.iter().map(|p| p.x).collect();
    let index = CellIndex::from_points(&positions, params.c_k);
    let cur: Vec<(f64, ActivePiece)> = parts
        .iter()
        .map(|p| (params.proposal(p.sup_norm()), ActivePiece::Base))
        .collect();
    let heap = (0..n_int).map(|i| Key(cur[i].0, i)).collect();
    let mut fw = Forward {
        remaining: parts.len(),
        cluster_of: vec![UNASSIGNED; parts.len()],
        ids: config.id_index(),
        parts,
        adj,
        index,
        params,
        decomp,
        cur,
        heap,
        cap: None,
        m_star: None,
        clusters: Vec::new(),
    };

    let boundary: Vec<usize> = (n_int..fw.parts.len()).collect();
    let c0 = fw.adj.closure(&boundary, |_| true);
    let p0 = boundary
        .iter()
        .map(|&i| PivotRecord {
            id: fw.parts[i].id,
            piece: ActivePiece::Base,
            slope: 0.0,
        })
        .collect();
    fw.finalize(0, 0.0, p0, c0);

    let mut k = 1;
    while fw.remaining > 0 {
        while fw.heap.peek().is_some_and(|key| !fw.valid(key)) {
            fw.heap.pop();
        }
        let top = fw.heap.peek().map_or(f64::INFINITY, |key| key.0);
        let (tau, idx, pieces): (f64, Vec<usize>, Vec<ActivePiece>) = match fw.cap {
            Some((cap, cap_k)) if cap <= top => {
                let cap_piece = ActivePiece::Cap { cluster: cap_k };
                let idx: Vec<usize> = (0..fw.parts.len()).filter(|&i| fw.cluster_of[i] == UNASSIGNED).collect();
                let pieces = idx
                    .iter()
                    .map(|&i| {
                        let (v, piece) = fw.cur[i];
                        if v == cap && piece.rank() < cap_piece.rank() {
                            piece
                        } else {
                            cap_piece
                        }
                    })
                    .collect();
                fw.heap.clear();
                (cap, idx, pieces)
            }
            _ => {
                let mut idx = Vec::new();
                while let Some(key) = fw.heap.peek().copied() {
                    if key.0 != top {
                        break;
                    }
                    fw.heap.pop();
                    if fw.valid(&key) {
                        idx.push(key.1);
                    }
                }
                idx.sort_unstable();
                idx.dedup();
                let pieces = idx.iter().map(|&i| fw.cur[i].1).collect();
                (top, idx, pieces)
            }
        };
        let pivots = idx.iter().zip(pieces).map(|(&i, piece)| fw.pivot(i, piece)).collect();
        let cluster_of = &fw.cluster_of;
        let members = fw.adj.closure(&idx, |j| cluster_of[j] == UNASSIGNED);
        fw.finalize(k, tau, pivots, members);
        k += 1;
    }

    let m = fw.clusters.len() - 1;
    let mut shift_of = BTreeMap::new();
    let mut cluster_of = BTreeMap::new();
    for (i, p) in fw.parts.iter().enumerate() {
        let c = fw.cluster_of[i];
        shift_of.insert(p.id, fw.clusters[c].tau);
        cluster_of.insert(p.id, c);
    }
    let sign = params.direction.sign();
    let mut jacobian_factors = BTreeMap::new();
    let (mut theta, mut theta_opposite) = (1.0, 1.0);
    for rec in fw.clusters.iter().skip(1) {
        for p in &rec.pivots {
            let f = (1.0 + sign * p.slope).abs();
            jacobian_factors.insert(p.id, f);
            theta *= f;
            theta_opposite *= (1.0 - sign * p.slope).abs();
        }
    }
    Ok(TransformResult {
        m,
        m_star: fw.m_star.unwrap_or(m),
        clusters: fw.clusters,
        shift_of,
        cluster_of,
        jacobian_factors,
        theta,
        theta_opposite,
        direction: params.direction,
    })
}

/// Moves every particle by `±shift_of(id)` along `e₁`; spins and edges are kept.
pub fn apply_transform(config: &MarkedConfiguration, result: &TransformResult, direction: Direction) -> MarkedConfiguration {
    let sign = direction.sign();
    let mv = |p: &Particle| {
        let s = result.shift(p.id);
        if s == 0.0 {
            *p
        } else {
            p.shifted(sign * s)
        }
    };
    MarkedConfiguration {
        window_n: config.window_n,
        interior: config.interior.iter().map(mv).collect(),
        boundary: config.boundary.iter().map(mv).collect(),
        edges: config.edges.clone(),
    }
}

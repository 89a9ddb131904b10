//! Reconstruction of `Y` from `𝒯ₙY` by replaying the cluster recursion on
//! the unknown preimage positions.
//!
//! For a particle `q` still unassigned at step `k`, write `F_q(c)` for `t_k`
//! evaluated at `q′ − s c e₁`, where `q′` is its image position and `s` the
//! shift direction. Every piece of `t_k` is `δ`-Lipschitz with `δ < 1`, so
//! `F_q(c) = c` has exactly one root `g_q`, and `τ_k = min_q g_q` with the
//! pivots attaining it. A new slow-down piece can only lower a root, and the
//! new root lies in `[τ_k, g_q]`, where `piece(c) ≥ c` is a monotone
//! predicate, so bisection is exact up to rounding.

use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};

use super::build::{Key, UNASSIGNED};
use super::profile::h_value;
use super::{TransformError, TransformParams};
use crate::config::{Adjacency, CellIndex, MarkedConfiguration, Particle};
use crate::potential::SmoothDecomposition;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseResult {
    pub preimage: MarkedConfiguration,
    pub shift_of: BTreeMap<u64, f64>,
    pub taus: Vec<f64>,
}

/// Largest `c ∈ [lo, hi]` with `pred(c)`, assuming `pred(lo)` and that `pred`
/// switches once from true to false. Runs until the bracket cannot shrink.
fn bisect(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return lo;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

struct Inverse<'a> {
    image: Vec<Particle>,
    adj: Adjacency,
    index: CellIndex,
    params: &'a TransformParams,
    decomp: &'a SmoothDecomposition,
    sign: f64,
    c_max: f64,
    cluster_of: Vec<usize>,
    g: Vec<f64>,
    heap: BinaryHeap<Key>,
    cap: Option<f64>,
    remaining: usize,
    taus: Vec<f64>,
    shift: Vec<f64>,
}

impl Inverse<'_> {
    fn at(&self, q: usize, c: f64) -> Particle {
        self.image[q].shifted(-self.sign * c)
    }

    fn base_root(&self, q: usize) -> f64 {
        let t0 = |c: f64| self.params.proposal(self.at(q, c).sup_norm());
        if t0(self.c_max) >= self.c_max {
            return self.c_max;
        }
        bisect(0.0, self.c_max, |c| t0(c) >= c)
    }

    fn finalize(&mut self, tau: f64, members: Vec<usize>) {
        let k = self.taus.len();
        for &y in &members {
            self.cluster_of[y] = k;
            self.shift[y] = tau;
        }
        self.remaining -= members.len();
        self.taus.push(tau);
        let (eps, budget) = (self.params.eps, self.params.delta * self.params.eps);
        for &y in &members {
            let py = self.at(y, tau);
            let h = h_value(&py, tau, self.params);
            if h > budget {
                self.cap = Some(self.cap.map_or(tau, |v| v.min(tau)));
                continue;
            }
            if !(self.params.c_k > 0.0) {
                continue;
            }
            let piece = |q: usize, c: f64| {
                let d = self.decomp.d_k(&py, &self.at(q, c));
                if d < eps {
                    tau + h / eps * d
                } else {
                    f64::INFINITY
                }
            };
            let mut updates = Vec::new();
            for q in self.index.within(py.x, self.params.c_k + self.c_max) {
                if self.cluster_of[q] != UNASSIGNED {
                    continue;
                }
                let g = self.g[q];
                if piece(q, g) >= g {
                    continue;
                }
                let root = if piece(q, tau) <= tau {
                    tau
                } else {
                    bisect(tau, g, |c| piece(q, c) >= c)
                };
                if root < g {
                    updates.push((q, root));
                }
            }
            for (q, root) in updates {
                self.g[q] = root;
                self.heap.push(Key(root, q));
            }
        }
    }
}

/// Recovers `Y` from `𝒯ₙY` (or from `𝒯ₙ⁻Y` when `params.direction` is
/// backward). Edges are carried over unchanged.
pub fn invert_transform(
    image: &MarkedConfiguration,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
) -> Result<InverseResult, TransformError> {
    params.validate()?;
    let parts: Vec<Particle> = image.all().copied().collect();
    let n_int = image.interior.len();
    let c_max = params.plateau();
    let mut inv = Inverse {
        adj: Adjacency::of(image)?,
        index: CellIndex::from_points(&image.positions(), params.c_k + c_max),
        params,
        decomp,
        sign: params.direction.sign(),
        c_max,
        cluster_of: vec![UNASSIGNED; parts.len()],
        g: vec![f64::INFINITY; parts.len()],
        heap: BinaryHeap::new(),
        cap: None,
        remaining: parts.len(),
        taus: Vec::new(),
        shift: vec![0.0; parts.len()],
        image: parts,
    };
    for q in 0..n_int {
        inv.g[q] = inv.base_root(q);
        inv.heap.push(Key(inv.g[q], q));
    }
    let boundary: Vec<usize> = (n_int..inv.image.len()).collect();
    let c0 = inv.adj.closure(&boundary, |_| true);
    inv.finalize(0.0, c0);

    while inv.remaining > 0 {
        while inv
            .heap
            .peek()
            .is_some_and(|k| inv.cluster_of[k.1] != UNASSIGNED || inv.g[k.1] != k.0)
        {
            inv.heap.pop();
        }
        let top = inv.heap.peek().map_or(f64::INFINITY, |k| k.0);
        let (tau, seeds) = match inv.cap {
            Some(cap) if cap <= top => {
                inv.heap.clear();
                let all = (0..inv.image.len()).filter(|&i| inv.cluster_of[i] == UNASSIGNED).collect();
                (cap, all)
            }
            _ => {
                let mut seeds = Vec::new();
                while let Some(key) = inv.heap.peek().copied() {
                    if key.0 != top {
                        break;
                    }
                    inv.heap.pop();
                    if inv.cluster_of[key.1] == UNASSIGNED && inv.g[key.1] == key.0 {
                        seeds.push(key.1);
                    }
                }
                seeds.sort_unstable();
                seeds.dedup();
                (top, seeds)
            }
        };
        let cluster_of = &inv.cluster_of;
        let members = inv.adj.closure(&seeds, |j| cluster_of[j] == UNASSIGNED);
        inv.finalize(tau, members);
    }

    let mut shift_of = BTreeMap::new();
    let moved: Vec<Particle> = inv
        .image
        .iter()
        .enumerate()
        .map(|(i, p)| {
            shift_of.insert(p.id, inv.shift[i]);
            if inv.shift[i] == 0.0 {
                *p
            } else {
                p.shifted(-inv.sign * inv.shift[i])
            }
        })
        .collect();
    let preimage = MarkedConfiguration {
        window_n: image.window_n,
        interior: moved[..n_int].to_vec(),
        boundary: moved[n_int..].to_vec(),
        edges: image.edges.clone(),
    };
    Ok(InverseResult {
        preimage,
        shift_of,
        taus: inv.taus,
    })
}

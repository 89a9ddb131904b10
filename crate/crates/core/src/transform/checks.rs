//! Independent verification of the properties every built transform must have.

use serde::{Deserialize, Serialize};

use super::build::{apply_transform, TransformResult};
use super::good::{b_plus, GoodnessVerdict};
use super::profile::{h_value, slowdown};
use super::{TransformError, TransformParams};
use crate::config::{Adjacency, CellIndex, MarkedConfiguration, Particle};
use crate::potential::SmoothDecomposition;

/// Slack added to the Lipschitz bound.
pub const LIPSCHITZ_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub ids: Vec<u64>,
    pub observed: f64,
    pub bound: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    /// Whether a failure invalidates the run, or is only reported.
    pub hard: bool,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl CheckOutcome {
    fn new(name: &str, hard: bool) -> Self {
        CheckOutcome {
            name: name.into(),
            hard,
            checked: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, ok: bool, v: impl FnOnce() -> Violation) {
        self.checked += 1;
        if !ok {
            self.violations.push(v());
        }
    }
}

fn flat(config: &MarkedConfiguration) -> Vec<Particle> {
    config.all().copied().collect()
}

/// Boundary particles stay put, interior images stay in the closed window and
/// every shift lies in `[0, c √log n]`.
pub fn check_t2(config: &MarkedConfiguration, result: &TransformResult, params: &TransformParams) -> CheckOutcome {
    let mut out = CheckOutcome::new("T2", true);
    let moved = apply_transform(config, result, result.direction);
    for p in &config.boundary {
        let s = result.shift(p.id);
        out.record(s == 0.0, || Violation {
            ids: vec![p.id],
            observed: s,
            bound: 0.0,
            detail: "boundary particle moved".into(),
        });
    }
    let window = config.window();
    for p in &moved.interior {
        out.record(window.contains(p.x), || Violation {
            ids: vec![p.id],
            observed: p.sup_norm(),
            bound: window.n,
            detail: "image left the window".into(),
        });
    }
    let cap = params.plateau();
    for (&id, &s) in &result.shift_of {
        out.record((0.0..=cap).contains(&s), || Violation {
            ids: vec![id],
            observed: s,
            bound: cap,
            detail: "shift outside [0, c sqrt(log n)]".into(),
        });
    }
    out
}

/// Pairs joined by an edge or lying in `K` receive bit-identical shifts.
pub fn check_t4(
    config: &MarkedConfiguration,
    result: &TransformResult,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
) -> CheckOutcome {
    let mut out = CheckOutcome::new("T4", true);
    for (a, b) in config.edges.iter() {
        let (sa, sb) = (result.shift(a), result.shift(b));
        out.record(sa.to_bits() == sb.to_bits(), || Violation {
            ids: vec![a, b],
            observed: (sa - sb).abs(),
            bound: 0.0,
            detail: "edge endpoints shifted differently".into(),
        });
    }
    let parts = flat(config);
    if params.c_k > 0.0 {
        let index = CellIndex::from_points(&config.positions(), params.c_k);
        for (i, p) in parts.iter().enumerate() {
            for j in index.within(p.x, params.c_k) {
                if j > i && decomp.k_test(p, &parts[j]) {
                    let (sa, sb) = (result.shift(p.id), result.shift(parts[j].id));
                    out.record(sa.to_bits() == sb.to_bits(), || Violation {
                        ids: vec![p.id, parts[j].id],
                        observed: (sa - sb).abs(),
                        bound: 0.0,
                        detail: "core pair shifted differently".into(),
                    });
                }
            }
        }
    }
    out
}

/// `|t(y) − t(y′)| ≤ δ‖y − y′‖ + 1e−12`. Shifts lie in `[0, c √log n]`, so
/// only pairs closer than `c √log n / δ` can violate it.
pub fn check_t5(config: &MarkedConfiguration, result: &TransformResult, params: &TransformParams) -> CheckOutcome {
    let mut out = CheckOutcome::new("T5", true);
    let parts = flat(config);
    let range = params.plateau() / params.delta;
    if !(range > 0.0) {
        return out;
    }
    let index = CellIndex::from_points(&config.positions(), range);
    for (i, p) in parts.iter().enumerate() {
        for j in index.within(p.x, range) {
            if j <= i {
                continue;
            }
            let q = &parts[j];
            let diff = (result.shift(p.id) - result.shift(q.id)).abs();
            let bound = params.delta * crate::config::dist(p.x, q.x) + LIPSCHITZ_SLACK;
            out.record(diff <= bound, || Violation {
                ids: vec![p.id, q.id],
                observed: diff,
                bound,
                detail: "shift difference exceeds delta times distance".into(),
            });
        }
    }
    out
}

/// Brute-force evaluation of `t_k` at particle locations from the recorded
/// clusters, independent of the priority queue used by the build.
struct Profile<'a> {
    parts: Vec<Particle>,
    cluster: Vec<usize>,
    near: Vec<Vec<usize>>,
    cap_before: Vec<f64>,
    taus: Vec<f64>,
    params: &'a TransformParams,
    decomp: &'a SmoothDecomposition,
}

impl<'a> Profile<'a> {
    fn new(
        config: &MarkedConfiguration,
        result: &TransformResult,
        params: &'a TransformParams,
        decomp: &'a SmoothDecomposition,
    ) -> Self {
        let parts = flat(config);
        let cluster: Vec<usize> = parts.iter().map(|p| result.cluster_of[&p.id]).collect();
        let near = if params.c_k > 0.0 {
            let index = CellIndex::from_points(&config.positions(), params.c_k);
            parts.iter().map(|p| index.within(p.x, params.c_k)).collect()
        } else {
            vec![Vec::new(); parts.len()]
        };
        let taus = result.taus();
        let mut capped = vec![false; taus.len()];
        for (i, p) in parts.iter().enumerate() {
            let k = cluster[i];
            if h_value(p, taus[k], params) > params.delta * params.eps {
                capped[k] = true;
            }
        }
        let mut cap_before = vec![f64::INFINITY; taus.len() + 1];
        for k in 0..taus.len() {
            cap_before[k + 1] = if capped[k] { cap_before[k].min(taus[k]) } else { cap_before[k] };
        }
        Profile {
            parts,
            cluster,
            near,
            cap_before,
            taus,
            params,
            decomp,
        }
    }

    /// `t_k` at particle `i`.
    fn t(&self, k: usize, i: usize) -> f64 {
        let p = &self.parts[i];
        let mut v = self.params.proposal(p.sup_norm());
        if k == 0 {
            return v;
        }
        v = v.min(self.cap_before[k]);
        for &j in &self.near[i] {
            let l = self.cluster[j];
            if l < k && j != i {
                v = v.min(slowdown(&self.parts[j], self.taus[l], p, self.params, self.decomp));
            }
        }
        v
    }
}

/// `τ₀ = 0`, `τ_k` nondecreasing, `t_k ≥ τ_k` on `C_k` with equality on the
/// pivots, `t_{k−1} > τ_{k−1}` on `C_k` for `k ≥ 2`, and
/// `t_k ≤ t_{k−1} ≤ t₀` at every particle of `C_k`.
pub fn check_monotone(
    config: &MarkedConfiguration,
    result: &TransformResult,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
) -> CheckOutcome {
    let mut out = CheckOutcome::new("monotone", true);
    let taus = result.taus();
    out.record(taus.first() == Some(&0.0), || Violation {
        ids: vec![],
        observed: taus.first().copied().unwrap_or(f64::NAN),
        bound: 0.0,
        detail: "tau_0 is not 0".into(),
    });
    for w in taus.windows(2) {
        out.record(w[0] <= w[1], || Violation {
            ids: vec![],
            observed: w[1],
            bound: w[0],
            detail: "tau decreased".into(),
        });
    }
    let prof = Profile::new(config, result, params, decomp);
    let pivots: std::collections::HashSet<u64> =
        result.clusters.iter().skip(1).flat_map(|c| c.pivots.iter().map(|p| p.id)).collect();
    for (i, p) in prof.parts.iter().enumerate() {
        let k = prof.cluster[i];
        if k == 0 {
            continue;
        }
        let tk = prof.t(k, i);
        let tau = taus[k];
        let is_pivot = pivots.contains(&p.id);
        out.record(if is_pivot { tk == tau } else { tk >= tau }, || Violation {
            ids: vec![p.id],
            observed: tk,
            bound: tau,
            detail: if is_pivot {
                "pivot does not attain tau_k".into()
            } else {
                "t_k below tau_k on C_k".into()
            },
        });
        if k >= 2 {
            let prev = prof.t(k - 1, i);
            out.record(prev > taus[k - 1], || Violation {
                ids: vec![p.id],
                observed: prev,
                bound: taus[k - 1],
                detail: "particle attained tau_(k-1) but was not assigned".into(),
            });
            let t0 = prof.t(0, i);
            out.record(tk <= prev && prev <= t0, || Violation {
                ids: vec![p.id],
                observed: tk,
                bound: prev,
                detail: "profile increased in k".into(),
            });
        }
    }
    out
}

/// `t(y) ≤ 𝔱ₙ(‖y‖∞)` for all `y`, and for `y ∈ C_k` with `k ≤ m*`,
/// `t(y) ≥ 𝔱ₙ(‖y′‖∞)` for some `y′` reachable from `y` along `B₊` through
/// clusters of nonincreasing index.
pub fn check_lower_bound(
    config: &MarkedConfiguration,
    result: &TransformResult,
    params: &TransformParams,
    decomp: &SmoothDecomposition,
) -> Result<CheckOutcome, TransformError> {
    let mut out = CheckOutcome::new("shift-bounds", true);
    let parts = flat(config);
    let adj: Adjacency = b_plus(&parts, config, params, decomp)?;
    let cluster: Vec<usize> = parts.iter().map(|p| result.cluster_of[&p.id]).collect();
    let t0: Vec<f64> = parts.iter().map(|p| params.proposal(p.sup_norm())).collect();
    // best[i]: smallest 𝔱ₙ over the downward B₊-reach of i, with its index.
    let mut best: Vec<(f64, usize)> = (0..parts.len()).map(|i| (t0[i], i)).collect();
    let mut by_cluster: Vec<Vec<usize>> = vec![Vec::new(); result.clusters.len()];
    for (i, &k) in cluster.iter().enumerate() {
        by_cluster[k].push(i);
    }
    for (k, members) in by_cluster.iter().enumerate() {
        for &i in members {
            for &j in adj.neighbors(i) {
                if cluster[j] < k && best[j].0 < best[i].0 {
                    best[i] = best[j];
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for &i in members {
            if !seen.insert(i) {
                continue;
            }
            let comp = adj.closure(&[i], |j| cluster[j] == k);
            let low = comp.iter().map(|&j| best[j]).min_by(|a, b| a.0.total_cmp(&b.0)).expect("nonempty");
            for &j in &comp {
                seen.insert(j);
                best[j] = low;
            }
        }
    }
    for (i, p) in parts.iter().enumerate() {
        let s = result.shift(p.id);
        out.record(s <= t0[i], || Violation {
            ids: vec![p.id],
            observed: s,
            bound: t0[i],
            detail: "shift exceeds the proposal".into(),
        });
        if cluster[i] >= 1 && cluster[i] <= result.m_star {
            let (low, w) = best[i];
            out.record(s >= low, || Violation {
                ids: vec![p.id, parts[w].id],
                observed: s,
                bound: low,
                detail: "shift below the proposal at every downward B+ neighbour".into(),
            });
        }
    }
    Ok(out)
}

/// On a good configuration, particles with `‖y‖∞ ≤ √n` get the full plateau
/// shift. A hard check only in strict mode.
pub fn check_t3(
    config: &MarkedConfiguration,
    result: &TransformResult,
    params: &TransformParams,
    verdict: &GoodnessVerdict,
) -> CheckOutcome {
    let mut out = CheckOutcome::new("T3", params.strict);
    if !verdict.good {
        return out;
    }
    let plateau = params.plateau();
    let radius = params.n.sqrt();
    for p in config.all().filter(|p| p.sup_norm() <= radius) {
        let s = result.shift(p.id);
        out.record(s == plateau, || Violation {
            ids: vec![p.id],
            observed: s,
            bound: plateau,
            detail: "central particle of a good configuration missed the plateau".into(),
        });
    }
    out
}

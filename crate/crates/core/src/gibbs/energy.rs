use crate::config::{CellIndex, MarkedConfiguration, Particle};
use crate::potential::{PotentialModel, SmoothDecomposition};

/// `Σ f(y, y′)` over `E_Λ(Y)`: interior–interior and interior–boundary pairs
/// at distance `≤ range`. Stops at the first `+∞` term.
pub fn pair_sum(config: &MarkedConfiguration, range: f64, f: impl Fn(&Particle, &Particle) -> f64) -> f64 {
    if config.interior.is_empty() || !(range > 0.0) {
        return 0.0;
    }
    let all: Vec<&Particle> = config.all().collect();
    let index = CellIndex::build(config, range);
    let mut total = 0.0;
    for i in 0..config.interior.len() {
        for j in index.within(all[i].x, range) {
            if j > i {
                let v = f(all[i], all[j]);
                if v == f64::INFINITY {
                    return v;
                }
                total += v;
            }
        }
    }
    total
}

/// `H^U_Λ(Y)`.
pub fn hamiltonian(model: &PotentialModel, config: &MarkedConfiguration) -> f64 {
    pair_sum(config, model.range(), |a, b| model.evaluate(a, b))
}

/// `H^Ū_Λ(Y)`, always finite.
pub fn hamiltonian_bar(decomp: &SmoothDecomposition, config: &MarkedConfiguration) -> f64 {
    pair_sum(config, decomp.u_bar_range(), |a, b| decomp.u_bar(a, b))
}

/// `W^U(Y₁, Y₂)`, the cross-pair sum.
pub fn interaction_energy(model: &PotentialModel, y1: &[Particle], y2: &[Particle]) -> f64 {
    let range = model.range();
    if y1.is_empty() || y2.is_empty() || !(range > 0.0) {
        return 0.0;
    }
    let pts: Vec<[f64; 2]> = y2.iter().map(|p| p.x).collect();
    let index = CellIndex::from_points(&pts, range);
    let mut total = 0.0;
    for a in y1 {
        for j in index.within(a.x, range) {
            let v = model.evaluate(a, &y2[j]);
            if v == f64::INFINITY {
                return v;
            }
            total += v;
        }
    }
    total
}

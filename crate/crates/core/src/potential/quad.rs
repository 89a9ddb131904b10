//! Small quadrature helpers shared by the decomposition code.

const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// 8-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss8(a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for k in 0..4 {
        s += GL8_W[k] * (f(m - h * GL8_X[k]) + f(m + h * GL8_X[k]));
    }
    s * h
}

/// Composite 8-point rule over `panels` equal panels.
pub fn gauss8_composite(a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + h * i as f64;
            gauss8(lo, lo + h, &mut f)
        })
        .sum()
}

/// Composite rule over `[a, b]` with panels no wider than `max_width`,
/// always splitting at the given interior `breaks`.
pub fn gauss8_piecewise(
    a: f64,
    b: f64,
    breaks: &[f64],
    max_width: f64,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.windows(2)
        .map(|w| {
            let panels = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
            gauss8_composite(w[0], w[1], panels, &mut f)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        let v = gauss8(-1.0, 2.0, |x| x.powi(15) - 3.0 * x.powi(4) + 1.0);
        let exact = (2f64.powi(16) - 1.0) / 16.0 - 3.0 * (32.0 + 1.0) / 5.0 + 3.0;
        assert!((v - exact).abs() < 1e-9 * exact.abs());
    }

    #[test]
    fn piecewise_handles_kinks() {
        let v = gauss8_piecewise(-1.0, 1.0, &[0.0], 0.5, f64::abs);
        assert!((v - 1.0).abs() < 1e-15);
    }
}

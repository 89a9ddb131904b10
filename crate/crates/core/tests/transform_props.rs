//! Randomised transform properties on sparse chained fixtures with edges,
//! where slow-down pieces and multi-particle clusters are common.

use gibbs_shift::config::{EdgeSet, MarkedConfiguration, Particle, Spin, Window};
use gibbs_shift::potential::{make_model, PotentialDescriptor, SmoothDecomposition};
use gibbs_shift::transform::*;
use proptest::prelude::*;

const N: f64 = 32.0;

/// Chains of disks at gap `< ε` from their predecessor, seeded in the sloped
/// part of the proposal, plus random edges between close pairs and a few
/// boundary particles just outside the window.
fn fixture() -> impl Strategy<Value = MarkedConfiguration> {
    let chain = (10.0..31.0f64, 0.0..std::f64::consts::TAU, prop::collection::vec((0.0..std::f64::consts::TAU, 0.0..1.0f64), 0..6));
    (
        prop::collection::vec(chain, 1..8),
        prop::collection::vec(any::<bool>(), 64),
        prop::collection::vec((32.2..34.0f64, -30.0..30.0f64), 0..3),
    )
        .prop_map(|(chains, coins, bnd)| {
            let mut pts: Vec<[f64; 2]> = Vec::new();
            for (r, a, steps) in chains {
                let mut x = [r * a.cos(), r * a.sin()];
                if x[0].abs().max(x[1].abs()) > 31.0 {
                    continue;
                }
                pts.push(x);
                for (b, g) in steps {
                    let d = 0.5 + 0.3 * g;
                    let y = [x[0] + d * b.cos(), x[1] + d * b.sin()];
                    if y[0].abs().max(y[1].abs()) > 31.5 {
                        break;
                    }
                    pts.push(y);
                    x = y;
                }
            }
            let interior: Vec<Particle> =
                pts.iter().enumerate().map(|(i, &x)| Particle::new(i as u64, x, Spin::Unit)).collect();
            let boundary: Vec<Particle> = bnd
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| Particle::new(1000 + i as u64, [x, y], Spin::Unit))
                .collect();
            let mut edges = EdgeSet::new();
            let mut k = 0;
            let all: Vec<&Particle> = interior.iter().chain(&boundary).collect();
            for i in 0..all.len() {
                for j in i + 1..all.len() {
                    let d = gibbs_shift::config::dist(all[i].x, all[j].x);
                    if d < 1.2 {
                        if coins[k % coins.len()] {
                            edges.insert(all[i].id, all[j].id).unwrap();
                        }
                        k += 1;
                    }
                }
            }
            MarkedConfiguration::new(Window::new(N).unwrap(), interior, boundary, edges).unwrap()
        })
}

fn decomp() -> SmoothDecomposition {
    let m = make_model(PotentialDescriptor::HardCore { r0: 0.5 }).unwrap();
    SmoothDecomposition::trivial(&m, 0.3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    #[test]
    fn transform_properties(config in fixture(), c in 0.0..0.6f64, delta in prop::sample::select(vec![0.1, 0.25, 0.5])) {
        let d = decomp();
        let params = TransformParams::new(N, c, delta, &d, false).unwrap();
        let r = build_transform(&config, &params, &d).unwrap();
        for outcome in [
            check_t2(&config, &r, &params),
            check_t4(&config, &r, &params, &d),
            check_t5(&config, &r, &params),
            check_monotone(&config, &r, &params, &d),
            check_lower_bound(&config, &r, &params, &d).unwrap(),
        ] {
            prop_assert!(outcome.passed(), "{} {:?}", outcome.name, outcome.violations);
        }
        let back_params = params.with_direction(Direction::Backward);
        let rb = build_transform(&config, &back_params, &d).unwrap();
        prop_assert_eq!(&rb.shift_of, &r.shift_of);
        prop_assert_eq!(rb.theta, r.theta_opposite);
        for (dir, p) in [(Direction::Forward, params), (Direction::Backward, back_params)] {
            let img = apply_transform(&config, &r, dir);
            let back = invert_transform(&img, &p, &d).unwrap();
            for (a, b) in config.all().zip(back.preimage.all()) {
                let err = (a.x[0] - b.x[0]).abs().max((a.x[1] - b.x[1]).abs());
                prop_assert!(err <= 1e-9, "{:?}: {:?} vs {:?}", dir, a, b);
            }
            // The inverse applied to the preimage reproduces the image.
            let again = build_transform(&back.preimage, &p, &d).unwrap();
            let img2 = apply_transform(&back.preimage, &again, dir);
            for (a, b) in img.all().zip(img2.all()) {
                prop_assert!((a.x[0] - b.x[0]).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn fixtures_exercise_slowdowns_and_ties() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let d = decomp();
    let params = TransformParams::new(N, 0.5, 0.5, &d, false).unwrap();
    let mut runner = TestRunner::deterministic();
    let (mut slow, mut multi) = (0, 0);
    for _ in 0..200 {
        let config = fixture().new_tree(&mut runner).unwrap().current();
        let r = build_transform(&config, &params, &d).unwrap();
        for cl in &r.clusters[1..] {
            slow += cl.pivots.iter().filter(|p| matches!(p.piece, ActivePiece::Slowdown { .. })).count();
            multi += usize::from(cl.members.len() > 1);
        }
    }
    assert!(slow > 50, "only {slow} slow-down pivots");
    assert!(multi > 50, "only {multi} multi-particle clusters");
}

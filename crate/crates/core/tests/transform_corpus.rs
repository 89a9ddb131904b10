//! Transform properties on sampled configurations of every bundled model.

use gibbs_shift::config::{MarkedConfiguration, Window};
use gibbs_shift::gibbs::{sample_edges_rng, sample_gibbs_chain, stream_rng, GibbsParams, McmcSettings};
use gibbs_shift::potential::{evaluate_constants, gamma_for, make_model, smooth_decompose, PotentialDescriptor};
use gibbs_shift::transform::*;

fn corpus(desc: PotentialDescriptor, n: f64, z: f64, count: u64) -> (GibbsParams, Vec<MarkedConfiguration>) {
    let model = make_model(desc).unwrap();
    let decomp = smooth_decompose(&model, gamma_for(0.5, 1.0), 1e-3).unwrap();
    let constants = evaluate_constants(&decomp, 0.5, 1.0, z).unwrap();
    let params = GibbsParams::new(model, decomp, constants, Window::new(n).unwrap(), vec![]).unwrap();
    let settings = McmcSettings {
        steps: 40_000 + 2_000 * count,
        burn_in: 40_000,
        thin: 2_000,
        seed: 7,
        ..Default::default()
    };
    let mut rng = stream_rng(7, 99);
    let mut configs = sample_gibbs_chain(&params, &settings, 0).unwrap();
    for c in &mut configs {
        c.edges = sample_edges_rng(&params.decomp, 1.0, c, &mut rng);
    }
    (params, configs)
}

fn run(desc: PotentialDescriptor) {
    let (gp, configs) = corpus(desc, 12.0, 0.5, 15);
    let decomp = &gp.decomp;
    let mut edges = 0;
    for (c, amp) in configs.iter().flat_map(|c| [(c, 0.05), (c, 0.25)]) {
        let params = TransformParams::new(12.0, amp, 0.1, decomp, false).unwrap();
        edges += c.edges.len() / 2;
        let r = build_transform(c, &params, decomp).unwrap();
        let good = is_good(c, &params, decomp).unwrap();
        for outcome in [
            check_t2(c, &r, &params),
            check_t4(c, &r, &params, decomp),
            check_t5(c, &r, &params),
            check_monotone(c, &r, &params, decomp),
            check_lower_bound(c, &r, &params, decomp).unwrap(),
        ] {
            assert!(outcome.passed(), "{desc:?}: {} {:?}", outcome.name, &outcome.violations[..outcome.violations.len().min(3)]);
        }
        let _ = check_t3(c, &r, &params, &good);
        for dir in [Direction::Forward, Direction::Backward] {
            let p = params.with_direction(dir);
            let img = apply_transform(c, &r, dir);
            let back = invert_transform(&img, &p, decomp).unwrap();
            for (a, b) in c.all().zip(back.preimage.all()) {
                assert_eq!(a.id, b.id);
                let err = (a.x[0] - b.x[0]).abs().max((a.x[1] - b.x[1]).abs());
                assert!(err <= 1e-9, "{desc:?} {dir:?}: {a:?} vs {b:?}");
            }
        }
    }
    eprintln!("{desc:?}: {} configs, {} particles, {} edges", configs.len(), configs.iter().map(|c| c.len()).sum::<usize>(), edges);
}

#[test]
fn hard_disks() {
    run(PotentialDescriptor::HardCore { r0: 0.5 });
}

#[test]
fn widom_rowlinson() {
    run(PotentialDescriptor::WidomRowlinson { q: 2, r: 0.4 });
}

#[test]
fn hard_rods() {
    run(PotentialDescriptor::HardRods { r: 0.5 });
}

#[test]
fn random_radii() {
    run(PotentialDescriptor::RandomRadiiDisks { r_max: 0.4 });
}

#[test]
fn soft_core() {
    run(PotentialDescriptor::SoftCore { c1: 1.0, r1: 0.6 });
}

#[test]
fn well() {
    run(PotentialDescriptor::Well {
        r0: 0.5,
        r1: 0.8,
        c1: 0.5,
        c2: 0.2,
        cutoff: None,
    });
}

#[test]
fn lennard_jones() {
    run(PotentialDescriptor::LennardJones {
        c1: 0.01,
        c2: 0.1,
        cutoff: None,
    });
}

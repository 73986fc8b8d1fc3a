use std::f64::consts::PI;

use crossgreen_core::energy::{energy, separation};
use crossgreen_core::geometry::{distance, Configuration, Manifold};
use crossgreen_core::kernel::{build_green, KernelEvaluator, KernelKind};
use crossgreen_core::optimize::{minimize, multi_start, multi_start_runs, OptimizeOptions};
use crossgreen_core::quadrature::QuadratureSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s2() -> Manifold {
    Manifold::sphere(2).unwrap()
}

fn green() -> KernelEvaluator {
    build_green(s2(), &QuadratureSpec::default()).unwrap()
}

fn opts(seed: u64, starts: usize) -> OptimizeOptions {
    OptimizeOptions {
        seed,
        starts,
        ..Default::default()
    }
}

#[test]
fn two_points_become_antipodal() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let c = Configuration::random(s2(), 2, &mut rng).unwrap();
    let r = minimize(&c, &green(), &opts(1, 1)).unwrap();
    let p = r.config.points();
    let d = distance(&s2(), &p[0], &p[1]).unwrap();
    assert!((d - PI).abs() < 1e-6, "{d}");
    assert!((r.energy + 1.0 / (2.0 * PI)).abs() < 1e-9);
    assert_eq!(r.energy, energy(&r.config, &green()).unwrap().total);
}

#[test]
fn three_points_form_a_great_circle_triangle() {
    let r = multi_start(s2(), 3, &green(), &opts(2, 4)).unwrap();
    assert!(r.converged);
    let p = r.config.points();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = distance(&s2(), &p[i], &p[j]).unwrap();
        assert!((d - 2.0 * PI / 3.0).abs() < 1e-5, "{d}");
    }
    assert!((r.energy + 0.340_106_757_666_820_9).abs() < 1e-7);
}

#[test]
fn four_points_under_log_form_a_tetrahedron() {
    let log = KernelEvaluator::new(KernelKind::Logarithmic, s2(), &QuadratureSpec::default()).unwrap();
    let r = multi_start(s2(), 4, &log, &opts(3, 4)).unwrap();
    assert!((r.energy + 6.0 * (8.0f64 / 3.0).ln()).abs() < 1e-6);
    let sep = separation(&r.config).unwrap();
    assert!((sep - (-1.0f64 / 3.0).acos()).abs() < 1e-4);
}

#[test]
fn trace_is_nonincreasing_and_converged_means_small_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for m in [s2(), Manifold::complex_projective(2).unwrap(), Manifold::quaternion_projective(1).unwrap()] {
        let k = build_green(m, &QuadratureSpec::default()).unwrap();
        let c = Configuration::random(m, 10, &mut rng).unwrap();
        let o = OptimizeOptions {
            max_iters: 400,
            ..opts(4, 1)
        };
        let r = minimize(&c, &k, &o).unwrap();
        let trace = r.trace.as_ref().unwrap();
        assert_eq!(trace.len(), r.iterations + 1);
        for w in trace.windows(2) {
            assert!(w[1].energy <= w[0].energy, "{m}");
        }
        if r.converged {
            assert!(r.grad_norm <= o.grad_tol);
        }
        assert!(r.energy <= energy(&c, &k).unwrap().total);
        assert!(r.config.points().iter().all(|p| p.is_canonical()));
    }
}

#[test]
fn multi_start_is_reproducible_and_takes_the_minimum() {
    let k = green();
    let o = OptimizeOptions {
        max_iters: 300,
        ..opts(42, 3)
    };
    let a = multi_start(s2(), 12, &k, &o).unwrap();
    let b = multi_start(s2(), 12, &k, &o).unwrap();
    assert_eq!(a, b);
    let runs = multi_start_runs(s2(), 12, &k, &o).unwrap();
    for run in runs {
        let e = run.unwrap().energy;
        assert!(a.energy <= e + 1e-12, "{} > {e}", a.energy);
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| multi_start(s2(), 12, &k, &o).unwrap());
    assert_eq!(serial, a);
}

#[test]
fn all_two_point_starts_agree() {
    let runs = multi_start_runs(s2(), 2, &green(), &opts(5, 8)).unwrap();
    let energies: Vec<f64> = runs.into_iter().map(|r| r.unwrap().energy).collect();
    for e in &energies {
        assert!((e - energies[0]).abs() < 1e-9);
    }
}

#[test]
fn perturbation_never_raises_energy() {
    let k = green();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let c = Configuration::random(s2(), 60, &mut rng).unwrap();
    let o = OptimizeOptions {
        max_iters: 100,
        perturb: true,
        ..opts(6, 1)
    };
    let r = minimize(&c, &k, &o).unwrap();
    for w in r.trace.as_ref().unwrap().windows(2) {
        assert!(w[1].energy <= w[0].energy);
    }
}

#[test]
fn rejects_bad_inputs() {
    let k = green();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let c = Configuration::random(s2(), 1, &mut rng).unwrap();
    assert!(minimize(&c, &k, &opts(1, 1)).is_err());
    assert!(multi_start(s2(), 1, &k, &opts(1, 1)).is_err());
    let other = Configuration::random(Manifold::sphere(3).unwrap(), 4, &mut rng).unwrap();
    assert!(minimize(&other, &k, &opts(1, 1)).is_err());
}

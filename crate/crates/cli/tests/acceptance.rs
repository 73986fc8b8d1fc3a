//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p crossgreen-cli --test acceptance`.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use crossgreen_core::diagnostics::{ball_discrepancy, moment_tests, potential_mc, scaled_energy_sequence};
use crossgreen_core::energy::{energy, energy_gradient};
use crossgreen_core::geometry::{distance, random_point, retract};
use crossgreen_core::kernel::comparison_kernel;
use crossgreen_core::optimize::multi_start;
use crossgreen_core::radial::sphere_area;
use crossgreen_core::rng::stream_rng;
use crossgreen_core::{
    build_green, Configuration, KernelEvaluator, KernelKind, Manifold, OptimizeOptions,
    QuadratureSpec, TangentVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn kernel(kind: KernelKind, m: Manifold) -> Result<KernelEvaluator, crossgreen_core::Error> {
    KernelEvaluator::new(kind, m, &spec())
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |k| lo + (hi - lo) * k as f64 / n as f64)
}

fn s2() -> Manifold {
    Manifold::sphere(2).unwrap()
}

fn kernel_s2() -> Outcome {
    let t = Instant::now();
    let ode = build_green(s2(), &spec())?;
    let mut dev = 0.0f64;
    for r in grid(0.01, PI - 0.01, 10_000) {
        let closed = -(0.5 * r).sin().ln() / (2.0 * PI) - 1.0 / (4.0 * PI);
        dev = dev.max((ode.value(r)? - closed).abs());
    }
    let secs = t.elapsed().as_secs_f64();
    Ok((
        dev <= 1e-9 && secs <= 1.0,
        format!("S^2 closed form: max dev {dev:.3e} (tol 1e-9), {secs:.2} s (limit 1 s)"),
    ))
}

fn kernel_cp() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, kind) in [(3, KernelKind::GreenClosedCp3), (4, KernelKind::GreenClosedCp4)] {
        let m = Manifold::complex_projective(n)?;
        let ode = build_green(m, &spec())?;
        let closed = kernel(kind, m)?;
        let q = 0.25 * PI;
        let (o0, c0) = (ode.value(q)?, closed.value(q)?);
        let mut dev = 0.0f64;
        for r in grid(0.05, 0.5 * PI - 0.05, 10_000) {
            dev = dev.max(((ode.value(r)? - o0) - (closed.value(r)? - c0)).abs());
        }
        ok &= dev <= 1e-8;
        parts.push(format!("{m} {dev:.3e}"));
    }
    let secs = t.elapsed().as_secs_f64();
    Ok((
        ok && secs <= 5.0,
        format!("CP^3/CP^4 closed forms: max dev {} (tol 1e-8), {secs:.2} s (limit 5 s)", parts.join(", ")),
    ))
}

fn singularity() -> Outcome {
    let r: f64 = 1e-3;
    let mut ok = true;
    let mut parts = Vec::new();
    for m in [Manifold::sphere(3)?, Manifold::complex_projective(2)?, Manifold::quaternion_projective(1)?] {
        let d = m.real_dim();
        let k = build_green(m, &spec())?;
        let got = r.powi(d as i32 - 1) * k.derivative(r)?;
        let want = -1.0 / sphere_area(d)?;
        let rel = ((got - want) / want).abs();
        ok &= rel <= 1e-3;
        parts.push(format!("{m} rel err {rel:.3e}"));
    }
    Ok((ok, format!("r^(d-1) phi'(1e-3) vs -1/vol(S^(d-1)): {} (tol 1e-3)", parts.join(", "))))
}

fn zero_mean() -> Outcome {
    let ms = [
        Manifold::sphere(2)?,
        Manifold::sphere(3)?,
        Manifold::sphere(4)?,
        Manifold::real_projective(2)?,
        Manifold::complex_projective(2)?,
        Manifold::complex_projective(3)?,
        Manifold::complex_projective(4)?,
        Manifold::quaternion_projective(1)?,
        Manifold::quaternion_projective(2)?,
        Manifold::cayley_plane(),
    ];
    let mut worst = 0.0f64;
    let mut arg = String::new();
    for m in ms {
        let mean = build_green(m, &spec())?.mean_value(&spec())?.abs();
        if mean >= worst {
            worst = mean;
            arg = m.to_string();
        }
    }
    Ok((worst <= 1e-9, format!("zero mean over 10 spaces: worst |mean| {worst:.3e} on {arg} (tol 1e-9)")))
}

fn constant_potential() -> Outcome {
    let t = Instant::now();
    let mut passed = 0;
    let mut total = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for m in [s2(), Manifold::real_projective(2)?, Manifold::complex_projective(2)?] {
        let k = build_green(m, &spec())?;
        for _ in 0..5 {
            let x = random_point(&m, &mut rng)?;
            let est = potential_mc(&k, &x, 1_000_000, &mut rng)?;
            total += 1;
            passed += usize::from(est.within(3.0));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    Ok((
        passed >= 14 && secs <= 60.0,
        format!("Monte Carlo potential: {passed}/{total} within 3 stderr (need 14), {secs:.1} s (limit 60 s)"),
    ))
}

fn small_optima() -> Outcome {
    let t = Instant::now();
    let green = build_green(s2(), &spec())?;
    let log = kernel(KernelKind::Logarithmic, s2())?;
    let opts = OptimizeOptions {
        seed: 6,
        record_trace: false,
        ..Default::default()
    };
    let two = multi_start(s2(), 2, &green, &opts)?;
    let d = distance(&s2(), &two.config.points()[0], &two.config.points()[1])?;
    let e2 = two.energy + 1.0 / (2.0 * PI);
    let three = multi_start(s2(), 3, &green, &opts)?;
    let e3 = three.energy - -0.340106757666820894;
    let four = multi_start(s2(), 4, &log, &opts)?;
    let e4 = four.energy + 6.0 * (8.0f64 / 3.0).ln();
    let secs = t.elapsed().as_secs_f64();
    Ok((
        e2.abs() <= 1e-9 && (d - PI).abs() <= 1e-6 && e3.abs() <= 1e-7 && e4.abs() <= 1e-6 && secs <= 30.0,
        format!(
            "S^2 optima: N=2 dE {e2:.2e} dd {:.2e}, N=3 dE {e3:.2e}, N=4 log dE {e4:.2e}, {secs:.1} s (limit 30 s)",
            d - PI
        ),
    ))
}

fn moved(c: &Configuration, dirs: &[TangentVector], h: f64) -> Result<Configuration, crossgreen_core::Error> {
    let m = c.manifold();
    let pts = c
        .points()
        .iter()
        .zip(dirs)
        .map(|(p, v)| retract(&m, p, &v.scaled(h)))
        .collect::<Result<Vec<_>, _>>()?;
    Configuration::new(m, pts)
}

fn fd_gap(c: &Configuration, k: &KernelEvaluator, rng: &mut ChaCha8Rng) -> Result<f64, crossgreen_core::Error> {
    let g = energy_gradient(c, k)?;
    let h = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let dirs = c
            .points()
            .iter()
            .map(|p| {
                let raw: Vec<f64> = (0..p.coords().len()).map(|_| rng.sample(StandardNormal)).collect();
                let t = TangentVector::project(p.clone(), raw)?;
                Ok(t.scaled(1.0 / t.norm()))
            })
            .collect::<Result<Vec<_>, crossgreen_core::Error>>()?;
        let analytic: f64 = g.gradients.iter().zip(&dirs).map(|(a, b)| a.dot(b)).sum();
        let plus = energy(&moved(c, &dirs, h)?, k)?.total;
        let minus = energy(&moved(c, &dirs, -h)?, k)?.total;
        worst = worst.max((analytic - (plus - minus) / (2.0 * h)).abs());
    }
    Ok(worst)
}

fn gradients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cases: Vec<(Manifold, KernelKind)> = Vec::new();
    for m in [
        Manifold::sphere(2)?,
        Manifold::sphere(3)?,
        Manifold::real_projective(2)?,
        Manifold::real_projective(3)?,
        Manifold::complex_projective(2)?,
        Manifold::complex_projective(3)?,
        Manifold::complex_projective(4)?,
        Manifold::quaternion_projective(1)?,
        Manifold::quaternion_projective(2)?,
    ] {
        cases.push((m, KernelKind::GreenOde));
    }
    for kind in [
        KernelKind::GreenClosedS2,
        KernelKind::Logarithmic,
        KernelKind::Riesz(0.5),
        KernelKind::Riesz(1.0),
        KernelKind::Riesz(2.0),
    ] {
        cases.push((s2(), kind));
    }
    cases.push((Manifold::sphere(3)?, KernelKind::Logarithmic));
    cases.push((Manifold::sphere(3)?, KernelKind::Riesz(1.0)));
    cases.push((Manifold::complex_projective(3)?, KernelKind::GreenClosedCp3));
    cases.push((Manifold::complex_projective(4)?, KernelKind::GreenClosedCp4));
    let mut worst = 0.0f64;
    let mut arg = String::new();
    for (m, kind) in &cases {
        let k = kernel(*kind, *m)?;
        let c = Configuration::random(*m, 8, &mut rng)?;
        let gap = fd_gap(&c, &k, &mut rng)?;
        if gap >= worst {
            worst = gap;
            arg = format!("{m} {}", kind.name());
        }
    }
    Ok((
        worst <= 1e-5,
        format!("central differences, {} family/kernel pairs: worst {worst:.3e} on {arg} (tol 1e-5)", cases.len()),
    ))
}

fn equidistribution() -> Outcome {
    let t = Instant::now();
    let green = build_green(s2(), &spec())?;
    let opts = OptimizeOptions {
        starts: 4,
        seed: 2025,
        record_trace: false,
        ..Default::default()
    };
    let seq = scaled_energy_sequence(s2(), &green, &[25, 50, 100, 200], &opts)?;
    let scaled: Vec<f64> = seq.iter().map(|e| e.scaled_energy).collect();
    let increasing = scaled.iter().all(|&s| s < 0.0) && scaled.windows(2).all(|w| w[0] < w[1]);
    let best = &seq[3].result.config;
    let mean_norm = moment_tests(best).mean_vector_norm;
    let trials = 10_000;
    let disc = ball_discrepancy(best, trials, &mut stream_rng(99, 0))?;
    let mut random = Vec::new();
    for j in 0..20u64 {
        let c = Configuration::random(s2(), 200, &mut stream_rng(100, j))?;
        random.push(ball_discrepancy(&c, trials, &mut stream_rng(99, 0))?);
    }
    random.sort_by(f64::total_cmp);
    let median = 0.5 * (random[9] + random[10]);
    let secs = t.elapsed().as_secs_f64();
    let shown: Vec<String> = scaled.iter().map(|s| format!("{s:.6}")).collect();
    Ok((
        increasing && mean_norm <= 0.05 && disc < median && secs <= 600.0,
        format!(
            "S^2 N=25..200: E/N^2 [{}], |mean| {mean_norm:.3e} (tol 0.05), discrepancy {disc:.4} vs random median {median:.4}, {secs:.0} s (limit 600 s)",
            shown.join(", ")
        ),
    ))
}

fn argmin_equivalence() -> Outcome {
    let green = build_green(s2(), &spec())?;
    let log = kernel(KernelKind::Logarithmic, s2())?;
    let shift = (2.0 * 2f64.ln() - 1.0) / (4.0 * PI);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut affine = 0.0f64;
    for _ in 0..100 {
        let p = random_point(&s2(), &mut rng)?;
        let q = random_point(&s2(), &mut rng)?;
        let g = green.green(&p, &q)?;
        let l = comparison_kernel(KernelKind::Logarithmic, &p, &q)?;
        affine = affine.max((g - (l / (2.0 * PI) + shift)).abs());
    }
    let opts = OptimizeOptions {
        starts: 4,
        seed: 12,
        record_trace: false,
        ..Default::default()
    };
    let n = 12;
    let xg = multi_start(s2(), n, &green, &opts)?.config;
    let xl = multi_start(s2(), n, &log, &opts)?.config;
    let dg = (energy(&xg, &green)?.total - energy(&xl, &green)?.total).abs();
    let dl = (energy(&xg, &log)?.total - energy(&xl, &log)?.total).abs();
    Ok((
        affine <= 1e-9 && dg <= 1e-6 && dl <= 1e-6,
        format!(
            "Green/log on S^2: affine gap {affine:.3e} (tol 1e-9), N={n} cross energies |dE_G| {dg:.3e} |dE_log| {dl:.3e} (tol 1e-6)"
        ),
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir()?;
    let run = |out: &str| -> Result<(Vec<u8>, Vec<u8>), Box<dyn std::error::Error>> {
        let o = Command::new(env!("CARGO_BIN_EXE_crossgreen"))
            .current_dir(dir.path())
            .args(["--threads", "1", "solve", "--family", "S", "--n", "2", "--N", "30"])
            .args(["--kernel", "green", "--seed", "42", "--starts", "4", "--out", out])
            .output()?;
        if !o.status.success() {
            return Err(String::from_utf8_lossy(&o.stderr).into_owned().into());
        }
        Ok((o.stdout, std::fs::read(dir.path().join(out))?))
    };
    let a = run("a.json")?;
    let b = run("b.json")?;
    Ok((a == b, format!("serial solve twice: identical report and points ({} bytes)", a.1.len())))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("kernel reconstruction S^2", kernel_s2),
        ("kernel reconstruction CP^3, CP^4", kernel_cp),
        ("singularity asymptotics", singularity),
        ("zero-mean normalization", zero_mean),
        ("constant potential", constant_potential),
        ("exact small-N optima", small_optima),
        ("gradient correctness", gradients),
        ("equidistribution trend", equidistribution),
        ("Green/log argmin equivalence", argmin_equivalence),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!("{} {:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

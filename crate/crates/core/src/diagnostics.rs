//! Monte Carlo and moment diagnostics for the uniform measure and for
//! energy-minimizing configurations.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::energy::{energy, separation};
use crate::error::{Error, Result};
use crate::geometry::{distance_raw, random_point, Configuration, Manifold, Point, Quaternion};
use crate::kernel::KernelEvaluator;
use crate::optimize::{multi_start, OptimizeOptions, OptimizeResult};
use crate::radial::RadialGeometry;
use crate::rng::{stream_rng, stream_seed};

/// Samples per independently seeded chunk.
const CHUNK: usize = 1 << 15;
pub const MIN_POTENTIAL_SAMPLES: usize = 1000;
pub const MIN_TRIALS: usize = 1000;

/// Running mean and variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }

    fn stderr(&self) -> f64 {
        (self.m2 / (self.n - 1.0) / self.n).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
}

impl PotentialEstimate {
    /// `|mean| ≤ k · stderr`.
    pub fn within(&self, k: f64) -> bool {
        self.mean.abs() <= k * self.stderr
    }
}

/// Monte Carlo estimate of `∫ G(x, y) dλ(y)` over uniform `y`. Samples are
/// drawn in chunks whose streams derive from one draw of `rng`, so the
/// result does not depend on the thread count.
pub fn potential_mc<R: Rng + ?Sized>(
    eval: &KernelEvaluator,
    x: &Point,
    n_samples: usize,
    rng: &mut R,
) -> Result<PotentialEstimate> {
    let m = eval.manifold();
    m.require_points("potential_mc")?;
    if x.manifold() != m {
        return Err(Error::ManifoldMismatch(m, x.manifold()));
    }
    if n_samples < MIN_POTENTIAL_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "potential_mc needs at least {MIN_POTENTIAL_SAMPLES} samples, got {n_samples}"
        )));
    }
    let base: u64 = rng.random();
    let chunks = n_samples.div_ceil(CHUNK);
    let parts: Vec<Result<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = stream_rng(base, c as u64);
            let count = CHUNK.min(n_samples - c * CHUNK);
            let mut acc = Moments::default();
            for _ in 0..count {
                let d = loop {
                    let y = random_point(&m, &mut local)?;
                    let d = distance_raw(&m, x.coords(), y.coords());
                    if d >= eval.r_min() {
                        break d;
                    }
                };
                acc.push(eval.value(d)?);
            }
            Ok(acc)
        })
        .collect();
    let mut total = Moments::default();
    for p in parts {
        total = total.merge(p?);
    }
    Ok(PotentialEstimate {
        mean: total.mean,
        stderr: total.stderr(),
        n_samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentStats {
    pub mean_vector_norm: f64,
    pub second_moment_deviation: f64,
}

/// Norm of the mean of the canonical representatives and Frobenius distance
/// of `(1/N) Σ x x*` from `I/(n+1)`.
pub fn moment_tests(config: &Configuration) -> MomentStats {
    let m = config.manifold();
    let k = m.scalar_width();
    let len = m.ambient_len();
    let n = config.len() as f64;
    let mut mean = vec![0.0; k * len];
    let mut second = vec![Quaternion::ZERO; len * len];
    for p in config.points() {
        let c = p.coords();
        for (s, x) in mean.iter_mut().zip(c) {
            *s += x;
        }
        for a in 0..len {
            let xa = Quaternion::load(&c[a * k..(a + 1) * k]);
            for b in 0..len {
                let xb = Quaternion::load(&c[b * k..(b + 1) * k]);
                second[a * len + b] += xa * xb.conj();
            }
        }
    }
    let mean_vector_norm = mean.iter().map(|s| (s / n) * (s / n)).sum::<f64>().sqrt();
    let target = 1.0 / len as f64;
    let mut dev2 = 0.0;
    for a in 0..len {
        for b in 0..len {
            let mut e = second[a * len + b].scale(1.0 / n);
            if a == b {
                e.w -= target;
            }
            dev2 += e.norm_sqr();
        }
    }
    MomentStats {
        mean_vector_norm,
        second_moment_deviation: dev2.sqrt(),
    }
}

/// Largest gap between the empirical and uniform mass over `trials` random
/// balls with uniform centres and radii uniform on `(0, D)`.
pub fn ball_discrepancy<R: Rng + ?Sized>(
    config: &Configuration,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "ball_discrepancy needs at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    let m = config.manifold();
    let radial = RadialGeometry::new(m);
    let mut balls = Vec::with_capacity(trials);
    for _ in 0..trials {
        let z = random_point(&m, rng)?;
        let r = m.diameter() * rng.random::<f64>();
        balls.push((z, r));
    }
    let n = config.len() as f64;
    let gaps: Vec<f64> = balls
        .par_iter()
        .map(|(z, r)| {
            let inside = config
                .points()
                .iter()
                .filter(|p| distance_raw(&m, z.coords(), p.coords()) < *r)
                .count();
            let frac = radial.ball_volume_fraction(*r).expect("radius in range");
            (inside as f64 / n - frac).abs()
        })
        .collect();
    Ok(gaps.into_iter().fold(0.0, f64::max).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceEntry {
    pub n_points: usize,
    pub scaled_energy: f64,
    pub result: OptimizeResult,
}

/// Multi-start minimization for each `N`; entry `N` is seeded with
/// `mix64(seed ⊕ N)`.
pub fn scaled_energy_sequence(
    m: Manifold,
    eval: &KernelEvaluator,
    n_list: &[usize],
    opts: &OptimizeOptions,
) -> Result<Vec<SequenceEntry>> {
    if n_list.iter().any(|&n| n < 2) || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "N list must be strictly increasing with every N >= 2".into(),
        ));
    }
    n_list
        .iter()
        .map(|&n| {
            let o = OptimizeOptions {
                seed: stream_seed(opts.seed, n as u64),
                ..opts.clone()
            };
            let result = multi_start(m, n, eval, &o)?;
            Ok(SequenceEntry {
                n_points: n,
                scaled_energy: result.energy / (n * n) as f64,
                result,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialTest {
    pub point: Point,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub potential_tests: Vec<PotentialTest>,
    pub mean_vector_norm: f64,
    pub second_moment_deviation: f64,
    pub ball_discrepancy: f64,
    pub separation: f64,
    pub scaled_energy: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnoseOptions {
    /// Potentials are estimated at the first this-many configuration points.
    pub potential_points: usize,
    pub potential_samples: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for DiagnoseOptions {
    fn default() -> Self {
        DiagnoseOptions {
            potential_points: 3,
            potential_samples: 100_000,
            trials: 10_000,
            seed: 0,
        }
    }
}

/// All diagnostics for one configuration. Stream 0 drives the discrepancy
/// balls and stream `1 + j` the potential estimate at point `j`.
pub fn diagnose(
    config: &Configuration,
    eval: &KernelEvaluator,
    opts: &DiagnoseOptions,
) -> Result<DiagnosticsReport> {
    let rep = energy(config, eval)?;
    let moments = moment_tests(config);
    let ball = ball_discrepancy(config, opts.trials, &mut stream_rng(opts.seed, 0))?;
    let potential_tests = config
        .points()
        .iter()
        .take(opts.potential_points)
        .enumerate()
        .map(|(j, p)| {
            let mut rng = stream_rng(opts.seed, 1 + j as u64);
            let est = potential_mc(eval, p, opts.potential_samples, &mut rng)?;
            Ok(PotentialTest {
                point: p.clone(),
                mc_mean: est.mean,
                mc_stderr: est.stderr,
                n_samples: est.n_samples,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticsReport {
        potential_tests,
        mean_vector_norm: moments.mean_vector_norm,
        second_moment_deviation: moments.second_moment_deviation,
        ball_discrepancy: ball,
        separation: separation(config).expect("energy checked N >= 2"),
        scaled_energy: rep.scaled,
        n: config.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merged_moments_match_direct() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64 * 0.3).collect();
        let mut all = Moments::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Moments::default(), Moments::default());
        xs[..40].iter().for_each(|&x| a.push(x));
        xs[40..].iter().for_each(|&x| b.push(x));
        let m = a.merge(b);
        assert!((m.mean - all.mean).abs() < 1e-14);
        assert!((m.m2 - all.m2).abs() < 1e-11);
    }
}

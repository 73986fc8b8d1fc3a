//! Riemannian gradient descent with Armijo backtracking, and multi-start.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::{energy, pair_energy};
use crate::error::{Error, Result};
use crate::geometry::{horizontal_project, retract_raw, Configuration, Manifold, DEFAULT_DELTA_MIN};
use crate::kernel::KernelEvaluator;
use crate::rng::{stream_rng, stream_seed};

/// Points are only perturbed for configurations at least this large.
pub const PERTURBATION_MIN_POINTS: usize = 50;
const PERTURBATION_EVERY: usize = 10;
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeOptions {
    pub max_iters: usize,
    /// Tolerance on the largest per-point gradient norm.
    pub grad_tol: f64,
    pub armijo_c: f64,
    pub backtrack_factor: f64,
    /// Largest displacement of any point per step, in radians.
    pub initial_step: f64,
    /// Stop once `step · ‖∇E‖_sup` falls below this.
    pub min_step: f64,
    pub starts: usize,
    pub seed: u64,
    pub record_trace: bool,
    /// Gaussian tangent kicks of size `perturbation_scale / iteration`.
    pub perturb: bool,
    pub perturbation_scale: f64,
    pub delta_min: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            max_iters: 5000,
            grad_tol: 1e-8,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
            initial_step: 0.1,
            min_step: 1e-14,
            starts: 8,
            seed: 0,
            record_trace: true,
            perturb: false,
            perturbation_scale: 0.05,
            delta_min: DEFAULT_DELTA_MIN,
        }
    }
}

impl OptimizeOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("invalid option: {what}")));
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return bad("armijo_c must lie in (0, 1)");
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return bad("backtrack_factor must lie in (0, 1)");
        }
        if !(self.grad_tol > 0.0 && self.min_step > 0.0 && self.initial_step > 0.0) {
            return bad("grad_tol, min_step and initial_step must be positive");
        }
        if !(self.delta_min > 0.0) || !(self.perturbation_scale >= 0.0) {
            return bad("delta_min must be positive and perturbation_scale nonnegative");
        }
        if self.starts == 0 {
            return bad("starts must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub energy: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    GradientTolerance,
    MaxIterations,
    MinStep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub config: Configuration,
    pub energy: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub stop: StopReason,
    pub trace: Option<Vec<TraceEntry>>,
    /// Cut-locus pair terms dropped from gradients, summed over iterations.
    pub degenerate_pair_events: usize,
}

fn sup_norm(grad: &[f64], stride: usize) -> f64 {
    grad.chunks_exact(stride)
        .map(|g| g.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

fn step_points(m: &Manifold, x: &[f64], dir: &[f64], alpha: f64, stride: usize, out: &mut [f64]) -> bool {
    let mut v = vec![0.0; stride];
    for ((p, d), o) in x
        .chunks_exact(stride)
        .zip(dir.chunks_exact(stride))
        .zip(out.chunks_exact_mut(stride))
    {
        for (vi, di) in v.iter_mut().zip(d) {
            *vi = alpha * di;
        }
        if !retract_raw(m, p, &v, o) {
            return false;
        }
    }
    true
}

/// Step `⟨s, s⟩/⟨s, y⟩` from ambient position and gradient differences.
fn barzilai_borwein(x: &[f64], g: &[f64], px: &[f64], pg: &[f64]) -> Option<f64> {
    let (mut ss, mut sy) = (0.0, 0.0);
    for i in 0..x.len() {
        let s = x[i] - px[i];
        ss += s * s;
        sy += s * (g[i] - pg[i]);
    }
    let a = ss / sy;
    (sy > 0.0 && a.is_finite()).then_some(a)
}

/// Descends from `config0` until the gradient, iteration or step budget runs out.
pub fn minimize(
    config0: &Configuration,
    eval: &KernelEvaluator,
    opts: &OptimizeOptions,
) -> Result<OptimizeResult> {
    opts.validate()?;
    let m = config0.manifold();
    if m != eval.manifold() {
        return Err(Error::ManifoldMismatch(eval.manifold(), m));
    }
    let n = config0.len();
    if n < 2 {
        return Err(Error::InvalidArgument("minimize needs at least 2 points".into()));
    }
    let stride = m.ambient_len() * m.scalar_width();
    let guard = 10.0 * eval.r_min();
    let mut x = config0.flat_coords();
    let mut grad = vec![0.0; x.len()];
    let (mut e, mut degenerate) = pair_energy(&m, eval, &x, guard, opts.delta_min, Some(&mut grad))
        .ok_or_else(|| {
            Error::OptimizationFailed("starting configuration has coincident points".into())
        })?;
    if !e.is_finite() {
        return Err(Error::OptimizationFailed(format!("starting energy is {e}")));
    }
    let mut gnorm = sup_norm(&grad, stride);
    let mut trace = opts.record_trace.then(|| {
        vec![TraceEntry {
            iteration: 0,
            energy: e,
            grad_norm: gnorm,
        }]
    });
    let perturb = opts.perturb && n >= PERTURBATION_MIN_POINTS && opts.perturbation_scale > 0.0;
    let mut kick_rng = stream_rng(opts.seed, u64::MAX);
    let mut trial = vec![0.0; x.len()];
    let mut trial_grad = vec![0.0; x.len()];
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut iterations = 0;
    let mut stop = StopReason::MaxIterations;

    while iterations < opts.max_iters {
        if gnorm <= opts.grad_tol {
            stop = StopReason::GradientTolerance;
            break;
        }
        let g2: f64 = grad.iter().map(|v| v * v).sum();
        let dir: Vec<f64> = grad.iter().map(|v| -v).collect();
        let cap = opts.initial_step / gnorm;
        let mut alpha = prev
            .as_ref()
            .and_then(|(px, pg)| barzilai_borwein(&x, &grad, px, pg))
            .map_or(cap, |bb| bb.min(cap));
        let accepted = loop {
            if alpha * gnorm < opts.min_step {
                break None;
            }
            if step_points(&m, &x, &dir, alpha, stride, &mut trial) {
                let eval_trial =
                    pair_energy(&m, eval, &trial, guard, opts.delta_min, Some(&mut trial_grad));
                if let Some((et, dt)) = eval_trial {
                    if et.is_finite() && et <= e - opts.armijo_c * alpha * g2 {
                        break Some((et, dt));
                    }
                }
            }
            alpha *= opts.backtrack_factor;
        };
        let Some((et, dt)) = accepted else {
            stop = StopReason::MinStep;
            break;
        };
        let (px, pg) = prev.get_or_insert_with(|| (vec![0.0; x.len()], vec![0.0; x.len()]));
        px.copy_from_slice(&x);
        pg.copy_from_slice(&grad);
        std::mem::swap(&mut x, &mut trial);
        std::mem::swap(&mut grad, &mut trial_grad);
        e = et;
        degenerate += dt;
        iterations += 1;
        if perturb && iterations % PERTURBATION_EVERY == 0 {
            let sigma = opts.perturbation_scale / iterations as f64;
            let mut kick: Vec<f64> = (0..x.len())
                .map(|_| sigma * kick_rng.sample::<f64, _>(StandardNormal))
                .collect();
            for (p, k) in x.chunks_exact(stride).zip(kick.chunks_exact_mut(stride)) {
                horizontal_project(&m, p, k);
            }
            if step_points(&m, &x, &kick, 1.0, stride, &mut trial) {
                if let Some((ek, dk)) =
                    pair_energy(&m, eval, &trial, guard, opts.delta_min, Some(&mut trial_grad))
                {
                    if ek <= e {
                        std::mem::swap(&mut x, &mut trial);
                        std::mem::swap(&mut grad, &mut trial_grad);
                        e = ek;
                        degenerate += dk;
                        prev = None;
                    }
                }
            }
        }
        gnorm = sup_norm(&grad, stride);
        if let Some(t) = trace.as_mut() {
            t.push(TraceEntry {
                iteration: iterations,
                energy: e,
                grad_norm: gnorm,
            });
        }
    }
    if iterations == opts.max_iters && gnorm <= opts.grad_tol {
        stop = StopReason::GradientTolerance;
    }
    let config = Configuration::from_flat(m, &x);
    let total = energy(&config, eval)?.total;
    Ok(OptimizeResult {
        config,
        energy: total,
        grad_norm: gnorm,
        iterations,
        converged: stop == StopReason::GradientTolerance,
        stop,
        trace,
        degenerate_pair_events: degenerate,
    })
}

/// Runs every start: start `k` draws its initial configuration from the
/// stream seeded by `mix64(seed ⊕ k)`.
pub fn multi_start_runs(
    m: Manifold,
    n: usize,
    eval: &KernelEvaluator,
    opts: &OptimizeOptions,
) -> Result<Vec<Result<OptimizeResult>>> {
    opts.validate()?;
    if n < 2 {
        return Err(Error::InvalidArgument("multi_start needs N >= 2".into()));
    }
    m.require_points("multi_start")?;
    Ok((0..opts.starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(opts.seed, k as u64);
            let start = Configuration::random(m, n, &mut rng)?;
            let run_opts = OptimizeOptions {
                seed: stream_seed(opts.seed, k as u64),
                ..opts.clone()
            };
            minimize(&start, eval, &run_opts)
        })
        .collect())
}

/// Lowest-energy result over all starts; near-ties go to the lowest index.
pub fn multi_start(
    m: Manifold,
    n: usize,
    eval: &KernelEvaluator,
    opts: &OptimizeOptions,
) -> Result<OptimizeResult> {
    pick_best(multi_start_runs(m, n, eval, opts)?)
}

pub(crate) fn pick_best(runs: Vec<Result<OptimizeResult>>) -> Result<OptimizeResult> {
    let mut best: Option<OptimizeResult> = None;
    let mut first_err = None;
    for run in runs {
        match run {
            Ok(r) => {
                let better = match &best {
                    None => true,
                    Some(b) => r.energy < b.energy - TIE_TOLERANCE,
                };
                if better {
                    best = Some(r);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_err.unwrap_or(Error::OptimizationFailed("no runs".into())))
}

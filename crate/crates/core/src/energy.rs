//! Discrete energies `E_K = Σ_{i≠j} K(xᵢ, xⱼ)` and their Riemannian gradients.
//!
//! Sums run over ordered pairs. Each row `i` is accumulated serially with
//! compensated summation and rows are combined in index order, so parallel
//! and serial evaluation give identical bits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    accumulate_distance_gradient, distance_raw, Configuration, Manifold, TangentVector,
    DEFAULT_DELTA_MIN,
};
use crate::kernel::KernelEvaluator;
use crate::sum::{sum, Neumaier};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub total: f64,
    /// `total / N²`
    pub scaled: f64,
    pub min_pair_distance: f64,
    pub per_point_potentials: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientReport {
    pub gradients: Vec<TangentVector>,
    /// Unordered pairs `(i, j)`, `i < j`, at the cut locus; their terms are zero.
    pub degenerate_pairs: Vec<(usize, usize)>,
}

impl GradientReport {
    /// Largest tangent norm over points.
    pub fn sup_norm(&self) -> f64 {
        self.gradients.iter().map(|g| g.norm()).fold(0.0, f64::max)
    }
}

fn check_inputs(config: &Configuration, eval: &KernelEvaluator) -> Result<()> {
    if config.manifold() != eval.manifold() {
        return Err(Error::ManifoldMismatch(eval.manifold(), config.manifold()));
    }
    if config.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "energy needs at least 2 points, got {}",
            config.len()
        )));
    }
    Ok(())
}

fn first_error<T>(rows: Vec<Result<T>>) -> Result<Vec<T>> {
    rows.into_iter().collect()
}

pub fn energy(config: &Configuration, eval: &KernelEvaluator) -> Result<EnergyReport> {
    check_inputs(config, eval)?;
    let m = config.manifold();
    let pts = config.points();
    let n = pts.len();
    let r_min = eval.r_min();
    let rows: Vec<Result<(f64, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Neumaier::default();
            let mut min = f64::INFINITY;
            let p = pts[i].coords();
            for (j, q) in pts.iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = distance_raw(&m, p, q.coords());
                if d < r_min {
                    return Err(Error::SingularConfiguration {
                        i: i.min(j),
                        j: i.max(j),
                        distance: d,
                    });
                }
                min = min.min(d);
                acc.add(eval.value_unchecked(d));
            }
            Ok((acc.value(), min))
        })
        .collect();
    let rows = first_error(rows)?;
    let per_point: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let min_pair_distance = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let total = sum(per_point.iter().copied());
    Ok(EnergyReport {
        total,
        scaled: total / (n as f64 * n as f64),
        min_pair_distance,
        per_point_potentials: per_point,
    })
}

pub fn energy_gradient(config: &Configuration, eval: &KernelEvaluator) -> Result<GradientReport> {
    energy_gradient_guarded(config, eval, DEFAULT_DELTA_MIN)
}

/// Gradient with a configurable guard: pairs with `d ≥ D − δ` contribute
/// zero and are reported; pairs with `d ≤ δ` are an error.
pub fn energy_gradient_guarded(
    config: &Configuration,
    eval: &KernelEvaluator,
    delta_min: f64,
) -> Result<GradientReport> {
    check_inputs(config, eval)?;
    let m = config.manifold();
    let pts = config.points();
    let n = pts.len();
    let cut = m.diameter() - delta_min;
    let near = delta_min.max(eval.r_min());
    let rows: Vec<Result<(Vec<f64>, Vec<(usize, usize)>)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = pts[i].coords();
            let mut g = vec![0.0; p.len()];
            let mut flagged = Vec::new();
            for (j, q) in pts.iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = distance_raw(&m, p, q.coords());
                if d <= near {
                    return Err(Error::SingularConfiguration {
                        i: i.min(j),
                        j: i.max(j),
                        distance: d,
                    });
                }
                if d >= cut {
                    if i < j {
                        flagged.push((i, j));
                    }
                    continue;
                }
                let scale = 2.0 * eval.derivative_unchecked(d);
                accumulate_distance_gradient(&m, p, q.coords(), scale, &mut g);
            }
            Ok((g, flagged))
        })
        .collect();
    let rows = first_error(rows)?;
    let mut gradients = Vec::with_capacity(n);
    let mut degenerate_pairs = Vec::new();
    for (p, (g, flagged)) in pts.iter().zip(rows) {
        gradients.push(TangentVector::from_raw(p.clone(), g));
        degenerate_pairs.extend(flagged);
    }
    Ok(GradientReport {
        gradients,
        degenerate_pairs,
    })
}

/// Smallest pairwise distance; `None` for fewer than two points.
pub fn separation(config: &Configuration) -> Option<f64> {
    let m = config.manifold();
    let pts = config.points();
    let mut min: Option<f64> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = distance_raw(&m, pts[i].coords(), pts[j].coords());
            min = Some(min.map_or(d, |x: f64| x.min(d)));
        }
    }
    min
}

/// Serial unordered-pair evaluation on flat point-major coordinates, used
/// inside the optimizer. Writes the gradient into `grad` when given and
/// returns `None` if any pair is closer than `guard`.
pub(crate) fn pair_energy(
    m: &Manifold,
    eval: &KernelEvaluator,
    flat: &[f64],
    guard: f64,
    delta_min: f64,
    mut grad: Option<&mut [f64]>,
) -> Option<(f64, usize)> {
    let stride = m.ambient_len() * m.scalar_width();
    let n = flat.len() / stride;
    let cut = m.diameter() - delta_min;
    let near = guard.max(if grad.is_some() { delta_min } else { 0.0 });
    if let Some(g) = grad.as_deref_mut() {
        g.iter_mut().for_each(|x| *x = 0.0);
    }
    let mut acc = Neumaier::default();
    let mut degenerate = 0usize;
    for i in 0..n {
        let p = &flat[i * stride..(i + 1) * stride];
        for j in i + 1..n {
            let q = &flat[j * stride..(j + 1) * stride];
            let d = distance_raw(m, p, q);
            if d < near {
                return None;
            }
            acc.add(eval.value_unchecked(d));
            if let Some(g) = grad.as_deref_mut() {
                if d >= cut {
                    degenerate += 1;
                    continue;
                }
                let scale = 2.0 * eval.derivative_unchecked(d);
                accumulate_distance_gradient(m, p, q, scale, &mut g[i * stride..(i + 1) * stride]);
                accumulate_distance_gradient(m, q, p, scale, &mut g[j * stride..(j + 1) * stride]);
            }
        }
    }
    Some((2.0 * acc.value(), degenerate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::kernel::build_green;
    use crate::quadrature::QuadratureSpec;
    use rand::SeedableRng;

    #[test]
    fn pair_path_matches_public_path() {
        let m = Manifold::complex_projective(2).unwrap();
        let k = build_green(m, &QuadratureSpec::default()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let c = Configuration::random(m, 9, &mut rng).unwrap();
        let flat = c.flat_coords();
        let mut g = vec![0.0; flat.len()];
        let (e, _) = pair_energy(&m, &k, &flat, 1e-11, DEFAULT_DELTA_MIN, Some(&mut g)).unwrap();
        let rep = energy(&c, &k).unwrap();
        assert!((e - rep.total).abs() <= 1e-13 * rep.total.abs().max(1.0));
        let grad = energy_gradient(&c, &k).unwrap();
        let stride = flat.len() / 9;
        for (i, t) in grad.gradients.iter().enumerate() {
            for (a, b) in t.coords().iter().zip(&g[i * stride..]) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        let back = Configuration::from_flat(m, &flat);
        assert_eq!(back, c);
    }

    #[test]
    fn guard_reports_close_pairs() {
        let m = Manifold::sphere(2).unwrap();
        let k = build_green(m, &QuadratureSpec::default()).unwrap();
        let p = Point::new(m, vec![0.0, 0.0, 1.0]).unwrap();
        let q = Point::from_ambient(m, vec![1e-6, 0.0, 1.0]).unwrap();
        let c = Configuration::new(m, vec![p, q]).unwrap();
        assert!(pair_energy(&m, &k, &c.flat_coords(), 1e-5, 1e-9, None).is_none());
        assert!(pair_energy(&m, &k, &c.flat_coords(), 1e-7, 1e-9, None).is_some());
    }
}

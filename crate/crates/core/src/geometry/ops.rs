use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

use super::point::canonicalize;
use super::{hermitian, right_scale, Manifold, Point, Quaternion, TangentVector};

/// Default guard on distances for which `∇d` is considered undefined.
pub const DEFAULT_DELTA_MIN: f64 = 1e-9;

fn check_pair(m: &Manifold, p: &Point, q: &Point) -> Result<()> {
    m.require_points("distance")?;
    for x in [p, q] {
        if x.manifold() != *m {
            return Err(Error::ManifoldMismatch(*m, x.manifold()));
        }
    }
    Ok(())
}

/// Cosine of the distance between two unit representatives, before clamping.
#[inline]
fn cos_distance(m: &Manifold, a: &[f64], b: &[f64]) -> f64 {
    let k = m.scalar_width();
    // quaternion products are not symmetric term by term; fix an argument order
    let (a, b) = if k == 4 && a > b { (b, a) } else { (a, b) };
    let ip = hermitian(k, a, b);
    if m.is_projective() {
        ip.norm()
    } else {
        ip.w
    }
}

#[inline]
pub(crate) fn distance_raw(m: &Manifold, a: &[f64], b: &[f64]) -> f64 {
    cos_distance(m, a, b).clamp(-1.0, 1.0).acos()
}

/// Geodesic distance, in `[0, diameter]`.
pub fn distance(m: &Manifold, p: &Point, q: &Point) -> Result<f64> {
    check_pair(m, p, q)?;
    Ok(distance_raw(m, p.coords(), q.coords()))
}

/// Adds `scale · ∇ₚ d(p, q)` to `out`. Caller guarantees `0 < d < diameter`.
#[inline]
pub(crate) fn accumulate_distance_gradient(
    m: &Manifold,
    p: &[f64],
    q: &[f64],
    scale: f64,
    out: &mut [f64],
) {
    let k = m.scalar_width();
    let ip = hermitian(k, p, q);
    if !m.is_projective() {
        let c = ip.w.clamp(-1.0, 1.0);
        let f = -scale / (1.0 - c * c).sqrt();
        for ((o, &pi), &qi) in out.iter_mut().zip(p).zip(q) {
            *o += f * (qi - c * pi);
        }
        return;
    }
    let abs = ip.norm();
    let c = abs.min(1.0);
    let f = -scale / (1.0 - c * c).sqrt();
    if k == 1 {
        let sign = ip.w.signum();
        for ((o, &pi), &qi) in out.iter_mut().zip(p).zip(q) {
            *o += f * (sign * qi - c * pi);
        }
        return;
    }
    // phase-aligned representative q·μ with ⟨p, qμ⟩ = |⟨p, q⟩|
    let mu = ip.conj().scale(1.0 / abs);
    for ((o, pi), qi) in out
        .chunks_exact_mut(k)
        .zip(p.chunks_exact(k))
        .zip(q.chunks_exact(k))
    {
        let aligned = Quaternion::load(qi) * mu;
        let step = aligned - Quaternion::load(pi).scale(c);
        let cur = Quaternion::load(o) + step.scale(f);
        cur.store(o);
    }
}

/// Riemannian gradient of `d(·, q)` at `p` (unit length) with the default guard.
pub fn distance_gradient(m: &Manifold, p: &Point, q: &Point) -> Result<TangentVector> {
    distance_gradient_guarded(m, p, q, DEFAULT_DELTA_MIN)
}

/// As [`distance_gradient`], failing when `d ≤ δ` or `d ≥ diameter − δ`.
pub fn distance_gradient_guarded(
    m: &Manifold,
    p: &Point,
    q: &Point,
    delta_min: f64,
) -> Result<TangentVector> {
    check_pair(m, p, q)?;
    let d = distance_raw(m, p.coords(), q.coords());
    if d <= delta_min || d >= m.diameter() - delta_min {
        return Err(Error::DegenerateDistance { distance: d });
    }
    let mut g = vec![0.0; p.coords().len()];
    accumulate_distance_gradient(m, p.coords(), q.coords(), 1.0, &mut g);
    Ok(TangentVector::from_raw(p.clone(), g))
}

/// Removes the component of `v` along the scalar orbit of `base`.
pub(crate) fn horizontal_project(m: &Manifold, base: &[f64], v: &mut [f64]) {
    let k = m.scalar_width();
    let ip = hermitian(k, base, v);
    if !m.is_projective() || k == 1 {
        for (x, &b) in v.iter_mut().zip(base) {
            *x -= ip.w * b;
        }
        return;
    }
    let mut along = base.to_vec();
    right_scale(k, &mut along, ip);
    for (x, a) in v.iter_mut().zip(along) {
        *x -= a;
    }
}

/// Metric-projection retraction `normalize(p + v)` into `out`, canonicalized.
/// Returns false when `p + v` vanishes.
pub(crate) fn retract_raw(m: &Manifold, p: &[f64], v: &[f64], out: &mut [f64]) -> bool {
    let mut norm2 = 0.0;
    for ((o, &pi), &vi) in out.iter_mut().zip(p).zip(v) {
        *o = pi + vi;
        norm2 += *o * *o;
    }
    let norm = norm2.sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return false;
    }
    out.iter_mut().for_each(|x| *x /= norm);
    canonicalize(m, out);
    true
}

pub fn retract(m: &Manifold, p: &Point, v: &TangentVector) -> Result<Point> {
    m.require_points("retract")?;
    if p.manifold() != *m || v.base().manifold() != *m {
        return Err(Error::ManifoldMismatch(*m, p.manifold()));
    }
    let mut out = vec![0.0; p.coords().len()];
    if !retract_raw(m, p.coords(), v.coords(), &mut out) {
        return Err(Error::InvalidPoint("retraction of p + v with zero norm".into()));
    }
    Ok(Point::from_canonical_unchecked(*m, out))
}

/// Uniformly distributed point: normalized standard Gaussian ambient vector.
pub fn random_point<R: Rng + ?Sized>(m: &Manifold, rng: &mut R) -> Result<Point> {
    m.require_points("random_point")?;
    let len = m.ambient_len() * m.scalar_width();
    loop {
        let v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        if v.iter().any(|&x| x != 0.0) {
            return Point::from_ambient(*m, v);
        }
    }
}

/// Square matrix over the scalar field of a manifold, acting on ambient
/// representatives by left multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientMatrix {
    dim: usize,
    width: usize,
    /// Row-major, `width` reals per entry.
    data: Vec<f64>,
}

impl AmbientMatrix {
    pub fn identity(m: &Manifold) -> Result<Self> {
        m.require_points("isometry")?;
        let (dim, width) = (m.ambient_len(), m.scalar_width());
        let mut data = vec![0.0; dim * dim * width];
        for i in 0..dim {
            data[(i * dim + i) * width] = 1.0;
        }
        Ok(AmbientMatrix { dim, width, data })
    }

    /// Builds a matrix from row-major scalar entries (`width` reals each).
    pub fn from_entries(m: &Manifold, data: Vec<f64>) -> Result<Self> {
        m.require_points("isometry")?;
        let (dim, width) = (m.ambient_len(), m.scalar_width());
        if data.len() != dim * dim * width {
            return Err(Error::InvalidArgument(format!(
                "matrix for {m} needs {} reals, got {}",
                dim * dim * width,
                data.len()
            )));
        }
        Ok(AmbientMatrix { dim, width, data })
    }

    /// Random orthogonal/unitary/symplectic matrix by Gram–Schmidt on
    /// Gaussian columns.
    pub fn random_unitary<R: Rng + ?Sized>(m: &Manifold, rng: &mut R) -> Result<Self> {
        m.require_points("isometry")?;
        let (dim, k) = (m.ambient_len(), m.scalar_width());
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(dim);
        while cols.len() < dim {
            let mut c: Vec<f64> = (0..dim * k).map(|_| rng.sample(StandardNormal)).collect();
            for _ in 0..2 {
                for prev in &cols {
                    let ip = hermitian(k, prev, &c);
                    let mut along = prev.clone();
                    right_scale(k, &mut along, ip);
                    c.iter_mut().zip(&along).for_each(|(x, a)| *x -= a);
                }
            }
            let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-8 {
                c.iter_mut().for_each(|x| *x /= norm);
                cols.push(c);
            }
        }
        let mut data = vec![0.0; dim * dim * k];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..dim {
                let dst = (i * dim + j) * k;
                data[dst..dst + k].copy_from_slice(&col[i * k..(i + 1) * k]);
            }
        }
        Ok(AmbientMatrix { dim, width: k, data })
    }

    fn entry(&self, i: usize, j: usize) -> Quaternion {
        let at = (i * self.dim + j) * self.width;
        Quaternion::load(&self.data[at..at + self.width])
    }

    /// `max |(Q*Q − I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = Quaternion::ZERO;
                for r in 0..self.dim {
                    acc += self.entry(r, i).conj() * self.entry(r, j);
                }
                if i == j {
                    acc.w -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub(crate) fn apply_raw(&self, x: &[f64]) -> Vec<f64> {
        let k = self.width;
        let mut out = vec![0.0; x.len()];
        for i in 0..self.dim {
            let mut acc = Quaternion::ZERO;
            for j in 0..self.dim {
                acc += self.entry(i, j) * Quaternion::load(&x[j * k..(j + 1) * k]);
            }
            acc.store(&mut out[i * k..(i + 1) * k]);
        }
        out
    }
}

/// Image of `p` under the isometry induced by ambient matrix `q`.
pub fn apply_isometry(m: &Manifold, p: &Point, q: &AmbientMatrix) -> Result<Point> {
    m.require_points("apply_isometry")?;
    if p.manifold() != *m {
        return Err(Error::ManifoldMismatch(*m, p.manifold()));
    }
    if q.dim != m.ambient_len() || q.width != m.scalar_width() {
        return Err(Error::InvalidArgument(format!("matrix shape does not match {m}")));
    }
    let defect = q.unitarity_defect();
    if defect > 1e-10 {
        return Err(Error::NotUnitary(defect));
    }
    Point::from_ambient(*m, q.apply_raw(p.coords()))
}

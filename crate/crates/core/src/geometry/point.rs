use crate::error::{Error, Result};

use super::{hermitian, right_scale, Manifold, Quaternion};

const UNIT_NORM_TOL: f64 = 1e-12;

/// Unit ambient representative of a point, stored as a flat list of reals
/// (`scalar_width` reals per scalar coordinate). Projective points are kept in
/// canonical gauge: the first nonzero coordinate is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    manifold: Manifold,
    coords: Vec<f64>,
}

impl Point {
    /// Validates a unit representative and brings it to canonical gauge.
    pub fn new(manifold: Manifold, coords: Vec<f64>) -> Result<Self> {
        check_shape(&manifold, &coords)?;
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::InvalidPoint(format!(
                "ambient norm {norm} is not 1 within {UNIT_NORM_TOL:e}"
            )));
        }
        let mut coords = coords;
        canonicalize(&manifold, &mut coords);
        Ok(Point { manifold, coords })
    }

    /// Normalizes an arbitrary nonzero ambient vector.
    pub fn from_ambient(manifold: Manifold, mut coords: Vec<f64>) -> Result<Self> {
        check_shape(&manifold, &coords)?;
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidPoint(format!("cannot normalize vector of norm {norm}")));
        }
        coords.iter_mut().for_each(|x| *x /= norm);
        canonicalize(&manifold, &mut coords);
        Ok(Point { manifold, coords })
    }

    pub(crate) fn from_canonical_unchecked(manifold: Manifold, coords: Vec<f64>) -> Self {
        Point { manifold, coords }
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// The `i`-th ambient scalar, embedded in the quaternions.
    pub fn scalar(&self, i: usize) -> Quaternion {
        let k = self.manifold.scalar_width();
        Quaternion::load(&self.coords[i * k..(i + 1) * k])
    }

    pub fn is_canonical(&self) -> bool {
        is_canonical(&self.manifold, &self.coords)
    }

    /// Same point with its representative multiplied on the right by a unit
    /// scalar (not re-canonicalized). Used to exercise gauge invariance.
    pub fn regauged(&self, unit: Quaternion) -> Point {
        let mut coords = self.coords.clone();
        right_scale(self.manifold.scalar_width(), &mut coords, unit);
        Point {
            manifold: self.manifold,
            coords,
        }
    }
}

fn check_shape(manifold: &Manifold, coords: &[f64]) -> Result<()> {
    manifold.require_points("point construction")?;
    let expected = manifold.ambient_len() * manifold.scalar_width();
    if coords.len() != expected {
        return Err(Error::InvalidPoint(format!(
            "{manifold} points need {expected} real components, got {}",
            coords.len()
        )));
    }
    if coords.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidPoint("non-finite coordinate".into()));
    }
    Ok(())
}

fn lead_index(k: usize, coords: &[f64]) -> Option<usize> {
    coords
        .chunks_exact(k)
        .position(|c| c.iter().any(|&x| x != 0.0))
}

fn is_canonical(manifold: &Manifold, coords: &[f64]) -> bool {
    if !manifold.is_projective() {
        return true;
    }
    let k = manifold.scalar_width();
    match lead_index(k, coords) {
        Some(i) => coords[i * k] > 0.0 && coords[i * k + 1..(i + 1) * k].iter().all(|&x| x == 0.0),
        None => false,
    }
}

/// Fixes the scalar gauge of a projective representative in place.
pub(crate) fn canonicalize(manifold: &Manifold, coords: &mut [f64]) {
    if is_canonical(manifold, coords) {
        return;
    }
    let k = manifold.scalar_width();
    let Some(i) = lead_index(k, coords) else {
        return;
    };
    let lead = Quaternion::load(&coords[i * k..(i + 1) * k]);
    let norm = lead.norm();
    right_scale(k, coords, lead.conj().scale(1.0 / norm));
    coords[i * k] = coords[i * k].abs();
    coords[i * k + 1..(i + 1) * k].iter_mut().for_each(|x| *x = 0.0);
}

/// Tangent (horizontal, for projective spaces) vector at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: Point,
    coords: Vec<f64>,
}

impl TangentVector {
    /// Wraps an ambient vector, checking it is horizontal at `base` within 1e-10.
    pub fn new(base: Point, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != base.coords.len() {
            return Err(Error::InvalidArgument(format!(
                "tangent vector has {} components, base point {}",
                coords.len(),
                base.coords.len()
            )));
        }
        let t = TangentVector { base, coords };
        let defect = t.verticality();
        if defect > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "vector is not tangent at its base point (|<x, v>| = {defect:e})"
            )));
        }
        Ok(t)
    }

    /// Orthogonal projection of an arbitrary ambient vector onto the
    /// horizontal space at `base`.
    pub fn project(base: Point, mut coords: Vec<f64>) -> Result<Self> {
        if coords.len() != base.coords.len() {
            return Err(Error::InvalidArgument("tangent vector length mismatch".into()));
        }
        super::horizontal_project(&base.manifold, &base.coords, &mut coords);
        Ok(TangentVector { base, coords })
    }

    pub fn zero(base: Point) -> Self {
        let coords = vec![0.0; base.coords.len()];
        TangentVector { base, coords }
    }

    pub(crate) fn from_raw(base: Point, coords: Vec<f64>) -> Self {
        TangentVector { base, coords }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Real part of the Hermitian product: the Riemannian metric on tangent vectors.
    pub fn dot(&self, other: &TangentVector) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, s: f64) -> TangentVector {
        TangentVector {
            base: self.base.clone(),
            coords: self.coords.iter().map(|x| x * s).collect(),
        }
    }

    /// `|⟨x, v⟩|` for projective families (the full scalar), `|Re⟨x, v⟩|` for spheres.
    pub fn verticality(&self) -> f64 {
        let m = self.base.manifold;
        let ip = hermitian(m.scalar_width(), &self.base.coords, &self.coords);
        if m.is_projective() {
            ip.norm()
        } else {
            ip.w.abs()
        }
    }
}

/// An ordered list of points on one manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    manifold: Manifold,
    points: Vec<Point>,
}

impl Configuration {
    pub fn new(manifold: Manifold, points: Vec<Point>) -> Result<Self> {
        manifold.require_points("configuration")?;
        if points.is_empty() {
            return Err(Error::InvalidArgument("configuration has no points".into()));
        }
        if let Some(p) = points.iter().find(|p| p.manifold != manifold) {
            return Err(Error::ManifoldMismatch(manifold, p.manifold));
        }
        Ok(Configuration { manifold, points })
    }

    pub fn random<R: rand::Rng + ?Sized>(manifold: Manifold, n: usize, rng: &mut R) -> Result<Self> {
        let points = (0..n)
            .map(|_| super::random_point(&manifold, rng))
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(manifold, points)
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// All coordinates as one contiguous buffer, point-major.
    pub(crate) fn flat_coords(&self) -> Vec<f64> {
        self.points.iter().flat_map(|p| p.coords.iter().copied()).collect()
    }

    pub(crate) fn from_flat(manifold: Manifold, flat: &[f64]) -> Self {
        let stride = manifold.ambient_len() * manifold.scalar_width();
        let points = flat
            .chunks_exact(stride)
            .map(|c| Point::from_canonical_unchecked(manifold, c.to_vec()))
            .collect();
        Configuration { manifold, points }
    }
}

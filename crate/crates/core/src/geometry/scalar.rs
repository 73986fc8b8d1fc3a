use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Hamilton quaternion `w + xi + yj + zk`.
///
/// Reals and complex numbers embed as `(w, 0, 0, 0)` and `(w, x, 0, 0)`; the
/// product restricted to those subalgebras is the ordinary one, so all scalar
/// types of the supported projective models share this arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Reads the first `k` components of `slice` (k = 1, 2 or 4).
    #[inline]
    pub fn load(slice: &[f64]) -> Self {
        match slice.len() {
            1 => Self::real(slice[0]),
            2 => Self::new(slice[0], slice[1], 0.0, 0.0),
            4 => Self::new(slice[0], slice[1], slice[2], slice[3]),
            k => panic!("unsupported scalar width {k}"),
        }
    }

    /// Writes the first `out.len()` components.
    #[inline]
    pub fn store(self, out: &mut [f64]) {
        let parts = [self.w, self.x, self.y, self.z];
        out.copy_from_slice(&parts[..out.len()]);
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// Hermitian inner product `Σ conj(a_i) b_i` of two flat ambient vectors whose
/// scalars are `k` consecutive reals.
#[inline]
pub fn hermitian(k: usize, a: &[f64], b: &[f64]) -> Quaternion {
    match k {
        1 => Quaternion::real(a.iter().zip(b).map(|(x, y)| x * y).sum()),
        2 => {
            let (mut re, mut im) = (0.0, 0.0);
            for (p, q) in a.chunks_exact(2).zip(b.chunks_exact(2)) {
                re += p[0] * q[0] + p[1] * q[1];
                im += p[0] * q[1] - p[1] * q[0];
            }
            Quaternion::new(re, im, 0.0, 0.0)
        }
        4 => {
            let mut acc = Quaternion::ZERO;
            for (p, q) in a.chunks_exact(4).zip(b.chunks_exact(4)) {
                acc += Quaternion::load(p).conj() * Quaternion::load(q);
            }
            acc
        }
        _ => panic!("unsupported scalar width {k}"),
    }
}

/// Right-multiplies every scalar of `v` by `s` in place.
#[inline]
pub fn right_scale(k: usize, v: &mut [f64], s: Quaternion) {
    if k == 1 {
        v.iter_mut().for_each(|x| *x *= s.w);
        return;
    }
    for chunk in v.chunks_exact_mut(k) {
        (Quaternion::load(chunk) * s).store(chunk);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_units() {
        let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let k = Quaternion::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, -Quaternion::ONE);
    }

    #[test]
    fn conj_reverses_products() {
        let a = Quaternion::new(0.3, -1.2, 0.7, 2.0);
        let b = Quaternion::new(-0.5, 0.1, 1.5, -0.4);
        let lhs = (a * b).conj();
        let rhs = b.conj() * a.conj();
        assert!((lhs - rhs).norm() < 1e-15);
        assert!(((a * b).norm() - a.norm() * b.norm()).abs() < 1e-14);
    }

    #[test]
    fn hermitian_widths_agree_on_embedded_scalars() {
        let a = [0.5, -0.25, 1.0];
        let b = [2.0, 0.5, -1.0];
        let real = hermitian(1, &a, &b);
        let a4: Vec<f64> = a.iter().flat_map(|&x| [x, 0.0, 0.0, 0.0]).collect();
        let b4: Vec<f64> = b.iter().flat_map(|&x| [x, 0.0, 0.0, 0.0]).collect();
        assert_eq!(real, hermitian(4, &a4, &b4));
        let a2 = [1.0, 2.0, 0.0, -1.0];
        let b2 = [0.5, 0.5, 3.0, 1.0];
        let c = hermitian(2, &a2, &b2);
        let a24: Vec<f64> = a2.chunks(2).flat_map(|c| [c[0], c[1], 0.0, 0.0]).collect();
        let b24: Vec<f64> = b2.chunks(2).flat_map(|c| [c[0], c[1], 0.0, 0.0]).collect();
        assert!((c - hermitian(4, &a24, &b24)).norm() < 1e-15);
    }
}

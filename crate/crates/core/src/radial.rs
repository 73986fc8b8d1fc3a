//! Radial volume geometry of the CROSS.
//!
//! Around any point the geodesic sphere of radius `r` has volume
//! `v(r) = vol(S^{d−1}) · P(r)` where the density profile `P(r) = r^{d−1}Ω(r)`
//! is `c · sinᵃ r · cosᵇ r` with
//!
//! | family | `c`        | `a`    | `b` | diameter |
//! |--------|------------|--------|-----|----------|
//! | Sⁿ     | 1          | n − 1  | 0   | π        |
//! | RPⁿ    | 2ⁿ⁻¹       | n − 1  | 0   | π/2      |
//! | CPⁿ    | 2²ⁿ⁻¹      | 2n − 1 | 1   | π/2      |
//! | HPⁿ    | 2⁴ⁿ⁻¹      | 4n − 1 | 3   | π/2      |
//! | OP²    | 2¹⁵        | 15     | 7   | π/2      |
//!
//! The total volume is always the integral of this profile, constants
//! included. Tails `∫ᵣᴰ v` use a reduction formula whose terms are all
//! nonnegative on `[0, π/2]`, so they keep full relative accuracy up to the
//! cut locus; heads `∫₀ʳ v` use a Taylor series for small radii.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geometry::{Family, Manifold};
use crate::series::EvenSeries;

const HEAD_SERIES_LEN: usize = 40;
/// Below this radius heads come from the Taylor series.
const HEAD_SERIES_MAX: f64 = 0.5;

/// `vol(S^{d−1})`, the area of the unit sphere in `ℝᵈ`.
pub fn sphere_area(d: usize) -> Result<f64> {
    match d {
        0 => Err(Error::InvalidArgument("sphere_area needs d >= 1".into())),
        1 => Ok(2.0),
        2 => Ok(2.0 * PI),
        _ => Ok(2.0 * PI / (d as f64 - 2.0) * sphere_area(d - 2)?),
    }
}

/// `∫ᵣ^{π/2} sinᵃ t cosᵇ t dt` by reduction on `a`; all terms nonnegative.
fn quarter_tail(a: u32, b: u32, r: f64) -> f64 {
    let (s, c) = r.sin_cos();
    let mut acc = match a % 2 {
        1 => c.powi(b as i32 + 1) / (b as f64 + 1.0),
        _ => {
            debug_assert!(b == 0, "even sine powers only occur without cosine factor");
            FRAC_PI_2 - r
        }
    };
    let mut k = 2 + a % 2;
    while k <= a {
        let kb = (k + b) as f64;
        acc = s.powi(k as i32 - 1) * c.powi(b as i32 + 1) / kb + (k as f64 - 1.0) / kb * acc;
        k += 2;
    }
    acc
}

/// Volume profile of a manifold and the integrals derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGeometry {
    manifold: Manifold,
    dim: usize,
    origin_density: f64,
    sin_pow: u32,
    cos_pow: u32,
    diameter: f64,
    sphere_constant: f64,
    /// Integral of the unit-coefficient profile over `[0, D]`.
    unit_volume: f64,
    /// Taylor coefficients of `sinᵃ t cosᵇ t / tᵃ` in powers of `t²`.
    head_coeffs: Vec<f64>,
}

impl RadialGeometry {
    pub fn new(manifold: Manifold) -> Self {
        let d = manifold.real_dim();
        let n = manifold.param() as i32;
        let (log2c, a, b) = match manifold.family() {
            Family::SphereS => (0, n - 1, 0),
            Family::RealProjRP => (n - 1, n - 1, 0),
            Family::ComplexProjCP => (2 * n - 1, 2 * n - 1, 1),
            Family::QuaternionProjHP => (4 * n - 1, 4 * n - 1, 3),
            Family::OctonionProjOP2 => (15, 15, 7),
        };
        let (a, b) = (a as u32, b as u32);
        let diameter = manifold.diameter();
        let unit_volume = match manifold.family() {
            Family::SphereS => 2.0 * quarter_tail(a, 0, 0.0),
            _ => quarter_tail(a, b, 0.0),
        };
        let head = EvenSeries::sinc(HEAD_SERIES_LEN)
            .powi(a)
            .mul(&EvenSeries::cos(HEAD_SERIES_LEN).powi(b));
        RadialGeometry {
            manifold,
            dim: d,
            origin_density: 2f64.powi(log2c),
            sin_pow: a,
            cos_pow: b,
            diameter,
            sphere_constant: sphere_area(d).expect("d > 1"),
            unit_volume,
            head_coeffs: head.0,
        }
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// `vol(S^{d−1})`.
    pub fn sphere_constant(&self) -> f64 {
        self.sphere_constant
    }

    /// Leading coefficient `c` of the profile, `P(r) ~ c r^{d−1}` as `r → 0`.
    pub fn origin_density(&self) -> f64 {
        self.origin_density
    }

    /// Exponents `(a, b)` of `sinᵃ r cosᵇ r`.
    pub fn exponents(&self) -> (u32, u32) {
        (self.sin_pow, self.cos_pow)
    }

    /// Total volume `V = ∫₀ᴰ v`.
    pub fn total_volume(&self) -> f64 {
        self.sphere_constant * self.origin_density * self.unit_volume
    }

    fn check(&self, r: f64) -> Result<()> {
        if (0.0..=self.diameter).contains(&r) {
            Ok(())
        } else {
            Err(Error::RadiusOutOfRange {
                r,
                min: 0.0,
                max: self.diameter,
            })
        }
    }

    /// Profile `r^{d−1}Ω(r)` without range checks.
    #[inline]
    pub(crate) fn profile_unchecked(&self, r: f64) -> f64 {
        let (s, c) = r.sin_cos();
        self.origin_density * s.powi(self.sin_pow as i32) * c.powi(self.cos_pow as i32)
    }

    pub fn profile(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok(self.profile_unchecked(r).max(0.0))
    }

    /// Geodesic-sphere volume `v(r)`.
    pub fn v(&self, r: f64) -> Result<f64> {
        Ok(self.sphere_constant * self.profile(r)?)
    }

    #[inline]
    pub(crate) fn v_unchecked(&self, r: f64) -> f64 {
        self.sphere_constant * self.profile_unchecked(r)
    }

    /// Unit-coefficient `∫₀ʳ sinᵃ cosᵇ` from the Taylor series (small r).
    fn unit_head_series(&self, r: f64) -> f64 {
        let x = r * r;
        let a = self.sin_pow as f64;
        let mut acc = 0.0;
        for (k, &h) in self.head_coeffs.iter().enumerate().rev() {
            acc = acc * x + h / (a + 2.0 * k as f64 + 1.0);
        }
        acc * r.powi(self.sin_pow as i32 + 1)
    }

    fn unit_tail(&self, r: f64) -> f64 {
        if r >= self.diameter {
            return 0.0;
        }
        let (a, b) = (self.sin_pow, self.cos_pow);
        match self.manifold.family() {
            Family::SphereS if r > FRAC_PI_2 => {
                let x = PI - r;
                if x < HEAD_SERIES_MAX {
                    self.unit_head_series(x)
                } else {
                    0.5 * self.unit_volume - quarter_tail(a, 0, x)
                }
            }
            Family::SphereS => quarter_tail(a, 0, r) + 0.5 * self.unit_volume,
            _ => quarter_tail(a, b, r),
        }
    }

    fn unit_head(&self, r: f64) -> f64 {
        if r < HEAD_SERIES_MAX {
            self.unit_head_series(r)
        } else {
            self.unit_volume - self.unit_tail(r)
        }
    }

    #[inline]
    pub(crate) fn tail_unchecked(&self, r: f64) -> f64 {
        self.sphere_constant * self.origin_density * self.unit_tail(r)
    }

    #[inline]
    pub(crate) fn head_unchecked(&self, r: f64) -> f64 {
        self.sphere_constant * self.origin_density * self.unit_head(r)
    }

    /// `∫ᵣᴰ v(t) dt`.
    pub fn tail(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok(self.tail_unchecked(r).max(0.0))
    }

    /// `∫₀ʳ v(t) dt`.
    pub fn head(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok(self.head_unchecked(r).max(0.0))
    }

    /// `L(r) = −d/dr log v(r) = −a cot r + b tan r`.
    pub fn radial_laplacian(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r < self.diameter) {
            return Err(Error::RadiusOutOfRange {
                r,
                min: 0.0,
                max: self.diameter,
            });
        }
        let (s, c) = r.sin_cos();
        Ok(-(self.sin_pow as f64) * c / s + self.cos_pow as f64 * s / c)
    }

    /// Volume fraction of a geodesic ball of radius `r`.
    pub fn ball_volume_fraction(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok((self.unit_head(r) / self.unit_volume).clamp(0.0, 1.0))
    }
}

/// One row of a radial tabulation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RadialTableRow {
    pub r: f64,
    pub v: f64,
    pub tail: f64,
    #[serde(rename = "L")]
    pub laplacian: f64,
    pub cdf: f64,
}

impl RadialGeometry {
    /// Midpoint-grid tabulation `r_k = D(k + ½)/points`.
    pub fn table(&self, points: usize) -> Result<Vec<RadialTableRow>> {
        if points == 0 {
            return Err(Error::InvalidArgument("table needs at least one point".into()));
        }
        (0..points)
            .map(|k| {
                let r = self.diameter * (k as f64 + 0.5) / points as f64;
                Ok(RadialTableRow {
                    r,
                    v: self.v(r)?,
                    tail: self.tail(r)?,
                    laplacian: self.radial_laplacian(r)?,
                    cdf: self.ball_volume_fraction(r)?,
                })
            })
            .collect()
    }
}

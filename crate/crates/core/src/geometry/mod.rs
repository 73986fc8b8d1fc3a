//! Points, distances, tangent vectors and retractions on the round sphere and
//! the real, complex and quaternionic projective spaces.
//!
//! Every supported space is modelled inside a unit sphere of scalars:
//! `Sⁿ ⊂ ℝⁿ⁺¹`, and `FPⁿ = S(Fⁿ⁺¹)/U(1, F)` for `F ∈ {ℝ, ℂ, ℍ}` with the
//! scalar gauge acting on the right. Projective distances are
//! `arccos |⟨p, q⟩|`, so all projective families have diameter `π/2`.
//! The Cayley plane only exists here as a [`Manifold`] record for radial
//! (kernel and density) queries.

mod ops;
mod point;
mod scalar;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ops::{
    apply_isometry, distance, distance_gradient, random_point, retract, AmbientMatrix,
    DEFAULT_DELTA_MIN,
};
pub(crate) use ops::{accumulate_distance_gradient, distance_raw, horizontal_project, retract_raw};
pub use point::{Configuration, Point, TangentVector};
pub use scalar::Quaternion;
pub(crate) use scalar::{hermitian, right_scale};

/// The five families of compact rank-one symmetric spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "S")]
    SphereS,
    #[serde(rename = "RP")]
    RealProjRP,
    #[serde(rename = "CP")]
    ComplexProjCP,
    #[serde(rename = "HP")]
    QuaternionProjHP,
    #[serde(rename = "OP")]
    OctonionProjOP2,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::SphereS => "S",
            Family::RealProjRP => "RP",
            Family::ComplexProjCP => "CP",
            Family::QuaternionProjHP => "HP",
            Family::OctonionProjOP2 => "OP",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "S" => Some(Family::SphereS),
            "RP" => Some(Family::RealProjRP),
            "CP" => Some(Family::ComplexProjCP),
            "HP" => Some(Family::QuaternionProjHP),
            "OP" => Some(Family::OctonionProjOP2),
            _ => None,
        }
    }
}

/// A CROSS identified by its family and family parameter, e.g. `CP³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ManifoldRecord", into = "ManifoldRecord")]
pub struct Manifold {
    family: Family,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct ManifoldRecord {
    family: Family,
    n: u32,
}

impl TryFrom<ManifoldRecord> for Manifold {
    type Error = Error;
    fn try_from(r: ManifoldRecord) -> Result<Self> {
        Manifold::new(r.family, r.n)
    }
}

impl From<Manifold> for ManifoldRecord {
    fn from(m: Manifold) -> Self {
        ManifoldRecord {
            family: m.family,
            n: m.n,
        }
    }
}

impl Manifold {
    pub fn new(family: Family, n: u32) -> Result<Self> {
        if family == Family::OctonionProjOP2 && n != 2 {
            return Err(Error::InvalidManifold(format!(
                "the octonionic projective space exists only for n = 2, got n = {n}"
            )));
        }
        let m = Manifold { family, n };
        if n == 0 || m.real_dim() <= 1 {
            return Err(Error::InvalidManifold(format!(
                "{m} has real dimension {}; need > 1",
                m.real_dim()
            )));
        }
        Ok(m)
    }

    pub fn sphere(n: u32) -> Result<Self> {
        Self::new(Family::SphereS, n)
    }

    pub fn real_projective(n: u32) -> Result<Self> {
        Self::new(Family::RealProjRP, n)
    }

    pub fn complex_projective(n: u32) -> Result<Self> {
        Self::new(Family::ComplexProjCP, n)
    }

    pub fn quaternion_projective(n: u32) -> Result<Self> {
        Self::new(Family::QuaternionProjHP, n)
    }

    pub fn cayley_plane() -> Self {
        Manifold {
            family: Family::OctonionProjOP2,
            n: 2,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn param(&self) -> u32 {
        self.n
    }

    pub fn real_dim(&self) -> usize {
        let n = self.n as usize;
        match self.family {
            Family::SphereS | Family::RealProjRP => n,
            Family::ComplexProjCP => 2 * n,
            Family::QuaternionProjHP => 4 * n,
            Family::OctonionProjOP2 => 16,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self.family {
            Family::SphereS => PI,
            _ => FRAC_PI_2,
        }
    }

    pub fn is_projective(&self) -> bool {
        self.family != Family::SphereS
    }

    /// Whether points (and hence distances, sampling, energies) are modelled.
    pub fn supports_points(&self) -> bool {
        self.family != Family::OctonionProjOP2
    }

    /// Number of reals per ambient scalar: 1, 2 or 4.
    pub fn scalar_width(&self) -> usize {
        match self.family {
            Family::SphereS | Family::RealProjRP => 1,
            Family::ComplexProjCP => 2,
            Family::QuaternionProjHP => 4,
            Family::OctonionProjOP2 => 8,
        }
    }

    /// Number of ambient scalar coordinates of a representative, `n + 1`.
    pub fn ambient_len(&self) -> usize {
        self.n as usize + 1
    }

    pub(crate) fn require_points(&self, op: &'static str) -> Result<()> {
        if self.supports_points() {
            Ok(())
        } else {
            Err(Error::Unsupported { op, manifold: *self })
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.family.tag(), self.n)
    }
}

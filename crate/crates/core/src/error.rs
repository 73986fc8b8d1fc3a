use thiserror::Error;

use crate::geometry::Manifold;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid manifold: {0}")]
    InvalidManifold(String),

    #[error("points live on different manifolds ({0} and {1})")]
    ManifoldMismatch(Manifold, Manifold),

    #[error("`{op}` is not supported on {manifold}")]
    Unsupported { op: &'static str, manifold: Manifold },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("radius {r} outside [{min}, {max}]")]
    RadiusOutOfRange { r: f64, min: f64, max: f64 },

    #[error("distance {distance} too close to 0 or the diameter for a gradient")]
    DegenerateDistance { distance: f64 },

    #[error("kernel evaluated at distance {distance} below r_min")]
    SingularEvaluation { distance: f64 },

    #[error("points {i} and {j} coincide (distance {distance})")]
    SingularConfiguration { i: usize, j: usize, distance: f64 },

    #[error("matrix is not orthogonal/unitary (defect {0:e})")]
    NotUnitary(f64),

    #[error("quadrature did not converge (partial value {value}, error estimate {error_estimate:e})")]
    QuadratureNonConvergence { value: f64, error_estimate: f64 },

    #[error("interpolation residual {residual:e} above tolerance {tolerance:e}")]
    InterpolationResidual { residual: f64, tolerance: f64 },

    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. }
                | Error::InterpolationResidual { .. }
                | Error::OptimizationFailed(_)
        )
    }
}

//! Green functions of the compact rank-one symmetric spaces from their
//! radial ODE, discrete Green energies, Riemannian minimization and
//! equidistribution diagnostics.

pub mod chebyshev;
pub mod diagnostics;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod io;
pub mod kernel;
pub mod optimize;
pub mod quadrature;
pub mod radial;
pub mod rng;
mod series;
mod sum;

pub use diagnostics::{DiagnoseOptions, DiagnosticsReport, PotentialEstimate};
pub use energy::{EnergyReport, GradientReport};
pub use error::{Error, Result};
pub use geometry::{Configuration, Family, Manifold, Point, TangentVector};
pub use kernel::{build_green, KernelEvaluator, KernelKind};
pub use optimize::{OptimizeOptions, OptimizeResult, StopReason, TraceEntry};
pub use quadrature::QuadratureSpec;
pub use radial::RadialGeometry;

//! Radial Green kernels `G(x, y) = φ(d(x, y))` and comparison kernels.
//!
//! The Green kernel solves `φ'' − L φ' = 1/V` with
//! `φ'(r) = −tail(r) / (V · v(r))`. Near the origin
//! `1/v(r) = K · csc^a r · sec^b r` with `K = 1/(vol(S^{d−1}) c)`, and the
//! Laurent expansion of that product supplies an exact singular part `s(r)`.
//! The remainder `φ − s` is smooth on `[0, D]`; its derivative is
//! interpolated by a Chebyshev series and integrated exactly, anchored so
//! that `φ(D) − C = 0`, and the constant `C` enforces `∫ φ v = 0`.

use std::f64::consts::PI;

use rand::Rng;
use statrs::function::beta::{beta, beta_reg};

use crate::chebyshev::ChebyshevSeries;
use crate::error::{Error, Result};
use crate::geometry::{distance, random_point, Family, Manifold, Point};
use crate::quadrature::{integrate, integrate_singular_left, LeftSingularity, QuadratureSpec};
use crate::radial::{sphere_area, RadialGeometry};
use crate::series::EvenSeries;

/// Smallest distance at which kernels are evaluated.
pub const DEFAULT_R_MIN: f64 = 1e-12;
/// Maximum validation residual `|φ − φ_direct| / max(1, |φ|)`.
pub const INTERPOLATION_TOLERANCE: f64 = 1e-10;
const DEGREES: [usize; 3] = [64, 128, 256];
const VALIDATION_POINTS: usize = 200;
const SERIES_RADIUS: f64 = 0.5;
const SERIES_EXTRA_TERMS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    GreenOde,
    GreenClosedS2,
    GreenClosedCp3,
    GreenClosedCp4,
    Logarithmic,
    Riesz(f64),
}

impl KernelKind {
    pub fn is_green(&self) -> bool {
        matches!(
            self,
            KernelKind::GreenOde
                | KernelKind::GreenClosedS2
                | KernelKind::GreenClosedCp3
                | KernelKind::GreenClosedCp4
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelKind::GreenOde => "green",
            KernelKind::GreenClosedS2 => "green-s2",
            KernelKind::GreenClosedCp3 => "green-cp3",
            KernelKind::GreenClosedCp4 => "green-cp4",
            KernelKind::Logarithmic => "log",
            KernelKind::Riesz(_) => "riesz",
        }
    }
}

/// Analytic leading behaviour of a kernel at `r → 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum SingularPart {
    /// `log_coeff · ln r + Σ c · r^q`
    Laurent { log_coeff: f64, powers: Vec<(i32, f64)> },
    /// `r^{−s}`
    Power(f64),
}

impl SingularPart {
    /// Singular part of the Green kernel of `radial`, from the negative
    /// powers of `−K csc^a sec^b` integrated term by term.
    fn green(radial: &RadialGeometry) -> (Self, Vec<f64>) {
        let (a, b) = radial.exponents();
        let k_amp = green_amplitude(radial);
        let len = a as usize / 2 + SERIES_EXTRA_TERMS;
        let e = EvenSeries::sinc(len)
            .recip()
            .powi(a)
            .mul(&EvenSeries::cos(len).recip().powi(b))
            .0;
        let mut log_coeff = 0.0;
        let mut powers = Vec::new();
        for (k, &ek) in e.iter().enumerate() {
            let p = 2 * k as i32 - a as i32;
            if p >= 0 {
                break;
            }
            if p == -1 {
                log_coeff = -k_amp * ek;
            } else {
                powers.push((p + 1, -k_amp * ek / (p + 1) as f64));
            }
        }
        (SingularPart::Laurent { log_coeff, powers }, e)
    }

    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        match self {
            SingularPart::Laurent { log_coeff, powers } => {
                let mut acc = if *log_coeff != 0.0 { log_coeff * r.ln() } else { 0.0 };
                for &(q, c) in powers {
                    acc += c * r.powi(q);
                }
                acc
            }
            SingularPart::Power(s) => r.powf(-s),
        }
    }

    #[inline]
    pub fn derivative(&self, r: f64) -> f64 {
        match self {
            SingularPart::Laurent { log_coeff, powers } => {
                let mut acc = log_coeff / r;
                for &(q, c) in powers {
                    acc += c * q as f64 * r.powi(q - 1);
                }
                acc
            }
            SingularPart::Power(s) => -s * r.powf(-s - 1.0),
        }
    }
}

/// `K = 1/(vol(S^{d−1}) c)`: the coefficient of `csc^a sec^b` in `1/v`.
fn green_amplitude(radial: &RadialGeometry) -> f64 {
    1.0 / (radial.sphere_constant() * radial.origin_density())
}

#[derive(Debug, Clone, PartialEq)]
enum Body {
    Ode {
        rho: ChebyshevSeries,
        smooth: ChebyshevSeries,
        residual: f64,
    },
    ClosedS2,
    ClosedCp { scale: f64, fourth: bool },
    Logarithmic,
    Riesz(f64),
}

/// An immutable radial kernel bound to a manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelEvaluator {
    kind: KernelKind,
    radial: RadialGeometry,
    singular: SingularPart,
    body: Body,
    zero_mean_constant: f64,
    r_min: f64,
}

/// `φ'(r) = −tail(r)/(V v(r))` for `0 < r < D`.
pub fn phi_prime(m: Manifold, r: f64) -> Result<f64> {
    let radial = RadialGeometry::new(m);
    if !(r > 0.0 && r < radial.diameter()) {
        return Err(Error::RadiusOutOfRange {
            r,
            min: 0.0,
            max: radial.diameter(),
        });
    }
    Ok(phi_prime_unchecked(&radial, r))
}

#[inline]
fn phi_prime_unchecked(radial: &RadialGeometry, r: f64) -> f64 {
    -radial.tail_unchecked(r) / (radial.total_volume() * radial.v_unchecked(r))
}

/// Builds the Green kernel of `m` from the radial ODE.
pub fn build_green(m: Manifold, spec: &QuadratureSpec) -> Result<KernelEvaluator> {
    let radial = RadialGeometry::new(m);
    let (singular, e) = SingularPart::green(&radial);
    let (a, _) = radial.exponents();
    let k_amp = green_amplitude(&radial);
    let volume = radial.total_volume();
    let diameter = radial.diameter();
    let kstart = (a as usize + 1) / 2;
    let regular: Vec<f64> = e[kstart..].to_vec();
    let odd = 2 * kstart > a as usize;

    let rho_exact = |t: f64| -> f64 {
        if t <= SERIES_RADIUS {
            let x = t * t;
            let mut reg = 0.0;
            for &c in regular.iter().rev() {
                reg = reg * x + c;
            }
            if odd {
                reg *= t;
            }
            -k_amp * reg + radial.head_unchecked(t) / (volume * radial.v_unchecked(t))
        } else {
            phi_prime_unchecked(&radial, t) - singular.derivative(t)
        }
    };

    let validation = validation_targets(&radial, spec)?;
    let mut best: Option<(f64, ChebyshevSeries, ChebyshevSeries, f64)> = None;
    for &deg in DEGREES.iter() {
        let rho = ChebyshevSeries::interpolate(rho_exact, 0.0, diameter, deg + 1);
        let mut smooth = rho.integral(diameter, -singular.value(diameter));
        let mean = integrate_singular_left(
            |r| weighted(&radial, r, singular.value(r) + smooth.eval(r)),
            0.0,
            diameter,
            LeftSingularity::Log,
            spec,
        )?;
        let c = -mean.value / volume;
        smooth.add_constant(c);
        let residual = validation
            .iter()
            .map(|&(r, phi0)| {
                let phi = singular.value(r) + smooth.eval(r);
                (phi - (phi0 + c)).abs() / phi.abs().max(1.0)
            })
            .fold(0.0, f64::max);
        let better = best.as_ref().is_none_or(|b| residual < b.0);
        if better {
            best = Some((residual, rho, smooth, c));
        }
        if residual <= INTERPOLATION_TOLERANCE {
            break;
        }
    }
    let (residual, rho, smooth, c) = best.expect("at least one degree tried");
    if residual > INTERPOLATION_TOLERANCE {
        return Err(Error::InterpolationResidual {
            residual,
            tolerance: INTERPOLATION_TOLERANCE,
        });
    }
    Ok(KernelEvaluator {
        kind: KernelKind::GreenOde,
        radial,
        singular,
        body: Body::Ode {
            rho,
            smooth,
            residual,
        },
        zero_mean_constant: c,
        r_min: DEFAULT_R_MIN,
    })
}

/// `f(r) v(r)`, with the vanishing contribution of tiny radii dropped so an
/// extreme power in `f` cannot overflow.
#[inline]
fn weighted(radial: &RadialGeometry, r: f64, f: f64) -> f64 {
    if r < 1e-30 {
        0.0
    } else {
        f * radial.v_unchecked(r)
    }
}

/// Pairs `(r_j, φ₀(r_j))` at midpoints `r_j = D(j + ½)/200`, with
/// `φ₀(r) = ∫ᵣᴰ −φ'` accumulated from the right by direct quadrature.
fn validation_targets(radial: &RadialGeometry, spec: &QuadratureSpec) -> Result<Vec<(f64, f64)>> {
    let d = radial.diameter();
    let grid: Vec<f64> = (0..VALIDATION_POINTS)
        .map(|j| d * (j as f64 + 0.5) / VALIDATION_POINTS as f64)
        .collect();
    let mut out = vec![(0.0, 0.0); VALIDATION_POINTS];
    let mut acc = 0.0;
    let mut right = d;
    for (j, &r) in grid.iter().enumerate().rev() {
        let piece = integrate(|t| -phi_prime_unchecked(radial, t), r, right, spec)?;
        acc += piece.value;
        out[j] = (r, acc);
        right = r;
    }
    Ok(out)
}

impl KernelEvaluator {
    /// Constructs any kernel kind. Closed forms need the matching manifold;
    /// comparison kernels need a sphere.
    pub fn new(kind: KernelKind, m: Manifold, spec: &QuadratureSpec) -> Result<Self> {
        match kind {
            KernelKind::GreenOde => build_green(m, spec),
            KernelKind::GreenClosedS2 => {
                require(kind, m, Family::SphereS, 2)?;
                let radial = RadialGeometry::new(m);
                Ok(KernelEvaluator {
                    kind,
                    singular: SingularPart::green(&radial).0,
                    radial,
                    body: Body::ClosedS2,
                    zero_mean_constant: -1.0 / (4.0 * PI),
                    r_min: DEFAULT_R_MIN,
                })
            }
            KernelKind::GreenClosedCp3 | KernelKind::GreenClosedCp4 => {
                let fourth = kind == KernelKind::GreenClosedCp4;
                require(kind, m, Family::ComplexProjCP, if fourth { 4 } else { 3 })?;
                let radial = RadialGeometry::new(m);
                let scale = 1.0 / ((if fourth { 96.0 } else { 24.0 }) * radial.total_volume());
                let mean = integrate_singular_left(
                    |r| weighted(&radial, r, scale * cp_profile(fourth, r.sin())),
                    0.0,
                    radial.diameter(),
                    LeftSingularity::Log,
                    spec,
                )?;
                Ok(KernelEvaluator {
                    kind,
                    singular: SingularPart::green(&radial).0,
                    zero_mean_constant: -mean.value / radial.total_volume(),
                    radial,
                    body: Body::ClosedCp { scale, fourth },
                    r_min: DEFAULT_R_MIN,
                })
            }
            KernelKind::Logarithmic => {
                require_sphere(kind, m)?;
                Ok(KernelEvaluator {
                    kind,
                    radial: RadialGeometry::new(m),
                    singular: SingularPart::Laurent {
                        log_coeff: -1.0,
                        powers: Vec::new(),
                    },
                    body: Body::Logarithmic,
                    zero_mean_constant: 0.0,
                    r_min: DEFAULT_R_MIN,
                })
            }
            KernelKind::Riesz(s) => {
                require_sphere(kind, m)?;
                if !(s > 0.0 && s.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "Riesz exponent must be positive, got {s}"
                    )));
                }
                Ok(KernelEvaluator {
                    kind,
                    radial: RadialGeometry::new(m),
                    singular: SingularPart::Power(s),
                    body: Body::Riesz(s),
                    zero_mean_constant: 0.0,
                    r_min: DEFAULT_R_MIN,
                })
            }
        }
    }

    pub fn with_r_min(mut self, r_min: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_min < self.diameter()) {
            return Err(Error::InvalidArgument(format!("r_min {r_min} out of range")));
        }
        self.r_min = r_min;
        Ok(self)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn manifold(&self) -> Manifold {
        self.radial.manifold()
    }

    pub fn radial(&self) -> &RadialGeometry {
        &self.radial
    }

    pub fn diameter(&self) -> f64 {
        self.radial.diameter()
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    /// Additive constant enforcing zero mean (zero for comparison kernels).
    pub fn zero_mean_constant(&self) -> f64 {
        self.zero_mean_constant
    }

    /// Chebyshev coefficients of `φ − s` for the ODE kernel.
    pub fn smooth_coefficients(&self) -> Option<&[f64]> {
        match &self.body {
            Body::Ode { smooth, .. } => Some(smooth.coeffs()),
            _ => None,
        }
    }

    /// Relative validation residual reached by the ODE construction.
    pub fn validation_residual(&self) -> Option<f64> {
        match &self.body {
            Body::Ode { residual, .. } => Some(*residual),
            _ => None,
        }
    }

    fn check(&self, r: f64) -> Result<f64> {
        let d = self.diameter();
        if r.is_nan() {
            return Err(Error::RadiusOutOfRange { r, min: 0.0, max: d });
        }
        if r < self.r_min {
            return Err(Error::SingularEvaluation { distance: r });
        }
        if r > d {
            if r <= d * (1.0 + 4.0 * f64::EPSILON) {
                return Ok(d);
            }
            return Err(Error::RadiusOutOfRange { r, min: 0.0, max: d });
        }
        Ok(r)
    }

    pub fn singular_part(&self, r: f64) -> Result<f64> {
        let r = self.check(r)?;
        Ok(self.singular.value(r))
    }

    /// The analytic singular term.
    pub fn singular(&self) -> &SingularPart {
        &self.singular
    }

    /// Kernel value as a function of distance.
    pub fn value(&self, r: f64) -> Result<f64> {
        let r = self.check(r)?;
        Ok(self.value_unchecked(r))
    }

    /// Derivative of [`value`](Self::value) in the distance.
    pub fn derivative(&self, r: f64) -> Result<f64> {
        let r = self.check(r)?;
        Ok(self.derivative_unchecked(r))
    }

    #[inline]
    pub(crate) fn value_unchecked(&self, r: f64) -> f64 {
        match &self.body {
            Body::Ode { smooth, .. } => self.singular.value(r) + smooth.eval(r),
            Body::ClosedS2 => -(0.5 * r).sin().ln() / (2.0 * PI) + self.zero_mean_constant,
            Body::ClosedCp { scale, fourth } => {
                scale * cp_profile(*fourth, r.sin()) + self.zero_mean_constant
            }
            Body::Logarithmic => -(2.0 * (0.5 * r).sin()).ln(),
            Body::Riesz(s) => (2.0 * (0.5 * r).sin()).powf(-s),
        }
    }

    #[inline]
    pub(crate) fn derivative_unchecked(&self, r: f64) -> f64 {
        match &self.body {
            Body::Ode { rho, .. } => self.singular.derivative(r) + rho.eval(r),
            Body::ClosedS2 => -1.0 / (4.0 * PI * (0.5 * r).tan()),
            Body::ClosedCp { scale, fourth } => {
                let (s, c) = r.sin_cos();
                scale * c * cp_profile_derivative(*fourth, s)
            }
            Body::Logarithmic => -0.5 / (0.5 * r).tan(),
            Body::Riesz(s) => {
                let h = 0.5 * r;
                -0.5 * s * (2.0 * h.sin()).powf(-s) / h.tan()
            }
        }
    }

    /// `G(p, q) = φ(d(p, q))`.
    pub fn green(&self, p: &Point, q: &Point) -> Result<f64> {
        let m = self.manifold();
        let d = distance(&m, p, q)?;
        if d < self.r_min {
            return Err(Error::SingularEvaluation { distance: d });
        }
        self.value(d)
    }

    /// `(1/V) ∫₀ᴰ φ v`, which vanishes for Green kernels.
    pub fn mean_value(&self, spec: &QuadratureSpec) -> Result<f64> {
        let radial = &self.radial;
        let q = integrate_singular_left(
            |r| {
                if r < self.r_min {
                    0.0
                } else {
                    weighted(radial, r, self.value_unchecked(r))
                }
            },
            0.0,
            self.diameter(),
            LeftSingularity::Log,
            spec,
        )?;
        Ok(q.value / radial.total_volume())
    }

    /// Midpoint-grid tabulation `r_k = D(k + ½)/points`.
    pub fn table(&self, points: usize) -> Result<Vec<KernelTableRow>> {
        if points == 0 {
            return Err(Error::InvalidArgument("table needs at least one point".into()));
        }
        let d = self.diameter();
        (0..points)
            .map(|k| {
                let r = d * (k as f64 + 0.5) / points as f64;
                Ok(KernelTableRow {
                    r,
                    phi: self.value(r)?,
                    phi_prime: self.derivative(r)?,
                    singular_part: self.singular_part(r)?,
                })
            })
            .collect()
    }
}

fn require(kind: KernelKind, m: Manifold, family: Family, n: u32) -> Result<()> {
    if m.family() == family && m.param() == n {
        Ok(())
    } else {
        Err(Error::Unsupported {
            op: kind.name(),
            manifold: m,
        })
    }
}

fn require_sphere(kind: KernelKind, m: Manifold) -> Result<()> {
    if m.family() == Family::SphereS {
        Ok(())
    } else {
        Err(Error::Unsupported {
            op: kind.name(),
            manifold: m,
        })
    }
}

/// `1/s⁴ + 2/s² − 4 ln s` or `2/s⁶ + 3/s⁴ + 6/s² − 12 ln s`.
#[inline]
fn cp_profile(fourth: bool, s: f64) -> f64 {
    let i2 = 1.0 / (s * s);
    if fourth {
        ((2.0 * i2 + 3.0) * i2 + 6.0) * i2 - 12.0 * s.ln()
    } else {
        (i2 + 2.0) * i2 - 4.0 * s.ln()
    }
}

#[inline]
fn cp_profile_derivative(fourth: bool, s: f64) -> f64 {
    let i2 = 1.0 / (s * s);
    if fourth {
        -12.0 * (((i2 + 1.0) * i2 + 1.0) * i2 + 1.0) / s
    } else {
        -4.0 * ((i2 + 1.0) * i2 + 1.0) / s
    }
}

/// One row of a tabulated kernel.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct KernelTableRow {
    pub r: f64,
    pub phi: f64,
    pub phi_prime: f64,
    pub singular_part: f64,
}

/// Comparison kernels on `Sⁿ` in terms of the chord `‖p − q‖ = 2 sin(d/2)`.
pub fn comparison_kernel(kind: KernelKind, p: &Point, q: &Point) -> Result<f64> {
    let m = p.manifold();
    if !matches!(kind, KernelKind::Logarithmic | KernelKind::Riesz(_)) {
        return Err(Error::InvalidArgument(format!(
            "{} is not a comparison kernel",
            kind.name()
        )));
    }
    require_sphere(kind, m)?;
    let d = distance(&m, p, q)?;
    if d < DEFAULT_R_MIN {
        return Err(Error::SingularEvaluation { distance: d });
    }
    let chord = 2.0 * (0.5 * d).sin();
    Ok(match kind {
        KernelKind::Riesz(s) => chord.powf(-s),
        _ => -chord.ln(),
    })
}

/// Sphere Green function in the chord `t`, up to an additive constant:
/// `(1/vol Sⁿ) ∫_{t²/4}^1 B_{1−x}(n/2, n/2) / (x − x²)^{n/2} dx`.
pub fn phi_sn_euclidean_check(n: u32, t: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    if !(t > 0.0 && t <= 2.0) {
        return Err(Error::InvalidArgument(format!("chord {t} outside (0, 2]")));
    }
    let h = 0.5 * n as f64;
    let full = beta(h, h);
    let lower = 0.25 * t * t;
    if lower >= 1.0 {
        return Ok(0.0);
    }
    let q = integrate(
        |x| {
            let y = 1.0 - x;
            if y <= 0.0 {
                return 1.0 / h;
            }
            full * beta_reg(h, h, y) / (x * y).powf(h)
        },
        lower,
        1.0,
        &QuadratureSpec::with_tolerances(1e-13, 1e-11),
    )?;
    Ok(q.value / sphere_area(n as usize + 1)?)
}

/// One closed-form or cross-pipeline comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCheck {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl KernelCheck {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// Checks available for `m`: zero mean always; the closed forms on
/// S², CP³ and CP⁴; the chord-integral form on spheres.
pub fn verify_kernel(m: Manifold, spec: &QuadratureSpec) -> Result<Vec<KernelCheck>> {
    let ode = build_green(m, spec)?;
    let mut out = vec![KernelCheck {
        name: "zero-mean".into(),
        max_deviation: ode.mean_value(spec)?.abs(),
        tolerance: 1e-9,
    }];
    let grid = |lo: f64, hi: f64| (0..=1000).map(move |k| lo + (hi - lo) * k as f64 / 1000.0);
    match (m.family(), m.param()) {
        (Family::SphereS, 2) => {
            let closed = KernelEvaluator::new(KernelKind::GreenClosedS2, m, spec)?;
            let mut dev = 0.0f64;
            for r in grid(0.01, PI - 0.01) {
                dev = dev.max((ode.value(r)? - closed.value(r)?).abs());
            }
            out.push(KernelCheck {
                name: "closed-form S^2".into(),
                max_deviation: dev,
                tolerance: 1e-9,
            });
        }
        (Family::ComplexProjCP, 3) | (Family::ComplexProjCP, 4) => {
            let kind = if m.param() == 3 {
                KernelKind::GreenClosedCp3
            } else {
                KernelKind::GreenClosedCp4
            };
            let closed = KernelEvaluator::new(kind, m, spec)?;
            let q = 0.25 * PI;
            let (o0, c0) = (ode.value(q)?, closed.value(q)?);
            let mut dev = 0.0f64;
            for r in grid(0.05, 0.5 * PI - 0.05) {
                dev = dev.max(((ode.value(r)? - o0) - (closed.value(r)? - c0)).abs());
            }
            out.push(KernelCheck {
                name: format!("closed-form {m}"),
                max_deviation: dev,
                tolerance: 1e-8,
            });
        }
        _ => {}
    }
    if m.family() == Family::SphereS {
        let n = m.param();
        let chords = [0.25, 0.5, 1.0, 1.5, 1.9];
        let base = 1.0;
        let r_of = |t: f64| 2.0 * (0.5 * t).asin();
        let (e0, o0) = (phi_sn_euclidean_check(n, base)?, ode.value(r_of(base))?);
        let mut dev = 0.0f64;
        for &t in &chords {
            let e = phi_sn_euclidean_check(n, t)? - e0;
            let o = ode.value(r_of(t))? - o0;
            dev = dev.max((e - o).abs());
        }
        out.push(KernelCheck {
            name: format!("chord integral {m}"),
            max_deviation: dev,
            tolerance: 1e-6,
        });
    }
    Ok(out)
}

/// Minimum Rayleigh quotient of `K_ij = φ(max(d_ij, ε))` over zero-sum
/// vectors, for `count` random points rejected until pairwise `d ≥ min_sep`.
pub fn conditional_pd_check<R: Rng + ?Sized>(
    eval: &KernelEvaluator,
    count: usize,
    min_sep: f64,
    eps: f64,
    rng: &mut R,
) -> Result<f64> {
    if count < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let m = eval.manifold();
    m.require_points("conditional_pd_check")?;
    let mut pts: Vec<Point> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while pts.len() < count {
        attempts += 1;
        if attempts > 1_000_000 {
            return Err(Error::InvalidArgument(format!(
                "could not place {count} points with separation {min_sep}"
            )));
        }
        let p = random_point(&m, rng)?;
        let mut ok = true;
        for q in &pts {
            if distance(&m, &p, q)? < min_sep {
                ok = false;
                break;
            }
        }
        if ok {
            pts.push(p);
        }
    }
    let n = count;
    let mut k = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = if i == j { 0.0 } else { distance(&m, &pts[i], &pts[j])? };
            k[(i, j)] = eval.value(d.max(eps))?;
        }
    }
    // Orthonormal basis of the zero-sum hyperplane (Helmert vectors).
    let mut basis = nalgebra::DMatrix::<f64>::zeros(n, n - 1);
    for c in 0..n - 1 {
        let len = (c + 1) as f64;
        let norm = (len * (len + 1.0)).sqrt();
        for r in 0..=c {
            basis[(r, c)] = 1.0 / norm;
        }
        basis[(c + 1, c)] = -len / norm;
    }
    let reduced = basis.transpose() * &k * &basis;
    let eig = nalgebra::SymmetricEigen::new(reduced);
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

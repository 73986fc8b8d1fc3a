//! Chebyshev series on an interval: interpolation at first-kind nodes,
//! Clenshaw evaluation, and exact antidifferentiation.

#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    lo: f64,
    hi: f64,
    /// `f(x) = Σ cₖ Tₖ(u)`, `u = (2x − lo − hi)/(hi − lo)`.
    coeffs: Vec<f64>,
}

impl ChebyshevSeries {
    /// Interpolates `f` at the `n` Chebyshev points of the first kind, which
    /// exclude the interval endpoints.
    pub fn interpolate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, n: usize) -> Self {
        assert!(n >= 1 && hi > lo);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let theta: Vec<f64> = (0..n)
            .map(|j| std::f64::consts::PI * (j as f64 + 0.5) / n as f64)
            .collect();
        let values: Vec<f64> = theta.iter().map(|t| f(mid + half * t.cos())).collect();
        let coeffs = (0..n)
            .map(|k| {
                let s: f64 = values
                    .iter()
                    .zip(&theta)
                    .map(|(v, t)| v * (k as f64 * t).cos())
                    .sum();
                if k == 0 {
                    s / n as f64
                } else {
                    2.0 * s / n as f64
                }
            })
            .collect();
        ChebyshevSeries { lo, hi, coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let u = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        let two_u = 2.0 * u;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = c + two_u * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + u * b1 - b2
    }

    /// Antiderivative `F` with `F(anchor) = value`.
    pub fn integral(&self, anchor: f64, value: f64) -> ChebyshevSeries {
        let n = self.coeffs.len();
        let half = 0.5 * (self.hi - self.lo);
        let c = |k: usize| self.coeffs.get(k).copied().unwrap_or(0.0);
        let mut out = vec![0.0; n + 1];
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            let prev = if k == 1 { 2.0 * c(0) } else { c(k - 1) };
            *slot = half * (prev - c(k + 1)) / (2.0 * k as f64);
        }
        let mut series = ChebyshevSeries {
            lo: self.lo,
            hi: self.hi,
            coeffs: out,
        };
        series.coeffs[0] = value - series.eval(anchor);
        series
    }

    pub fn add_constant(&mut self, c: f64) {
        self.coeffs[0] += c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_smooth_function() {
        let s = ChebyshevSeries::interpolate(|x: f64| (2.0 * x).exp(), 0.0, 1.5, 40);
        for i in 0..=30 {
            let x = 1.5 * i as f64 / 30.0;
            assert!((s.eval(x) - (2.0 * x).exp()).abs() < 1e-13, "{x}");
        }
    }

    #[test]
    fn integral_matches_antiderivative() {
        let s = ChebyshevSeries::interpolate(|x: f64| x.cos(), 0.5, 3.0, 40);
        let f = s.integral(3.0, 0.0);
        for i in 0..=20 {
            let x = 0.5 + 2.5 * i as f64 / 20.0;
            let want = x.sin() - 3.0f64.sin();
            assert!((f.eval(x) - want).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn low_degree_exact() {
        let s = ChebyshevSeries::interpolate(|x| 3.0 * x * x - x + 2.0, -2.0, 5.0, 3);
        assert!((s.eval(1.25) - (3.0 * 1.5625 - 1.25 + 2.0)).abs() < 1e-13);
        assert_eq!(s.degree(), 2);
    }
}

//! Truncated power series in `x = t²`, used for the even Taylor expansions of
//! products of powers of `sin t / t`, `t / sin t`, `cos t` and `sec t`.

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct EvenSeries(pub Vec<f64>);

impl EvenSeries {
    pub fn one(len: usize) -> Self {
        let mut c = vec![0.0; len];
        c[0] = 1.0;
        EvenSeries(c)
    }

    /// `sin t / t = Σ (−1)ᵏ t²ᵏ / (2k+1)!`
    pub fn sinc(len: usize) -> Self {
        let mut c = Vec::with_capacity(len);
        let mut term = 1.0;
        for k in 0..len {
            c.push(term);
            term *= -1.0 / (((2 * k + 2) * (2 * k + 3)) as f64);
        }
        EvenSeries(c)
    }

    /// `cos t = Σ (−1)ᵏ t²ᵏ / (2k)!`
    pub fn cos(len: usize) -> Self {
        let mut c = Vec::with_capacity(len);
        let mut term = 1.0;
        for k in 0..len {
            c.push(term);
            term *= -1.0 / (((2 * k + 1) * (2 * k + 2)) as f64);
        }
        EvenSeries(c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &EvenSeries) -> EvenSeries {
        let n = self.len().min(other.len());
        let mut out = vec![0.0; n];
        for (i, &a) in self.0.iter().take(n).enumerate() {
            for (j, &b) in other.0.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        EvenSeries(out)
    }

    pub fn recip(&self) -> EvenSeries {
        let n = self.len();
        let a0 = self.0[0];
        assert!(a0 != 0.0, "series with zero constant term has no reciprocal");
        let mut out = vec![0.0; n];
        out[0] = 1.0 / a0;
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| self.0[j] * out[k - j]).sum();
            out[k] = -s / a0;
        }
        EvenSeries(out)
    }

    pub fn powi(&self, mut p: u32) -> EvenSeries {
        let mut base = self.clone();
        let mut acc = EvenSeries::one(self.len());
        while p > 0 {
            if p & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            p >>= 1;
        }
        acc
    }
}

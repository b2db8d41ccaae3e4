use rand::Rng;
use serde::Serialize;

use super::gamma::standard_gamma;
use super::{check_positive, Law, RngStream};
use crate::error::Result;
use crate::specfun::reg_inc_beta;

/// Parameters of the beta first kind law, density ∝ `u^{a-1} (1-u)^{b-1}` on (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaParams {
    a: f64,
    b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_positive("beta parameter a", a)?;
        check_positive("beta parameter b", b)?;
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Beta {
    params: BetaParams,
    ln_norm: f64,
}

impl Beta {
    pub fn new(params: BetaParams) -> Self {
        let ln_norm = statrs::function::beta::ln_beta(params.a, params.b);
        Self { params, ln_norm }
    }

    pub fn params(&self) -> BetaParams {
        self.params
    }

    pub fn mean(&self) -> f64 {
        self.params.a / (self.params.a + self.params.b)
    }

    /// `E U^{-1} = (a+b-1)/(a-1)`, infinite for `a <= 1`.
    pub fn mean_reciprocal(&self) -> f64 {
        let BetaParams { a, b } = self.params;
        if a > 1.0 {
            (a + b - 1.0) / (a - 1.0)
        } else {
            f64::INFINITY
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let g1 = standard_gamma(self.params.a, rng);
            let g2 = standard_gamma(self.params.b, rng);
            let u = g1 / (g1 + g2);
            // both gammas can underflow for tiny shapes
            if u > 0.0 && u < 1.0 {
                return u;
            }
        }
    }

    pub fn sample(&self, n: usize, stream: &RngStream) -> Vec<f64> {
        let mut rng = stream.rng();
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }
}

impl Law for Beta {
    fn ln_pdf(&self, u: f64) -> f64 {
        if !(u > 0.0 && u < 1.0) {
            return f64::NEG_INFINITY;
        }
        (self.params.a - 1.0) * u.ln() + (self.params.b - 1.0) * (-u).ln_1p() - self.ln_norm
    }

    fn cdf(&self, u: f64) -> Result<f64> {
        if !(u > 0.0) {
            return Ok(0.0);
        }
        if u >= 1.0 {
            return Ok(1.0);
        }
        reg_inc_beta(self.params.a, self.params.b, u)
    }
}

pub fn sample_beta(params: &BetaParams, n: usize, stream: &RngStream) -> Vec<f64> {
    Beta::new(*params).sample(n, stream)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate_interval, QuadratureConfig};

    #[test]
    fn density_values() {
        let b = Beta::new(BetaParams::new(2.0, 1.0).unwrap());
        assert!((b.pdf(0.5) - 1.0).abs() < 1e-14);
        assert_eq!(b.pdf(1.5), 0.0);
        assert_eq!(b.cdf(2.0).unwrap(), 1.0);
        assert!((b.cdf(0.5).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn moments_against_quadrature() {
        let cfg = QuadratureConfig::default();
        let b = Beta::new(BetaParams::new(2.0, 1.0).unwrap());
        let m = integrate_interval(|u| u * b.pdf(u), 0.0, 1.0, &cfg).unwrap().value;
        assert!((m - 2.0 / 3.0).abs() < 1e-12);
        assert!((b.mean() - m).abs() < 1e-12);
        let r = integrate_interval(|u| b.pdf(u) / u, 0.0, 1.0, &cfg).unwrap().value;
        assert!((r - 2.0).abs() < 1e-10);
        assert!((b.mean_reciprocal() - r).abs() < 1e-10);
        assert!(Beta::new(BetaParams::new(1.0, 1.0).unwrap()).mean_reciprocal().is_infinite());
    }

    #[test]
    fn sampler_means() {
        let n = 1_000_000;
        let nf = n as f64;
        // uniform
        let u = sample_beta(&BetaParams::new(1.0, 1.0).unwrap(), n, &RngStream::new(5, 0));
        let m = u.iter().sum::<f64>() / nf;
        assert!((m - 0.5).abs() < 4.0 * (1.0f64 / 12.0).sqrt() / nf.sqrt());
        // Beta(2,1): mean 2/3, variance 1/18
        let u = sample_beta(&BetaParams::new(2.0, 1.0).unwrap(), n, &RngStream::new(6, 0));
        let m = u.iter().sum::<f64>() / nf;
        assert!((m - 2.0 / 3.0).abs() < 4.0 * (1.0f64 / 18.0).sqrt() / nf.sqrt());
        // E 1/U = 2 for Beta(2,1); the variance is infinite so use the sample sd
        let inv: Vec<f64> = u.iter().map(|x| 1.0 / x).collect();
        let mi = inv.iter().sum::<f64>() / nf;
        let var = inv.iter().map(|x| (x - mi) * (x - mi)).sum::<f64>() / (nf - 1.0);
        assert!((mi - 2.0).abs() < 4.0 * (var / nf).sqrt(), "{mi}");
    }
}

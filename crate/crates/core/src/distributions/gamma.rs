use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::rng::open01;
use super::{check_positive, Law, RngStream};
use crate::error::{domain, Result};
use crate::specfun::reg_inc_gamma;

/// Shape `b` and rate `c` of `G(b, c)`, density ∝ `y^{b-1} e^{-cy}` on (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaParams {
    b: f64,
    c: f64,
}

impl GammaParams {
    pub fn new(b: f64, c: f64) -> Result<Self> {
        check_positive("gamma shape b", b)?;
        check_positive("gamma rate c", c)?;
        Ok(Self { b, c })
    }

    pub fn shape(&self) -> f64 {
        self.b
    }

    pub fn rate(&self) -> f64 {
        self.c
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Gamma {
    params: GammaParams,
    ln_norm: f64,
}

impl Gamma {
    pub fn new(params: GammaParams) -> Self {
        // valid params guarantee b > 0
        let ln_norm = statrs::function::gamma::ln_gamma(params.b) - params.b * params.c.ln();
        Self { params, ln_norm }
    }

    pub fn params(&self) -> GammaParams {
        self.params
    }

    pub fn mean(&self) -> f64 {
        self.params.b / self.params.c
    }

    /// `M(s) = E e^{sY} = (1 - s/c)^{-b}` for `s < c`.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        let GammaParams { b, c } = self.params;
        if !(s < c) || s.is_nan() {
            return domain(format!("gamma Laplace transform needs s < c = {c}, got {s}"));
        }
        if s == 0.0 {
            return Ok(1.0);
        }
        Ok((-b * (-s / c).ln_1p()).exp())
    }

    /// First and second derivatives of the Laplace transform.
    pub fn laplace_derivatives(&self, s: f64) -> Result<(f64, f64)> {
        let m = self.laplace(s)?;
        let GammaParams { b, c } = self.params;
        let q = 1.0 - s / c;
        Ok((m * b / (c * q), m * b * (b + 1.0) / (c * c * q * q)))
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        standard_gamma(self.params.b, rng) / self.params.c
    }

    pub fn sample(&self, n: usize, stream: &RngStream) -> Vec<f64> {
        let mut rng = stream.rng();
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }
}

impl Law for Gamma {
    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) || x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        (self.params.b - 1.0) * x.ln() - self.params.c * x - self.ln_norm
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Ok(0.0);
        }
        reg_inc_gamma(self.params.b, self.params.c * x)
    }
}

/// One draw from `G(shape, 1)`.
///
/// Marsaglia and Tsang's squeeze method for `shape >= 1`; below that a draw at
/// `shape + 1` is scaled by `u^{1/shape}`.
pub fn standard_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let g = standard_gamma(shape + 1.0, rng);
        return g * open01(rng).powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = open01(rng);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

pub fn sample_gamma(params: &GammaParams, n: usize, stream: &RngStream) -> Vec<f64> {
    Gamma::new(*params).sample(n, stream)
}

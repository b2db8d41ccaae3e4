//! The gamma `G(b,c)`, Kummer `K(a,b,c)` and beta-first-kind `Beta(a,b)`
//! laws: validated parameters, densities, CDFs, Laplace transforms and
//! samplers.

mod beta;
mod gamma;
mod kummer;
mod rng;

pub use beta::{sample_beta, Beta, BetaParams};
pub use gamma::{sample_gamma, standard_gamma, Gamma, GammaParams};
pub use kummer::{kummer_log_norm, sample_kummer, Kummer, KummerParams, KummerSampler};
pub use rng::RngStream;

use crate::error::Result;

/// A univariate law with a density and a distribution function.
pub trait Law {
    fn ln_pdf(&self, x: f64) -> f64;

    fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn cdf(&self, x: f64) -> Result<f64>;

    /// CDF at every point of an ascending slice.
    fn cdf_sorted(&self, xs: &[f64]) -> Result<Vec<f64>> {
        xs.iter().map(|&x| self.cdf(x)).collect()
    }
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        crate::error::domain(format!("{name} must be positive and finite, got {v}"))
    }
}

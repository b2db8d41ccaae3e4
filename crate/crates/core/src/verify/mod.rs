//! Seeded Monte Carlo and quadrature checks of the independence property,
//! the constant regressions, and the Laplace-transform identities and ODEs
//! that characterize the Kummer/gamma pair.

mod fit;
mod identities;
mod independence;
mod ode;
mod regression;
mod residual;
pub mod stats;

pub use fit::{fit_from_pairs, fit_from_sample, FitReport, MapResolution, ParamEstimate};
pub use identities::{check_regression_identities, check_transform_identities};
pub use independence::{run_forward_property, run_independence, IndependenceReport};
pub use ode::{
    check_confluent_ode, check_gamma_ode, check_growth_dichotomy, check_kummer_ode,
    ConfluentBranch, GrowthReport,
};
pub use regression::{
    run_regression, run_regression_check, BinRow, FlatnessTest, RegressionReport, RegressionTheory,
};
pub use residual::{linspace, EquationResiduals, ResidualReport, ResidualRow};

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{Gamma, GammaParams, Kummer, KummerParams, RngStream};
use crate::error::{domain, Result};
use crate::transform::{PairSample, Provenance};

/// Significance level of the statistical gates.
pub const DEFAULT_LEVEL: f64 = 0.01;
/// Rejection threshold required of the negative control.
pub const CONTROL_LEVEL: f64 = 1e-3;
pub const DEFAULT_K_BINS: usize = 10;
pub const DEFAULT_Q_BINS: usize = 50;
pub const DEFAULT_MIN_BIN_COUNT: usize = 100;
pub const DEFAULT_STREAMS: usize = 8;

/// Stream, parallel split and significance level of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarlo {
    pub stream: RngStream,
    pub streams: usize,
    pub level: f64,
}

impl MonteCarlo {
    pub fn new(seed: u64) -> Self {
        Self {
            stream: RngStream::new(seed, 0),
            streams: DEFAULT_STREAMS,
            level: DEFAULT_LEVEL,
        }
    }

    pub fn with_streams(mut self, streams: usize) -> Self {
        self.streams = streams;
        self
    }

    pub fn with_level(mut self, level: f64) -> Self {
        self.level = level;
        self
    }

    pub fn sample(&self, x_law: &XLaw, y_law: &GammaParams, n: usize) -> Result<PairSample> {
        sample_pairs(x_law, y_law, n, &self.stream, self.streams)
    }
}

/// Law of `X` fed to the transform. `Gamma` is the negative control: with a
/// gamma `X` the pair `(U, V)` is not independent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "lowercase")]
pub enum XLaw {
    Kummer(KummerParams),
    Gamma(GammaParams),
}

impl XLaw {
    pub fn describe(&self) -> String {
        match self {
            XLaw::Kummer(p) => format!("K({}, {}, {})", p.a(), p.b(), p.c()),
            XLaw::Gamma(p) => format!("G({}, {})", p.shape(), p.rate()),
        }
    }
}

enum XSampler {
    Kummer(crate::distributions::KummerSampler),
    Gamma(Gamma),
}

impl XSampler {
    fn new(law: &XLaw) -> Result<Self> {
        Ok(match law {
            XLaw::Kummer(p) => XSampler::Kummer(Kummer::new(*p)?.sampler()),
            XLaw::Gamma(p) => XSampler::Gamma(Gamma::new(*p)),
        })
    }

    fn sample(&self, n: usize, stream: &RngStream) -> Vec<f64> {
        match self {
            XSampler::Kummer(s) => s.sample(n, stream),
            XSampler::Gamma(g) => g.sample(n, stream),
        }
    }
}

/// Draws `n` values in `streams` parallel chunks, chunk `i` calling `draw`
/// with its length and `stream.substream(i).substream(0)`, concatenated in
/// index order.
pub fn sample_chunked<F>(n: usize, stream: &RngStream, streams: usize, draw: F) -> Result<Vec<f64>>
where
    F: Fn(usize, &RngStream) -> Vec<f64> + Sync,
{
    check_split(n, streams)?;
    let chunks: Vec<Vec<f64>> = (0..streams)
        .into_par_iter()
        .map(|i| draw(chunk_len(n, streams, i), &stream.substream(i as u64).substream(0)))
        .collect();
    Ok(chunks.concat())
}

/// Draws `n` values of `X` alone; equal to the `x` column of
/// [`sample_pairs`] with the same stream and split.
pub fn sample_x(x_law: &XLaw, n: usize, stream: &RngStream, streams: usize) -> Result<Vec<f64>> {
    let xs = XSampler::new(x_law)?;
    sample_chunked(n, stream, streams, |len, sub| xs.sample(len, sub))
}

fn check_split(n: usize, streams: usize) -> Result<()> {
    if n == 0 {
        return domain("sample size must be at least 1");
    }
    if streams == 0 {
        return domain("stream count must be at least 1");
    }
    Ok(())
}

fn chunk_len(n: usize, streams: usize, i: usize) -> usize {
    n / streams + usize::from(i < n % streams)
}

/// Draws `n` independent pairs `X ~ x_law`, `Y ~ y_law` and maps them through
/// the transform.
///
/// Work is split into `streams` chunks, chunk `i` drawing `X` from
/// `stream.substream(i).substream(0)` and `Y` from `.substream(1)`. Chunks run
/// in parallel and are concatenated in index order, so the result depends on
/// `(stream, streams, n)` only.
pub fn sample_pairs(
    x_law: &XLaw,
    y_law: &GammaParams,
    n: usize,
    stream: &RngStream,
    streams: usize,
) -> Result<PairSample> {
    check_split(n, streams)?;
    let xs = XSampler::new(x_law)?;
    let ys = Gamma::new(*y_law);
    let chunks: Vec<(Vec<f64>, Vec<f64>)> = (0..streams)
        .into_par_iter()
        .map(|i| {
            let len = chunk_len(n, streams, i);
            let sub = stream.substream(i as u64);
            (xs.sample(len, &sub.substream(0)), ys.sample(len, &sub.substream(1)))
        })
        .collect();
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for (cx, cy) in chunks {
        x.extend(cx);
        y.extend(cy);
    }
    let provenance = Provenance {
        x_law: x_law.describe(),
        y_law: format!("G({}, {})", y_law.shape(), y_law.rate()),
        stream: *stream,
        streams,
    };
    PairSample::from_xy(x, y, Some(provenance))
}

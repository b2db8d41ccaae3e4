use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_STAT_N: usize = 100_000;
pub const DEFAULT_FIT_N: usize = 1_000_000;
pub const DEFAULT_GRID_POINTS: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "kummer",
    version,
    about = "Sampling, verification and fitting for the Kummer/gamma transform"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a seeded sample and write it as columns.
    Sample(SampleArgs),
    /// Chi-square independence of (U, V) plus KS tests of both marginals.
    CheckIndependence(StatArgs),
    /// Binned regressions of U, 1/U, 1-U and (1-U)^2 on V.
    CheckRegression(StatArgs),
    /// Conditional-expectation and Laplace-transform identities by quadrature.
    CheckIdentities(GridArgs),
    /// Gamma, Kummer-Laplace and confluent hypergeometric ODE residuals.
    CheckOde(GridArgs),
    /// Recover (a, b, c) from the (u, v) columns of a sample.
    Fit(FitArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sample(_) => "sample",
            Command::CheckIndependence(_) => "check-independence",
            Command::CheckRegression(_) => "check-regression",
            Command::CheckIdentities(_) => "check-identities",
            Command::CheckOde(_) => "check-ode",
            Command::Fit(_) => "fit",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Kummer shape a (or gamma shape of X under --law gamma, or beta a).
    #[arg(long)]
    pub a: Option<f64>,
    /// Kummer b, also the shape of the gamma partner Y.
    #[arg(long)]
    pub b: Option<f64>,
    /// Rate c shared by X and Y.
    #[arg(long)]
    pub c: Option<f64>,
    /// Regression constant E(U|V); with --beta replaces --a and --b.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Regression constant E(1/U|V); with --alpha replaces --a and --b.
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Number of parallel random streams; part of the sample's identity.
    #[arg(long, default_value_t = kummer_core::verify::DEFAULT_STREAMS)]
    pub streams: usize,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value_t = SampleLaw::Pair)]
    pub law: SampleLaw,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = DEFAULT_STAT_N)]
    pub n: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StatArgs {
    /// Law of X; `gamma` runs the negative control X ~ G(a, c).
    #[arg(long, value_enum, default_value_t = XLawArg::Kummer)]
    pub law: XLawArg,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = DEFAULT_STAT_N)]
    pub n: usize,
    /// Rank bins per axis (independence, default 10) or quantile bins of V
    /// (regression, default 50).
    #[arg(long)]
    pub bins: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Points of the s grid on [-5, -0.1].
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub bins: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Parameters that generate the sample and serve as the truth.
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = DEFAULT_FIT_N)]
    pub n: usize,
    /// CSV with `u` and `v` columns to fit instead of a generated sample.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleLaw {
    /// X ~ K(a, b, c).
    Kummer,
    /// X ~ G(a, c).
    Gamma,
    /// U ~ Beta(a, b).
    Beta,
    /// X ~ K(a, b, c), Y ~ G(b, c) and their image (U, V).
    Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum XLawArg {
    Kummer,
    Gamma,
}

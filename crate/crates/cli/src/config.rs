use std::path::Path;

use kummer_core::transform::params_from_constants;
use kummer_core::RegressionConstants;
use serde::Serialize;

use crate::args::{CommonArgs, Format, ParamArgs};

/// Everything needed to reproduce a report; embedded in every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub law: Option<String>,
    /// `a` and `b` as used, after any conversion from `alpha`, `beta`.
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub n: Option<usize>,
    pub seed: u64,
    pub streams: usize,
    pub bins: Option<usize>,
    pub out_path: Option<String>,
    pub format: Format,
    pub input_path: Option<String>,
}

impl RunConfig {
    pub fn new(command: &'static str, common: &CommonArgs) -> Self {
        Self {
            command,
            law: None,
            a: None,
            b: None,
            c: None,
            alpha: None,
            beta: None,
            n: None,
            seed: common.seed,
            streams: common.streams,
            bins: None,
            out_path: common.out.as_deref().map(path_string),
            format: common.format,
            input_path: None,
        }
    }
}

pub fn path_string(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent flags; reported with the usage synopsis.
    Usage(String),
    Core(kummer_core::Error),
    Io(String),
}

impl From<kummer_core::Error> for CliError {
    fn from(e: kummer_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn check_common(common: &CommonArgs, n: Option<usize>) -> CliResult<()> {
    if common.streams == 0 {
        return Err(CliError::Usage("--streams must be at least 1".into()));
    }
    if n == Some(0) {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    Ok(())
}

/// `(a, b)` from `--a --b` or from `--alpha --beta`, recorded in `cfg`.
pub fn resolve_ab(p: &ParamArgs, cfg: &mut RunConfig) -> CliResult<(f64, f64)> {
    let (a, b) = match (p.a, p.b, p.alpha, p.beta) {
        (Some(a), Some(b), None, None) => (a, b),
        (None, None, Some(alpha), Some(beta)) => {
            params_from_constants(&RegressionConstants::new(alpha, beta)?)?
        }
        (_, _, Some(_), None) | (_, _, None, Some(_)) => {
            return Err(CliError::Usage("--alpha and --beta must be given together".into()))
        }
        (Some(_), _, Some(_), Some(_)) | (_, Some(_), Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either --a and --b or --alpha and --beta, not both".into(),
            ))
        }
        _ => return Err(CliError::Usage("missing --a and --b (or --alpha and --beta)".into())),
    };
    cfg.a = Some(a);
    cfg.b = Some(b);
    cfg.alpha = p.alpha;
    cfg.beta = p.beta;
    Ok((a, b))
}

pub fn resolve_abc(p: &ParamArgs, cfg: &mut RunConfig) -> CliResult<(f64, f64, f64)> {
    let (a, b) = resolve_ab(p, cfg)?;
    let c = p.c.ok_or_else(|| CliError::Usage("missing --c".into()))?;
    cfg.c = Some(c);
    Ok((a, b, c))
}

pub fn reject_constants(p: &ParamArgs, law: &str) -> CliResult<()> {
    if p.alpha.is_some() || p.beta.is_some() {
        return Err(CliError::Usage(format!(
            "--alpha and --beta describe a Kummer law, not --law {law}"
        )));
    }
    Ok(())
}

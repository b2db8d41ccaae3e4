use serde::Serialize;

use super::stats::{chi2_independence, ks_test, KsResult};
use super::{MonteCarlo, XLaw, CONTROL_LEVEL};
use crate::distributions::{Beta, BetaParams, GammaParams, Kummer, KummerParams};
use crate::error::{domain, Result};
use crate::transform::{kv_output_laws, PairSample};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub x_law: XLaw,
    pub y_law: GammaParams,
    pub n: usize,
    pub k_bins: usize,
    pub chi2_stat: f64,
    pub dof: usize,
    pub p_value: f64,
    pub contingency: Vec<Vec<u64>>,
    /// Law `U` is tested against, when one is claimed.
    pub u_law: Option<BetaParams>,
    pub v_law: Option<KummerParams>,
    pub ks_u: Option<KsResult>,
    pub ks_v: Option<KsResult>,
    pub level: f64,
    /// `true` when the pair is expected to be independent (Kummer `X`),
    /// `false` for the negative control.
    pub expect_independent: bool,
    /// Positive runs pass when every p-value exceeds `level`; the negative
    /// control passes when the chi-square p-value is below 1e-3.
    pub passed: bool,
}

/// Independence and marginal-law tests for `X ~ K(a,b,c)`, `Y ~ G(b,c)`.
pub fn run_forward_property(
    p: &KummerParams,
    n: usize,
    mc: &MonteCarlo,
    k_bins: usize,
) -> Result<IndependenceReport> {
    let y = GammaParams::new(p.b(), p.c())
        .map_err(|_| crate::Error::Domain(format!("the forward property needs b > 0, got {}", p.b())))?;
    run_independence(&XLaw::Kummer(*p), &y, n, mc, k_bins)
}

/// Same pipeline for any `X` law. With a Kummer `X` the marginals of `U` and
/// `V` are also tested against `Beta(a,b)` and `K(a+b,-b,c)`.
pub fn run_independence(
    x_law: &XLaw,
    y_law: &GammaParams,
    n: usize,
    mc: &MonteCarlo,
    k_bins: usize,
) -> Result<IndependenceReport> {
    if k_bins < 2 {
        return domain(format!("need at least 2 rank bins, got {k_bins}"));
    }
    if n < 10 * k_bins * k_bins {
        return domain(format!(
            "n = {n} is too small for a {k_bins}x{k_bins} table (need n >= {})",
            10 * k_bins * k_bins
        ));
    }
    let targets = match x_law {
        XLaw::Kummer(p) => {
            if p.b() != y_law.shape() || p.c() != y_law.rate() {
                return domain("the gamma partner of K(a,b,c) must be G(b,c)");
            }
            Some(kv_output_laws(p)?)
        }
        XLaw::Gamma(_) => None,
    };
    let pairs = mc.sample(x_law, y_law, n)?;
    independence_from_pairs(&pairs, x_law, y_law, k_bins, targets, mc.level)
}

fn independence_from_pairs(
    pairs: &PairSample,
    x_law: &XLaw,
    y_law: &GammaParams,
    k_bins: usize,
    targets: Option<(BetaParams, KummerParams)>,
    level: f64,
) -> Result<IndependenceReport> {
    let chi = chi2_independence(&pairs.u, &pairs.v, k_bins)?;
    let (ks_u, ks_v) = match targets {
        Some((bu, kv)) => (
            Some(ks_test(&Beta::new(bu), &pairs.u)?),
            Some(ks_test(&Kummer::new(kv)?, &pairs.v)?),
        ),
        None => (None, None),
    };
    let expect_independent = targets.is_some();
    let passed = if expect_independent {
        chi.p_value > level
            && ks_u.is_some_and(|k| k.p_value > level)
            && ks_v.is_some_and(|k| k.p_value > level)
    } else {
        chi.p_value < CONTROL_LEVEL
    };
    Ok(IndependenceReport {
        x_law: *x_law,
        y_law: *y_law,
        n: pairs.len(),
        k_bins,
        chi2_stat: chi.stat,
        dof: chi.dof,
        p_value: chi.p_value,
        contingency: chi.table,
        u_law: targets.map(|t| t.0),
        v_law: targets.map(|t| t.1),
        ks_u,
        ks_v,
        level,
        expect_independent,
        passed,
    })
}

use serde::Serialize;

use super::identities::tight;
use super::stats::{ks_test, mean_covariance, KsResult};
use crate::distributions::{Beta, BetaParams, Kummer, KummerParams};
use crate::error::{domain, Error, Result};
use crate::transform::{params_from_constants, params_from_constants_unshifted, PairSample, RegressionConstants};

pub const MIN_FIT_SAMPLE: usize = 10_000;
const LN_C_RANGE: (f64, f64) = (-13.815510557964274, 13.815510557964274); // ln 1e-6, ln 1e6

/// One fitted parameter with its delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamEstimate {
    pub value: f64,
    pub se: f64,
    pub truth: Option<f64>,
    /// `(value - truth) / se`.
    pub z: Option<f64>,
}

impl ParamEstimate {
    fn new(value: f64, se: f64) -> Self {
        Self {
            value,
            se,
            truth: None,
            z: None,
        }
    }

    fn set_truth(&mut self, truth: f64) {
        self.truth = Some(truth);
        self.z = Some((self.value - truth) / self.se);
    }
}

/// The two candidate maps from `(α, β)` to `(a, b)`: denominators `αβ - 1`
/// (the inverse of `a/(a+b)`, `(a+b-1)/(a-1)`) and `αβ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapResolution {
    pub shifted_a: f64,
    pub shifted_b: f64,
    pub unshifted_a: f64,
    pub unshifted_b: f64,
    pub unshifted_a_se: f64,
    pub unshifted_b_se: f64,
    /// Largest `|unshifted - truth| / se` over `a` and `b`; `None` until a
    /// truth is supplied.
    pub unshifted_miss_in_se: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub n: usize,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub mean_v: f64,
    /// Covariance of `(mean u, mean 1/u, mean v)`.
    pub moment_covariance: Vec<Vec<f64>>,
    pub a: ParamEstimate,
    pub b: ParamEstimate,
    pub c: ParamEstimate,
    pub ks_u: KsResult,
    pub ks_v: KsResult,
    pub map_resolution: MapResolution,
    /// With a truth supplied: every `|z| <= 4`.
    pub within_4_se: Option<bool>,
}

impl FitReport {
    /// Records the true parameters and the distance of each estimate from them.
    pub fn against(mut self, truth: &KummerParams) -> Self {
        self.a.set_truth(truth.a());
        self.b.set_truth(truth.b());
        self.c.set_truth(truth.c());
        let m = &mut self.map_resolution;
        m.unshifted_miss_in_se = Some(
            ((m.unshifted_a - truth.a()).abs() / m.unshifted_a_se)
                .max((m.unshifted_b - truth.b()).abs() / m.unshifted_b_se),
        );
        self.within_4_se = Some(
            [self.a, self.b, self.c]
                .iter()
                .all(|p| p.z.is_some_and(|z| z.abs() <= 4.0)),
        );
        self
    }
}

pub fn fit_from_pairs(pairs: &PairSample) -> Result<FitReport> {
    fit_from_sample(&pairs.u, &pairs.v)
}

/// Recovers `(a, b, c)` from the `(u, v)` columns alone.
///
/// `α̂ = mean u`, `β̂ = mean 1/u`, `(â, b̂)` from the regression constants,
/// and `ĉ` solves `E V = mean v` for `V ~ K(â+b̂, -b̂, c)` by bisection in
/// `ln c` over `[1e-6, 1e6]`. Standard errors propagate the covariance of
/// the three sample means through a finite-difference Jacobian.
pub fn fit_from_sample(u: &[f64], v: &[f64]) -> Result<FitReport> {
    let n = u.len();
    if v.len() != n {
        return domain(format!("u and v lengths differ: {n} vs {}", v.len()));
    }
    if n < MIN_FIT_SAMPLE {
        return domain(format!("fit needs at least {MIN_FIT_SAMPLE} points, got {n}"));
    }
    if let Some(&x) = u.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return domain(format!("u values must lie in (0, 1), got {x}"));
    }
    if let Some(&x) = v.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        return domain(format!("v values must be positive and finite, got {x}"));
    }
    let inv_u: Vec<f64> = u.iter().map(|x| 1.0 / x).collect();
    let cov = mean_covariance(&[u, &inv_u, v]);
    let nf = n as f64;
    let m = [
        u.iter().sum::<f64>() / nf,
        inv_u.iter().sum::<f64>() / nf,
        v.iter().sum::<f64>() / nf,
    ];
    let theta = estimate(m)?;

    // central-difference Jacobian of (a, b, c) in the three means
    let mut jac = [[0.0; 3]; 3];
    for k in 0..3 {
        let h = 1e-6 * m[k].abs();
        let (mut up, mut dn) = (m, m);
        up[k] += h;
        dn[k] -= h;
        let (tu, td) = (estimate(up)?, estimate(dn)?);
        for i in 0..3 {
            jac[i][k] = (tu[i] - td[i]) / (2.0 * h);
        }
    }
    let se = |jrow: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..jrow.len() {
            for j in 0..jrow.len() {
                s += jrow[i] * cov[i][j] * jrow[j];
            }
        }
        s.sqrt()
    };

    let rc = RegressionConstants::new(m[0], m[1])?;
    let (ua, ub) = params_from_constants_unshifted(&rc);
    let mut ujac = [[0.0; 2]; 2];
    for k in 0..2 {
        let h = 1e-6 * m[k].abs();
        let (mut up, mut dn) = (m, m);
        up[k] += h;
        dn[k] -= h;
        let pu = params_from_constants_unshifted(&RegressionConstants::new(up[0], up[1])?);
        let pd = params_from_constants_unshifted(&RegressionConstants::new(dn[0], dn[1])?);
        ujac[0][k] = (pu.0 - pd.0) / (2.0 * h);
        ujac[1][k] = (pu.1 - pd.1) / (2.0 * h);
    }

    let (a, b, c) = (theta[0], theta[1], theta[2]);
    let ks_u = ks_test(&Beta::new(BetaParams::new(a, b)?), u)?;
    let ks_v = ks_test(&Kummer::new(KummerParams::new(a + b, -b, c)?)?, v)?;
    Ok(FitReport {
        n,
        alpha_hat: m[0],
        beta_hat: m[1],
        mean_v: m[2],
        moment_covariance: cov.clone(),
        a: ParamEstimate::new(a, se(&jac[0])),
        b: ParamEstimate::new(b, se(&jac[1])),
        c: ParamEstimate::new(c, se(&jac[2])),
        ks_u,
        ks_v,
        map_resolution: MapResolution {
            shifted_a: a,
            shifted_b: b,
            unshifted_a: ua,
            unshifted_b: ub,
            unshifted_a_se: se(&ujac[0]),
            unshifted_b_se: se(&ujac[1]),
            unshifted_miss_in_se: None,
        },
        within_4_se: None,
    })
}

/// `(a, b, c)` from `(mean u, mean 1/u, mean v)`.
fn estimate(m: [f64; 3]) -> Result<[f64; 3]> {
    let rc = RegressionConstants::new(m[0], m[1])?;
    let (a, b) = params_from_constants(&rc)?;
    let c = solve_rate(a, b, m[2])?;
    Ok([a, b, c])
}

/// Rate `c` with `E V = target` for `V ~ K(a+b, -b, c)`; `E V` decreases in `c`.
fn solve_rate(a: f64, b: f64, target: f64) -> Result<f64> {
    let mean_v = |ln_c: f64| -> Result<f64> {
        let p = KummerParams::new(a + b, -b, ln_c.exp())?;
        Kummer::with_config(p, tight())?.mean()
    };
    let (mut lo, mut hi) = LN_C_RANGE;
    let (at_lo, at_hi) = (mean_v(lo)?, mean_v(hi)?);
    if !(target < at_lo && target > at_hi) {
        return Err(Error::RootBracket(format!(
            "mean v = {target} is outside [{at_hi}, {at_lo}], the range of E V for c in [1e-6, 1e6]"
        )));
    }
    while hi - lo > 1e-14 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mean_v(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_inverts_the_mean() {
        let p = KummerParams::new(3.0, -1.0, 0.7).unwrap();
        let mean = Kummer::with_config(p, tight()).unwrap().mean().unwrap();
        let c = solve_rate(2.0, 1.0, mean).unwrap();
        assert!((c - 0.7).abs() < 1e-10, "{c}");
        assert!(matches!(solve_rate(2.0, 1.0, 1e12), Err(Error::RootBracket(_))));
    }

    #[test]
    fn degenerate_u_is_a_domain_error() {
        let u = vec![0.5; MIN_FIT_SAMPLE];
        let v = vec![1.0; MIN_FIT_SAMPLE];
        assert!(matches!(fit_from_sample(&u, &v), Err(Error::Domain(_))));
        assert!(fit_from_sample(&u[..10], &v[..10]).is_err());
    }
}

use serde::Serialize;

use super::identities::{fd_step, tight};
use super::residual::{require_negative_grid, EquationResiduals, ResidualReport, ResidualRow};
use crate::distributions::{Gamma, GammaParams, Kummer, KummerParams};
use crate::error::{domain, Result};
use crate::specfun::{kummer_m, kummer_m_regularized, ln_tricomi_u_with};
use crate::transform::{params_from_constants, RegressionConstants};

pub const GAMMA_ODE_TOL: f64 = 1e-10;
pub const FD_ODE_TOL: f64 = 1e-5;
pub const FD_ODE_BOUNDARY_TOL: f64 = 1e-4;

/// `M M'' = (1 + 1/p) M'²` for `M(s) = (1 - s/c)^{-p}`, together with
/// `1/(1-α) - 1/(β-1) = 1 + 1/p` where `p` is the `b` recovered from `rc`.
pub fn check_gamma_ode(
    g: &GammaParams,
    s_grid: &[f64],
    rc: &RegressionConstants,
) -> Result<ResidualReport> {
    require_negative_grid(s_grid)?;
    let (_, p) = params_from_constants(rc)?;
    if (g.shape() - p).abs() > 1e-12 * p {
        return domain(format!(
            "gamma shape {} does not match p = {p} recovered from the regression constants",
            g.shape()
        ));
    }
    let law = Gamma::new(*g);
    let k = 1.0 + 1.0 / p;
    let mut rows = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let m = law.laplace(s)?;
        let (m1, m2) = law.laplace_derivatives(s)?;
        rows.push(ResidualRow::relative(s, m * m2, k * m1 * m1));
    }
    let (ap, bp) = rc.proof_coefficients();
    let gap = vec![ResidualRow::relative(0.0, ap - bp, k)];
    Ok(ResidualReport::new(
        format!("G({}, {})", g.shape(), g.rate()),
        s_grid.to_vec(),
        vec![
            EquationResiduals::new("gamma_ode", Some(GAMMA_ODE_TOL), rows),
            EquationResiduals::new("coefficient_gap", Some(1e-12), gap),
        ],
    ))
}

/// Second-order ODE of the Kummer Laplace transform `L(s) = E e^{sX}`,
/// `X ~ K(a, p, c)`:
///
/// ```text
/// (c-s) L'' + (p-1+c-s) L' - a L = 0
/// ```
///
/// It follows from `t N'' + (1-p-t) N' - a N = 0` for `N(t) = U(a, 1-p, t)`
/// with `t = c - s`, since `L' = -N'`. Derivatives are central differences
/// at `s < 0` and one-sided second-order stencils at `s = 0`. The variant
/// with `1-p+c-s` as middle coefficient is reported without a gate; it
/// differs from the form above unless `p = 1`.
pub fn check_kummer_ode(p: &KummerParams, s_grid: &[f64]) -> Result<ResidualReport> {
    if s_grid.is_empty() {
        return domain("the s grid is empty");
    }
    if let Some(&s) = s_grid.iter().find(|&&s| !(s <= 0.0) || !s.is_finite()) {
        return domain(format!("the Kummer Laplace transform needs s <= 0, got {s}"));
    }
    let law = Kummer::with_config(*p, tight())?;
    let (a, b, c) = (p.a(), p.b(), p.c());
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    let mut printed = Vec::new();
    for &s in s_grid {
        let h = fd_step(s);
        let l0 = law.laplace(s)?;
        let (d1, d2) = if s + h <= 0.0 {
            let (lp, lm) = (law.laplace(s + h)?, law.laplace(s - h)?);
            ((lp - lm) / (2.0 * h), (lp - 2.0 * l0 + lm) / (h * h))
        } else {
            let (l1, l2, l3) = (law.laplace(s - h)?, law.laplace(s - 2.0 * h)?, law.laplace(s - 3.0 * h)?);
            (
                (3.0 * l0 - 4.0 * l1 + l2) / (2.0 * h),
                (2.0 * l0 - 5.0 * l1 + 4.0 * l2 - l3) / (h * h),
            )
        };
        let t = c - s;
        let row = ResidualRow::scaled(s, t * d2 + (b - 1.0 + t) * d1, a * l0, l0.abs());
        if s + h <= 0.0 {
            interior.push(row);
        } else {
            boundary.push(row);
        }
        printed.push(ResidualRow::scaled(s, t * d2 + (1.0 - b + t) * d1, a * l0, l0.abs()));
    }
    let mut equations = Vec::new();
    if !interior.is_empty() {
        equations.push(EquationResiduals::new("kummer_ode", Some(FD_ODE_TOL), interior));
    }
    if !boundary.is_empty() {
        equations.push(EquationResiduals::new(
            "kummer_ode_boundary",
            Some(FD_ODE_BOUNDARY_TOL),
            boundary,
        ));
    }
    equations.push(EquationResiduals::new("kummer_ode_printed_sign", None, printed));
    Ok(ResidualReport::new(format!("K({a}, {b}, {c})"), s_grid.to_vec(), equations))
}

/// Solution branch of `t w'' + (b - t) w' - a w = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConfluentBranch {
    /// `U(a, b, t)`, bounded as `t -> ∞`.
    Tricomi,
    /// `M(a, b, t)`, or `M(a, b, t)/Γ(b)` when `b` is a nonpositive integer.
    Kummer,
}

fn confluent_value(branch: ConfluentBranch, a: f64, b: f64, t: f64) -> Result<f64> {
    match branch {
        ConfluentBranch::Tricomi => Ok(ln_tricomi_u_with(a, b, t, &tight())?.exp()),
        ConfluentBranch::Kummer if b <= 0.0 && (b - b.round()).abs() < 1e-12 => {
            kummer_m_regularized(a, b, t)
        }
        ConfluentBranch::Kummer => kummer_m(a, b, t),
    }
}

/// Residual `|t N'' + (b-t) N' - a N| / (|N| (1+t))` of the confluent
/// hypergeometric ODE with central-difference derivatives.
pub fn check_confluent_ode(
    branch: ConfluentBranch,
    a: f64,
    b: f64,
    t_grid: &[f64],
) -> Result<EquationResiduals> {
    if let Some(&t) = t_grid.iter().find(|&&t| !(t > 0.0) || !t.is_finite()) {
        return domain(format!("confluent ODE grid needs t > 0, got {t}"));
    }
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let h = fd_step(t).min(0.5 * t);
        let n0 = confluent_value(branch, a, b, t)?;
        let np = confluent_value(branch, a, b, t + h)?;
        let nm = confluent_value(branch, a, b, t - h)?;
        let d1 = (np - nm) / (2.0 * h);
        let d2 = (np - 2.0 * n0 + nm) / (h * h);
        rows.push(ResidualRow::scaled(
            t,
            t * d2 + (b - t) * d1,
            a * n0,
            n0.abs() * (1.0 + t),
        ));
    }
    let name = match branch {
        ConfluentBranch::Tricomi => format!("tricomi_u({a}, {b}, t)"),
        ConfluentBranch::Kummer => format!("kummer_m({a}, {b}, t)"),
    };
    Ok(EquationResiduals::new(name, Some(FD_ODE_TOL), rows))
}

/// Growth of the two solution branches over a grid of `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub a: f64,
    pub b: f64,
    pub t: Vec<f64>,
    /// `M(a, b, t) e^{-t}` (regularized when `b` is a nonpositive integer).
    pub m_scaled: Vec<f64>,
    pub u: Vec<f64>,
    pub m_scaled_increasing: bool,
    pub u_decreasing: bool,
    /// `d ln(M e^{-t}) / d ln t` between the last two grid points, next to
    /// the exponent `a - b` of the standard large-`t` asymptotics.
    pub end_log_slope: f64,
    pub asymptotic_exponent: f64,
    pub passed: bool,
}

pub fn check_growth_dichotomy(a: f64, b: f64, t_grid: &[f64]) -> Result<GrowthReport> {
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| !(w[0] < w[1])) || !(t_grid[0] > 0.0) {
        return domain("growth grid must be positive, increasing and have at least 2 points");
    }
    let mut m_scaled = Vec::with_capacity(t_grid.len());
    let mut u = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        m_scaled.push(confluent_value(ConfluentBranch::Kummer, a, b, t)? * (-t).exp());
        u.push(confluent_value(ConfluentBranch::Tricomi, a, b, t)?);
    }
    let m_scaled_increasing = m_scaled.windows(2).all(|w| w[1] > w[0]);
    let u_decreasing = u.windows(2).all(|w| w[1] < w[0]);
    let k = t_grid.len();
    let end_log_slope = (m_scaled[k - 1] / m_scaled[k - 2]).ln() / (t_grid[k - 1] / t_grid[k - 2]).ln();
    Ok(GrowthReport {
        a,
        b,
        t: t_grid.to_vec(),
        m_scaled,
        u,
        m_scaled_increasing,
        u_decreasing,
        end_log_slope,
        asymptotic_exponent: a - b,
        passed: m_scaled_increasing && u_decreasing,
    })
}

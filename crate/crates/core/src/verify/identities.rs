use super::residual::{require_negative_grid, EquationResiduals, ResidualReport, ResidualRow};
use crate::distributions::{Gamma, GammaParams, Kummer, KummerParams, Law};
use crate::error::{domain, Error, Result};
use crate::specfun::{integrate_halfline_scaled, QuadratureConfig};
use crate::transform::constants_from_params;

/// Gate for identities whose sides are all quadratures.
pub const QUADRATURE_TOL: f64 = 1e-7;
/// Gate for identities involving a finite-difference derivative.
pub const DERIVATIVE_TOL: f64 = 1e-6;
/// Gate for the conditional-expectation identities with double integrals.
pub const DOUBLE_INTEGRAL_TOL: f64 = 1e-8;

/// Tolerances tight enough that finite differences of quadratures stay
/// far below the gates.
pub(crate) fn tight() -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_refinements: 30,
    }
}

pub(crate) fn fd_step(s: f64) -> f64 {
    1e-4 * s.abs().max(1.0)
}

fn check_forward_params(p: &KummerParams) -> Result<()> {
    if !(p.a() > 1.0) {
        return domain(format!("a = {} <= 1 makes E X^-1 infinite", p.a()));
    }
    if !(p.b() > 0.0) {
        return domain(format!("the gamma partner G(b, c) needs b > 0, got {}", p.b()));
    }
    Ok(())
}

/// `E exp(ln_g(X))` for `X ~ K(a, b, c)` by quadrature. Working with
/// `ln g` keeps weights like `1/x` finite at subnormal `x`.
fn expect(law: &Kummer, s: f64, ln_g: impl Fn(f64) -> f64, cfg: &QuadratureConfig) -> Result<f64> {
    let p = law.params();
    let scale = p.a().max(1.0) / (p.c() - s);
    Ok(integrate_halfline_scaled(|x| (ln_g(x) + law.ln_pdf(x)).exp(), scale, cfg)?.value)
}

/// `E exp(ln_h(X, Y))` over the product density of `K(a,b,c)` and `G(b,c)`
/// by nested quadrature. Inner integrals only need accuracy relative to
/// the whole expectation, so a coarse pass sets their absolute tolerance.
fn expect2(
    fx: &Kummer,
    gy: &Gamma,
    s: f64,
    ln_h: impl Fn(f64, f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let coarse = QuadratureConfig {
        abs_tol: 1e-20,
        rel_tol: 1e-6,
        max_refinements: cfg.max_refinements,
    };
    let rough = nested(fx, gy, s, &ln_h, &coarse, &coarse)?;
    let inner = QuadratureConfig {
        abs_tol: cfg.abs_tol.max(1e-3 * cfg.rel_tol * rough.abs()),
        ..*cfg
    };
    nested(fx, gy, s, &ln_h, cfg, &inner)
}

fn nested(
    fx: &Kummer,
    gy: &Gamma,
    s: f64,
    ln_h: &impl Fn(f64, f64) -> f64,
    outer_cfg: &QuadratureConfig,
    inner_cfg: &QuadratureConfig,
) -> Result<f64> {
    let p = fx.params();
    let g = gy.params();
    let xscale = p.a().max(1.0) / (p.c() - s);
    let yscale = g.shape().max(1.0) / (g.rate() - s);
    let mut failure: Option<Error> = None;
    let outer = integrate_halfline_scaled(
        |x| {
            if failure.is_some() {
                return 0.0;
            }
            let inner = integrate_halfline_scaled(
                |y| (ln_h(x, y) + gy.ln_pdf(y) + fx.ln_pdf(x)).exp(),
                yscale,
                inner_cfg,
            );
            match inner {
                Ok(r) => r.value,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        xscale,
        outer_cfg,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(outer?.value)
}

/// The conditional-expectation identities written as transforms:
///
/// ```text
/// E e^{s(1+V)}/(1+X) = (1-α) E e^{s(1+V)} + α E e^{s(1+V)}/(1+V)
/// E e^{s(1+V)}/X     = (β-1) E e^{s(1+V)} + β E e^{s(1+V)}/V
/// ```
///
/// every expectation a double integral over the product density. The
/// second identity is also checked at `s = 0`.
pub fn check_regression_identities(p: &KummerParams, s_grid: &[f64]) -> Result<ResidualReport> {
    check_forward_params(p)?;
    require_negative_grid(s_grid)?;
    let rc = constants_from_params(p.a(), p.b())?;
    let (alpha, beta) = (rc.alpha(), rc.beta());
    let cfg = QuadratureConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-12,
        max_refinements: 30,
    };
    let fx = Kummer::with_config(*p, cfg)?;
    let gy = Gamma::new(GammaParams::new(p.b(), p.c())?);

    let sides = |s: f64| -> Result<[f64; 5]> {
        let w = |x: f64, y: f64| s * (1.0 + x + y);
        Ok([
            expect2(&fx, &gy, s, |x, y| w(x, y) - x.ln_1p(), &cfg)?,
            expect2(&fx, &gy, s, w, &cfg)?,
            expect2(&fx, &gy, s, |x, y| w(x, y) - (x + y).ln_1p(), &cfg)?,
            expect2(&fx, &gy, s, |x, y| w(x, y) - x.ln(), &cfg)?,
            expect2(&fx, &gy, s, |x, y| w(x, y) - (x + y).ln(), &cfg)?,
        ])
    };
    let mut eq1 = Vec::with_capacity(s_grid.len());
    let mut eq2 = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let [inv_1x, plain, inv_1v, inv_x, inv_v] = sides(s)?;
        eq1.push(ResidualRow::relative(s, inv_1x, (1.0 - alpha) * plain + alpha * inv_1v));
        eq2.push(ResidualRow::relative(s, inv_x, (beta - 1.0) * plain + beta * inv_v));
    }
    let [_, _, _, inv_x, inv_v] = sides(0.0)?;
    let limit = vec![ResidualRow::relative(0.0, inv_x, beta - 1.0 + beta * inv_v)];
    Ok(ResidualReport::new(
        format!("K({}, {}, {})", p.a(), p.b(), p.c()),
        s_grid.to_vec(),
        vec![
            EquationResiduals::new("eq1", Some(DOUBLE_INTEGRAL_TOL), eq1),
            EquationResiduals::new("eq2", Some(DOUBLE_INTEGRAL_TOL), eq2),
            EquationResiduals::new("eq2_at_zero", Some(DOUBLE_INTEGRAL_TOL), limit),
        ],
    ))
}

/// Laplace-transform identities with
/// `K(s) = E e^{s(1+X)}/(1+X)`, `G(s) = E e^{sX}/X`, `L(s) = E e^{sX}` and
/// `M(s) = (1 - s/c)^{-b}`:
///
/// ```text
/// EQ1:  e^{-s} K M' = (1-α) (L M)'
/// EQ2:  G M'        = (β-1) ((L M)' + L M)
/// EQ:   a' e^{-s} K M' = b' G M' - L M,    a' = 1/(1-α), b' = 1/(β-1)
///       G' = L,    e^{-s} K' = L
/// ```
///
/// `L'` is a quadrature of `x e^{sx}`; `G'` and `K'` are central differences.
pub fn check_transform_identities(p: &KummerParams, s_grid: &[f64]) -> Result<ResidualReport> {
    check_forward_params(p)?;
    require_negative_grid(s_grid)?;
    let rc = constants_from_params(p.a(), p.b())?;
    let (alpha, beta) = (rc.alpha(), rc.beta());
    let (ap, bp) = rc.proof_coefficients();
    let cfg = tight();
    let law = Kummer::with_config(*p, cfg)?;
    let gamma = Gamma::new(GammaParams::new(p.b(), p.c())?);

    let big_k = |s: f64| -> Result<f64> {
        Ok(s.exp() * expect(&law, s, |x| s * x - x.ln_1p(), &cfg)?)
    };
    let big_g = |s: f64| expect(&law, s, |x| s * x - x.ln(), &cfg);
    let big_l = |s: f64| expect(&law, s, |x| s * x, &cfg);
    let big_l1 = |s: f64| expect(&law, s, |x| s * x + x.ln(), &cfg);

    let mut rows: [Vec<ResidualRow>; 5] = Default::default();
    for &s in s_grid {
        let (k, g, l, l1) = (big_k(s)?, big_g(s)?, big_l(s)?, big_l1(s)?);
        let m = gamma.laplace(s)?;
        let (m1, _) = gamma.laplace_derivatives(s)?;
        let lm1 = l1 * m + l * m1;
        let eks = (-s).exp() * k;
        rows[0].push(ResidualRow::relative(s, eks * m1, (1.0 - alpha) * lm1));
        rows[1].push(ResidualRow::relative(s, g * m1, (beta - 1.0) * (lm1 + l * m)));
        rows[2].push(ResidualRow::relative(s, ap * eks * m1, bp * g * m1 - l * m));
        let h = fd_step(s);
        let dg = (big_g(s + h)? - big_g(s - h)?) / (2.0 * h);
        rows[3].push(ResidualRow::relative(s, dg, l));
        let dk = (big_k(s + h)? - big_k(s - h)?) / (2.0 * h);
        rows[4].push(ResidualRow::relative(s, (-s).exp() * dk, l));
    }
    let [eq1, eq2, eq, g_prime, k_prime] = rows;
    Ok(ResidualReport::new(
        format!("K({}, {}, {})", p.a(), p.b(), p.c()),
        s_grid.to_vec(),
        vec![
            EquationResiduals::new("EQ1", Some(QUADRATURE_TOL), eq1),
            EquationResiduals::new("EQ2", Some(QUADRATURE_TOL), eq2),
            EquationResiduals::new("EQ", Some(QUADRATURE_TOL), eq),
            EquationResiduals::new("G'=L", Some(DERIVATIVE_TOL), g_prime),
            EquationResiduals::new("exp(-s)K'=L", Some(DERIVATIVE_TOL), k_prime),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::linspace;

    #[test]
    fn transform_identities_hold() {
        let p = KummerParams::new(2.0, 1.0, 1.0).unwrap();
        let r = check_transform_identities(&p, &linspace(-5.0, -0.1, 5)).unwrap();
        for e in &r.equations {
            assert!(e.passed, "{}: {}", e.name, e.max_residual);
        }
    }

    #[test]
    fn wrong_constants_are_detected() {
        // the identities are sharp: perturbing α breaks EQ1 well above the gate
        let p = KummerParams::new(2.0, 1.0, 1.0).unwrap();
        let law = Kummer::with_config(p, tight()).unwrap();
        let s: f64 = -1.0;
        let k = s.exp() * expect(&law, s, |x| s * x - x.ln_1p(), &tight()).unwrap();
        let l = expect(&law, s, |x| s * x, &tight()).unwrap();
        let l1 = expect(&law, s, |x| s * x + x.ln(), &tight()).unwrap();
        let g = Gamma::new(GammaParams::new(1.0, 1.0).unwrap());
        let (m, (m1, _)) = (g.laplace(s).unwrap(), g.laplace_derivatives(s).unwrap());
        let lhs = (-s).exp() * k * m1;
        let good = ResidualRow::relative(s, lhs, (1.0 / 3.0) * (l1 * m + l * m1));
        let bad = ResidualRow::relative(s, lhs, (1.0 / 3.0 + 1e-3) * (l1 * m + l * m1));
        assert!(good.residual < 1e-10);
        assert!(bad.residual > 1e-4);
    }

    #[test]
    fn preconditions() {
        let p = KummerParams::new(1.0, 1.0, 1.0).unwrap();
        assert!(check_transform_identities(&p, &[-1.0]).is_err());
        let p = KummerParams::new(2.0, 1.0, 1.0).unwrap();
        assert!(check_transform_identities(&p, &[0.0]).is_err());
        assert!(check_regression_identities(&p, &[]).is_err());
    }
}

//! The map `(X, Y) -> (U, V)`, its inverse, and the algebra between the
//! regression constants `(α, β)` and the Kummer/gamma parameters.

use serde::Serialize;

use crate::distributions::{BetaParams, KummerParams, RngStream};
use crate::error::{domain, Result};

/// Constants of the regressions `E(U|V) = α` and `E(1/U|V) = β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegressionConstants {
    alpha: f64,
    beta: f64,
}

impl RegressionConstants {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return domain(format!("alpha must lie in (0, 1), got {alpha}"));
        }
        if !(beta > 1.0) || !beta.is_finite() {
            return domain(format!("beta must be a finite number > 1, got {beta}"));
        }
        if !(alpha * beta > 1.0) {
            return domain(format!(
                "alpha * beta must exceed 1, got {alpha} * {beta} = {}",
                alpha * beta
            ));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(1-α)^{-1}` and `(β-1)^{-1}`, the coefficients of the combined
    /// Laplace-transform identity.
    pub fn proof_coefficients(&self) -> (f64, f64) {
        (1.0 / (1.0 - self.alpha), 1.0 / (self.beta - 1.0))
    }
}

/// `u = (1 + 1/(x+y)) / (1 + 1/x)`, `v = x + y`.
pub fn kv_forward(x: f64, y: f64) -> Result<(f64, f64)> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return domain(format!("kv_forward needs finite x, y > 0, got x={x}, y={y}"));
    }
    let v = x + y;
    // x(1+v) / ((1+x) v), grouped so neither tiny nor huge x loses precision
    let u = (x / (1.0 + x)) * (1.0 + 1.0 / v);
    Ok((u, v))
}

/// Inverse of [`kv_forward`]: `x = uv / (1 + (1-u)v)`, `y = v - x`.
pub fn kv_inverse(u: f64, v: f64) -> Result<(f64, f64)> {
    if !(u > 0.0 && u < 1.0) {
        return domain(format!("kv_inverse needs 0 < u < 1, got {u}"));
    }
    if !(v > 0.0) || !v.is_finite() {
        return domain(format!("kv_inverse needs finite v > 0, got {v}"));
    }
    let w = 1.0 - u;
    let den = 1.0 + w * v;
    let x = u * v / den;
    // v - x without cancellation
    let y = v * w * (1.0 + v) / den;
    Ok((x, y))
}

/// `α = E U = a/(a+b)` and `β = E U^{-1} = (a+b-1)/(a-1)` for `U ~ Beta(a, b)`.
pub fn constants_from_params(a: f64, b: f64) -> Result<RegressionConstants> {
    if !(a > 1.0) || !a.is_finite() {
        return domain(format!("a must exceed 1 so that E X^-1 < inf, got {a}"));
    }
    if !(b > 0.0) || !b.is_finite() {
        return domain(format!("b must be positive, got {b}"));
    }
    RegressionConstants::new(a / (a + b), (a + b - 1.0) / (a - 1.0))
}

/// Inverse of [`constants_from_params`]:
/// `a = 1 + (1-α)/(αβ-1)`, `b = (1-α)(β-1)/(αβ-1)`.
pub fn params_from_constants(rc: &RegressionConstants) -> Result<(f64, f64)> {
    let (alpha, beta) = (rc.alpha, rc.beta);
    // αβ - 1 written without the cancellation of αβ against 1
    let den = alpha * (beta - 1.0) - (1.0 - alpha);
    if !(den > 0.0) {
        return domain(format!("alpha * beta must exceed 1, got {}", alpha * beta));
    }
    Ok((1.0 + (1.0 - alpha) / den, (1.0 - alpha) * (beta - 1.0) / den))
}

/// Variant of [`params_from_constants`] with `αβ` in place of `αβ - 1` in
/// the denominators. It is not an inverse of [`constants_from_params`]; the
/// harness evaluates it only to show how far it lands from the truth.
pub fn params_from_constants_unshifted(rc: &RegressionConstants) -> (f64, f64) {
    let (alpha, beta) = (rc.alpha, rc.beta);
    let den = alpha * beta;
    (1.0 + (1.0 - alpha) / den, (1.0 - alpha) * (beta - 1.0) / den)
}

/// Laws of `U` and `V` when `X ~ K(a,b,c)` and `Y ~ G(b,c)`:
/// `U ~ Beta(a, b)` and `V ~ K(a+b, -b, c)`.
pub fn kv_output_laws(p: &KummerParams) -> Result<(BetaParams, KummerParams)> {
    if !(p.b() > 0.0) {
        return domain(format!("the gamma partner G(b, c) needs b > 0, got b={}", p.b()));
    }
    Ok((
        BetaParams::new(p.a(), p.b())?,
        KummerParams::new(p.a() + p.b(), -p.b(), p.c())?,
    ))
}

/// Where a [`PairSample`] came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    /// Human-readable description of the law of `X`.
    pub x_law: String,
    pub y_law: String,
    pub stream: RngStream,
    pub streams: usize,
}

/// Columns `x, y, u, v` with `v = x + y` and `(u, v) = kv_forward(x, y)` row by row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub provenance: Option<Provenance>,
}

impl PairSample {
    pub fn from_xy(x: Vec<f64>, y: Vec<f64>, provenance: Option<Provenance>) -> Result<Self> {
        if x.len() != y.len() {
            return domain(format!("column lengths differ: {} vs {}", x.len(), y.len()));
        }
        let mut u = Vec::with_capacity(x.len());
        let mut v = Vec::with_capacity(x.len());
        for (&xi, &yi) in x.iter().zip(&y) {
            let (ui, vi) = kv_forward(xi, yi)?;
            u.push(ui);
            v.push(vi);
        }
        Ok(Self {
            x,
            y,
            u,
            v,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn forward_examples() {
        let (u, v) = kv_forward(1.0, 1.0).unwrap();
        assert!((u - 0.75).abs() < 1e-15 && v == 2.0);
        let (u, v) = kv_forward(1.0 / 3.0, 2.0 / 3.0).unwrap();
        assert!((u - 0.5).abs() < 1e-15 && (v - 1.0).abs() < 1e-15);
        let (u, _) = kv_forward(1e6, 1.0).unwrap();
        assert!(u < 1.0);
        let (u, _) = kv_forward(1e-300, 1.0).unwrap();
        assert!(u > 0.0);
        assert!(kv_forward(0.0, 1.0).is_err());
        assert!(kv_forward(1.0, -1.0).is_err());
    }

    #[test]
    fn inverse_examples() {
        let (x, y) = kv_inverse(0.75, 2.0).unwrap();
        assert!(rel(x, 1.0) < 1e-15 && rel(y, 1.0) < 1e-15);
        let (x, y) = kv_inverse(0.5, 1.0).unwrap();
        assert!(rel(x, 1.0 / 3.0) < 1e-15 && rel(y, 2.0 / 3.0) < 1e-15);
        // u -> 1: x -> v, y -> 0
        let (x, y) = kv_inverse(1.0 - 1e-12, 3.0).unwrap();
        assert!(rel(x, 3.0) < 1e-11 && y < 1e-10 && y > 0.0);
        assert!(kv_inverse(1.0, 1.0).is_err());
        assert!(kv_inverse(0.5, 0.0).is_err());
    }

    #[test]
    fn constants_examples() {
        let rc = constants_from_params(2.0, 1.0).unwrap();
        assert!(rel(rc.alpha(), 2.0 / 3.0) < 1e-15 && rel(rc.beta(), 2.0) < 1e-15);
        let rc = constants_from_params(3.0, 2.0).unwrap();
        assert!(rel(rc.alpha(), 0.6) < 1e-15 && rel(rc.beta(), 2.0) < 1e-15);
        let rc = constants_from_params(2.0, 1e-9).unwrap();
        assert!(rc.alpha() > 1.0 - 1e-8 && rc.beta() < 1.0 + 1e-8);
        assert!(constants_from_params(1.0, 1.0).is_err());
        assert!(constants_from_params(2.0, 0.0).is_err());
        let (pa, pb) = rc.proof_coefficients();
        assert!(pa > 0.0 && pb > 0.0);
    }

    #[test]
    fn params_examples() {
        let (a, b) = params_from_constants(&RegressionConstants::new(2.0 / 3.0, 2.0).unwrap()).unwrap();
        assert!(rel(a, 2.0) < 1e-14 && rel(b, 1.0) < 1e-14);
        let (a, b) = params_from_constants(&RegressionConstants::new(0.6, 2.0).unwrap()).unwrap();
        assert!(rel(a, 3.0) < 1e-14 && rel(b, 2.0) < 1e-14);
        let (a, b) = params_from_constants_unshifted(&RegressionConstants::new(2.0 / 3.0, 2.0).unwrap());
        assert!(rel(a, 1.25) < 1e-14 && rel(b, 0.25) < 1e-14);
    }

    #[test]
    fn constants_validation() {
        assert!(RegressionConstants::new(0.0, 2.0).is_err());
        assert!(RegressionConstants::new(1.0, 2.0).is_err());
        assert!(RegressionConstants::new(0.5, 1.0).is_err());
        // α < 1, β > 1 but αβ <= 1
        assert!(RegressionConstants::new(0.5, 1.5).is_err());
        assert!(RegressionConstants::new(0.5, f64::INFINITY).is_err());
    }

    #[test]
    fn output_laws() {
        let (u, v) = kv_output_laws(&KummerParams::new(2.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(u, BetaParams::new(2.0, 1.0).unwrap());
        assert_eq!(v, KummerParams::new(3.0, -1.0, 1.0).unwrap());
        let (u, v) = kv_output_laws(&KummerParams::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(u, BetaParams::new(1.0, 1.0).unwrap());
        assert_eq!(v, KummerParams::new(2.0, -1.0, 1.0).unwrap());
        assert!(kv_output_laws(&KummerParams::new(2.0, -1.0, 1.0).unwrap()).is_err());
        assert!(kv_output_laws(&KummerParams::new(2.0, 0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn pair_sample_invariants() {
        let s = PairSample::from_xy(vec![0.5, 2.0, 10.0], vec![1.0, 0.1, 3.0], None).unwrap();
        for i in 0..s.len() {
            assert_eq!(s.v[i], s.x[i] + s.y[i]);
            assert!(s.u[i] > 0.0 && s.u[i] < 1.0 && s.x[i] < s.v[i]);
        }
        assert!(PairSample::from_xy(vec![1.0], vec![], None).is_err());
    }

    proptest! {
        #[test]
        fn forward_then_inverse(lx in -4.0f64..4.0, ly in -4.0f64..4.0) {
            let (x, y) = (10f64.powf(lx), 10f64.powf(ly));
            let (u, v) = kv_forward(x, y).unwrap();
            prop_assert!(u > 0.0 && u < 1.0);
            let (x2, y2) = kv_inverse(u, v).unwrap();
            // y is carried by 1 - u = y / ((1+x) v) and by v = x + y; rounding
            // either costs eps / (1 - u) or eps v / y relative to y
            let tol = 1e-12 + 4.0 * f64::EPSILON * (1.0 / (1.0 - u) + v / y);
            prop_assert!(rel(x2, x) < tol, "x {} vs {}", x2, x);
            prop_assert!(rel(y2, y) < tol, "y {} vs {}", y2, y);
        }

        #[test]
        fn inverse_then_forward(u in 1e-6f64..0.999_999, lv in -4.0f64..4.0) {
            let v = 10f64.powf(lv);
            let (x, y) = kv_inverse(u, v).unwrap();
            prop_assert!(x > 0.0 && y > 0.0 && x < v);
            let (u2, v2) = kv_forward(x, y).unwrap();
            prop_assert!(rel(u2, u) < 1e-12);
            prop_assert!(rel(v2, v) < 1e-12);
        }

        #[test]
        fn u_increases_with_x(v in 0.01f64..100.0, f1 in 0.001f64..0.999, f2 in 0.001f64..0.999) {
            prop_assume!(f1 < f2);
            let (u1, _) = kv_forward(f1 * v, v - f1 * v).unwrap();
            let (u2, _) = kv_forward(f2 * v, v - f2 * v).unwrap();
            prop_assert!(u1 < u2);
        }

        #[test]
        fn parameter_round_trip(a in 1.0001f64..10.0, b in 0.001f64..10.0) {
            let rc = constants_from_params(a, b).unwrap();
            prop_assert!(rc.alpha() < 1.0 && rc.beta() > 1.0 && rc.alpha() * rc.beta() > 1.0);
            let (a2, b2) = params_from_constants(&rc).unwrap();
            prop_assert!(a2 > 1.0 && b2 > 0.0);
            prop_assert!(rel(a2, a) < 1e-12 && rel(b2, b) < 1e-12, "{} {} -> {} {}", a, b, a2, b2);
        }
    }
}

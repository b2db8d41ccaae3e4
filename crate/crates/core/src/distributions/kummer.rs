use rand::Rng;
use serde::Serialize;

use super::gamma::standard_gamma;
use super::rng::open01;
use super::{check_positive, Law, RngStream};
use crate::error::{domain, Error, Result};
use crate::specfun::{
    integrate_interval, ln_tricomi_u_with, log_gamma, QuadratureConfig,
};

/// Parameters of `K(a, b, c)`, density ∝ `x^{a-1} e^{-cx} (1+x)^{-(a+b)}` on
/// (0, ∞). The law exists for `a, c > 0` and any real `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KummerParams {
    a: f64,
    b: f64,
    c: f64,
}

impl KummerParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        check_positive("Kummer parameter a", a)?;
        check_positive("Kummer parameter c", c)?;
        if !b.is_finite() {
            return domain(format!("Kummer parameter b must be finite, got {b}"));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// `ln ∫_0^∞ x^{a-1} e^{-cx} (1+x)^{-(a+b)} dx = ln Γ(a) + ln U(a, 1-b, c)`.
pub fn kummer_log_norm(p: &KummerParams) -> Result<f64> {
    kummer_log_norm_with(p, &QuadratureConfig::default())
}

pub fn kummer_log_norm_with(p: &KummerParams, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(log_gamma(p.a)? + ln_tricomi_u_with(p.a, 1.0 - p.b, p.c, cfg)?)
}

/// The Kummer law with its normalizer cached.
#[derive(Debug, Clone, Copy)]
pub struct Kummer {
    params: KummerParams,
    ln_norm: f64,
    cfg: QuadratureConfig,
}

impl Kummer {
    pub fn new(params: KummerParams) -> Result<Self> {
        Self::with_config(params, QuadratureConfig::default())
    }

    pub fn with_config(params: KummerParams, cfg: QuadratureConfig) -> Result<Self> {
        let ln_norm = kummer_log_norm_with(&params, &cfg)?;
        Ok(Self {
            params,
            ln_norm,
            cfg,
        })
    }

    pub fn params(&self) -> KummerParams {
        self.params
    }

    pub fn ln_norm(&self) -> f64 {
        self.ln_norm
    }

    /// `E X^k` for real `k > -a`, as a ratio of normalizers:
    /// `x^k` times the `K(a,b,c)` kernel is the `K(a+k, b-k, c)` kernel.
    pub fn moment(&self, k: f64) -> Result<f64> {
        let KummerParams { a, b, c } = self.params;
        if !(a + k > 0.0) {
            return domain(format!("E X^{k} is infinite for K({a}, {b}, {c})"));
        }
        let shifted = KummerParams::new(a + k, b - k, c)?;
        Ok((kummer_log_norm_with(&shifted, &self.cfg)? - self.ln_norm).exp())
    }

    pub fn mean(&self) -> Result<f64> {
        self.moment(1.0)
    }

    /// `L(s) = E e^{sX} = U(a, 1-b, c-s) / U(a, 1-b, c)` for `s <= 0`.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        if !(s <= 0.0) {
            return domain(format!("Kummer Laplace transform needs s <= 0, got {s}"));
        }
        if s == 0.0 {
            return Ok(1.0);
        }
        let KummerParams { a, b, c } = self.params;
        let ln_u0 = self.ln_norm - log_gamma(a)?;
        Ok((ln_tricomi_u_with(a, 1.0 - b, c - s, &self.cfg)? - ln_u0).exp())
    }

    /// Smallest `x` with `cdf(x) >= p`, by bisection on a doubling bracket.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("quantile level must lie in (0, 1), got {p}"));
        }
        let mut hi = 1.0;
        while self.cdf(hi)? < p {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::NonConvergence {
                    what: "Kummer quantile bracket",
                    detail: format!("cdf stays below {p}"),
                });
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    pub fn sampler(&self) -> KummerSampler {
        KummerSampler::new(self)
    }
}

impl Law for Kummer {
    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) || x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let KummerParams { a, b, c } = self.params;
        (a - 1.0) * x.ln() - c * x - (a + b) * x.ln_1p() - self.ln_norm
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Ok(0.0);
        }
        if x.is_infinite() {
            return Ok(1.0);
        }
        let r = integrate_interval(|t| self.pdf(t), 0.0, x, &self.cfg)?;
        Ok(r.value.clamp(0.0, 1.0))
    }

    /// Accumulates the density between consecutive points.
    fn cdf_sorted(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(xs.len());
        let mut prev = 0.0;
        let mut acc = 0.0;
        for &x in xs {
            if x < prev {
                return domain("cdf_sorted needs ascending input");
            }
            if x > prev && x.is_finite() {
                acc += integrate_interval(|t| self.pdf(t), prev, x, &self.cfg)?.value;
                prev = x;
            }
            out.push(if x.is_infinite() { 1.0 } else { acc.clamp(0.0, 1.0) });
        }
        Ok(out)
    }
}

/// Exact rejection sampler for `K(a, b, c)` with a `G(k, λ)` envelope.
///
/// The target kernel over the envelope kernel is
/// `exp(h(x))`, `h(x) = (a-k) ln x - (c-λ) x + m ln(1+x)`, `m = -(a+b)`.
/// With `0 < k <= a` and `0 < λ <= c`, `h` is bounded above when `λ < c` or
/// `a - k + m <= 0`, and its supremum solves a quadratic. `(k, λ)` is picked on
/// a grid to maximize the acceptance rate; the grid contains `(a, c)` (used
/// when `m <= 0`) and `(a, c/2)` (used when `m > 0`).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KummerSampler {
    a: f64,
    c: f64,
    m: f64,
    shape: f64,
    rate: f64,
    sup: f64,
    acceptance: f64,
}

const ENVELOPE_GRID: usize = 20;

impl KummerSampler {
    pub fn new(law: &Kummer) -> Self {
        let KummerParams { a, b, c } = law.params;
        let m = -(a + b);
        let mut best: Option<(f64, f64, f64, f64)> = None;
        for i in 1..=ENVELOPE_GRID {
            let k = if i == ENVELOPE_GRID { a } else { a * i as f64 / ENVELOPE_GRID as f64 };
            let ln_gk = statrs::function::gamma::ln_gamma(k);
            for j in 1..=ENVELOPE_GRID {
                let lambda = if j == ENVELOPE_GRID { c } else { c * j as f64 / ENVELOPE_GRID as f64 };
                let Some(sup) = sup_log_ratio(a - k, c - lambda, m) else {
                    continue;
                };
                let ln_acc = law.ln_norm - (ln_gk - k * lambda.ln()) - sup;
                if best.is_none_or(|(_, _, _, v)| ln_acc > v) {
                    best = Some((k, lambda, sup, ln_acc));
                }
            }
        }
        // (k, λ) = (a, c/2) is always feasible, so the grid is never empty
        let (shape, rate, sup, ln_acc) = best.expect("envelope grid has a feasible point");
        Self {
            a,
            c,
            m,
            shape,
            rate,
            sup,
            acceptance: ln_acc.exp().min(1.0),
        }
    }

    /// Shape and rate of the gamma envelope.
    pub fn envelope(&self) -> (f64, f64) {
        (self.shape, self.rate)
    }

    /// Expected probability that a proposal is accepted.
    pub fn acceptance(&self) -> f64 {
        self.acceptance
    }

    fn log_ratio(&self, x: f64) -> f64 {
        let d = self.a - self.shape;
        let mut h = -(self.c - self.rate) * x + self.m * x.ln_1p();
        if d > 0.0 {
            h += d * x.ln();
        }
        h
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let x = standard_gamma(self.shape, rng) / self.rate;
            if !(x > 0.0) || !x.is_finite() {
                continue;
            }
            if open01(rng).ln() <= self.log_ratio(x) - self.sup {
                return x;
            }
        }
    }

    pub fn sample(&self, n: usize, stream: &RngStream) -> Vec<f64> {
        let mut rng = stream.rng();
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }
}

/// `sup_{x>0} d ln x - r x + m ln(1+x)` for `d, r >= 0`, or `None` when unbounded.
fn sup_log_ratio(d: f64, r: f64, m: f64) -> Option<f64> {
    let h = |x: f64| {
        let mut v = -r * x + m * x.ln_1p();
        if d > 0.0 {
            v += d * x.ln();
        }
        v
    };
    if r == 0.0 && d + m > 0.0 {
        return None;
    }
    let mut best = f64::NEG_INFINITY;
    if d == 0.0 {
        best = 0.0; // h(0+)
    }
    if r == 0.0 && d + m == 0.0 {
        best = best.max(0.0); // h(∞) limit
    }
    // h'(x) x (1+x) = -r x^2 + (d - r + m) x + d
    let (qa, qb, qc) = (-r, d - r + m, d);
    let mut roots = Vec::with_capacity(2);
    if qa == 0.0 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let q = -0.5 * (qb + qb.signum() * disc.sqrt());
            if q != 0.0 {
                roots.push(q / qa);
                roots.push(qc / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    for x in roots {
        if x > 0.0 && x.is_finite() {
            best = best.max(h(x));
        }
    }
    best.is_finite().then_some(best)
}

pub fn sample_kummer(params: &KummerParams, n: usize, stream: &RngStream) -> Result<Vec<f64>> {
    Ok(Kummer::new(*params)?.sampler().sample(n, stream))
}

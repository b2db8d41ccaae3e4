//! Double-exponential (tanh-sinh) quadrature with panel bisection.
//!
//! All integrals are reduced to the unit interval. Half-line integrals use
//! `x = scale * t / (1 - t)`. Nodes are generated as distances from the
//! nearer panel end so that endpoint singularities of the form `x^(g-1)`,
//! `g > 0`, are sampled down to the underflow threshold.
//!
//! A panel is refined by halving the step until two successive levels agree
//! to `max(abs_tol, rel_tol * |I|)`. A panel that has not converged after
//! [`MAX_LEVEL`] halvings is bisected, up to `max_refinements` deep; the
//! halves inherit half the tolerance of their parent.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const MIN_LEVEL: usize = 3;
const MAX_LEVEL: usize = 8;
const TAU_MAX: f64 = 6.5;
const MAX_EVALS: usize = 8_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth for panels that do not converge.
    pub max_refinements: u32,
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_refinements: u32) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return domain(format!(
                "quadrature tolerances must be positive (abs_tol={abs_tol}, rel_tol={rel_tol})"
            ));
        }
        if max_refinements < 1 {
            return domain("max_refinements must be at least 1");
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_refinements,
        })
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_refinements: 30,
        }
    }
}

/// Value of a definite integral with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Abscissa as a fraction of the panel width from the nearer end, and weight
/// on a unit-width panel, for the nodes first introduced at each level.
struct Node {
    dist: f64,
    weight: f64,
}

struct Table {
    center_weight: f64,
    levels: Vec<Vec<Node>>,
}

fn node(tau: f64) -> Node {
    let u = FRAC_PI_2 * tau.sinh();
    let e = (-2.0 * u).exp();
    let dist = e / (1.0 + e);
    // ln cosh u = u + ln(1 + e^{-2u}) - ln 2
    let ln_cosh_u = u + e.ln_1p() - std::f64::consts::LN_2;
    let weight = 0.5 * (FRAC_PI_2.ln() + tau.cosh().ln() - 2.0 * ln_cosh_u).exp();
    Node { dist, weight }
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut levels = Vec::with_capacity(MAX_LEVEL + 1);
        // level 0: tau = 1, 2, ...; level k: odd multiples of 2^-k
        let mut first = Vec::new();
        let mut j = 1.0;
        while j <= TAU_MAX {
            first.push(node(j));
            j += 1.0;
        }
        levels.push(first);
        for level in 1..=MAX_LEVEL {
            let h = 0.5f64.powi(level as i32);
            let mut nodes = Vec::new();
            let mut k = 1u64;
            while k as f64 * h <= TAU_MAX {
                nodes.push(node(k as f64 * h));
                k += 2;
            }
            levels.push(nodes);
        }
        Table {
            center_weight: 0.5 * FRAC_PI_2,
            levels,
        }
    })
}

/// Panel `[lo, hi]` of the unit interval, carrying exact complements so that
/// `1 - t` stays accurate near `t = 1`.
#[derive(Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    clo: f64,
    chi: f64,
}

impl Panel {
    fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn halves(&self) -> (Panel, Panel) {
        let mid = 0.5 * (self.lo + self.hi);
        let cmid = 0.5 * (self.clo + self.chi);
        (
            Panel {
                lo: self.lo,
                hi: mid,
                clo: self.clo,
                chi: cmid,
            },
            Panel {
                lo: mid,
                hi: self.hi,
                clo: cmid,
                chi: self.chi,
            },
        )
    }
}

struct Integrator<'a, G: FnMut(f64, f64) -> f64> {
    g: &'a mut G,
    cfg: QuadratureConfig,
    evals: usize,
}

impl<G: FnMut(f64, f64) -> f64> Integrator<'_, G> {
    fn eval(&mut self, t: f64, omt: f64) -> Result<f64> {
        self.evals += 1;
        let v = (self.g)(t, omt);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand(t))
        }
    }

    /// Sum of weighted integrand values at the pair of nodes at `dist` from
    /// both panel ends.
    fn pair(&mut self, p: &Panel, n: &Node) -> Result<f64> {
        if n.dist == 0.0 || n.weight == 0.0 {
            return Ok(0.0);
        }
        let w = p.width();
        let off = w * n.dist;
        let mut s = 0.0;
        let tl = p.lo + off;
        if tl > p.lo && tl < p.hi {
            s += self.eval(tl, p.clo - off)?;
        }
        let tr = p.hi - off;
        if tr < p.hi && tr > p.lo {
            s += self.eval(tr, p.chi + off)?;
        }
        Ok(n.weight * s)
    }

    fn panel(&mut self, p: Panel, abs_tol: f64, depth: u32) -> Result<Integral> {
        let tab = table();
        let w = p.width();
        let mid = p.lo + 0.5 * w;
        let mut raw = tab.center_weight * self.eval(mid, p.clo - 0.5 * w)?;
        for n in &tab.levels[0] {
            raw += self.pair(&p, n)?;
        }
        let mut h = 1.0;
        let mut prev = w * raw;
        let mut diff = f64::INFINITY;
        for level in 1..=MAX_LEVEL {
            h *= 0.5;
            let mut fresh = 0.0;
            for n in &tab.levels[level] {
                fresh += self.pair(&p, n)?;
            }
            raw += fresh;
            let cur = w * h * raw;
            diff = (cur - prev).abs();
            prev = cur;
            if level >= MIN_LEVEL && diff <= abs_tol.max(self.cfg.rel_tol * cur.abs()) {
                return Ok(Integral {
                    value: cur,
                    error: diff,
                });
            }
            if self.evals > MAX_EVALS {
                return Err(Error::NonConvergence {
                    what: "quadrature",
                    detail: format!("evaluation budget of {MAX_EVALS} exhausted"),
                });
            }
        }
        if depth >= self.cfg.max_refinements {
            return Err(Error::NonConvergence {
                what: "quadrature",
                detail: format!(
                    "panel [{}, {}] at depth {depth}: estimate {prev}, level difference {diff}",
                    p.lo, p.hi
                ),
            });
        }
        // halves share the tolerance of the whole panel, so slivers that
        // carry no weight stop refining
        let tol = 0.5 * abs_tol.max(self.cfg.rel_tol * prev.abs());
        let (left, right) = p.halves();
        let a = self.panel(left, tol, depth + 1)?;
        let b = self.panel(right, tol, depth + 1)?;
        Ok(Integral {
            value: a.value + b.value,
            error: a.error + b.error,
        })
    }
}

/// Integrates `g(t, 1 - t)` over `(0, 1)`.
fn integrate_unit<G: FnMut(f64, f64) -> f64>(mut g: G, cfg: &QuadratureConfig) -> Result<Integral> {
    let mut it = Integrator {
        g: &mut g,
        cfg: *cfg,
        evals: 0,
    };
    let whole = Panel {
        lo: 0.0,
        hi: 1.0,
        clo: 1.0,
        chi: 0.0,
    };
    it.panel(whole, cfg.abs_tol, 0)
}

/// Integral of `f` over `(lo, hi)`. `f` is evaluated at an endpoint only
/// when a node rounds onto it, and a non-finite value there counts as zero.
pub fn integrate_interval<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    if !(lo.is_finite() && hi.is_finite()) {
        return domain(format!("interval bounds must be finite, got [{lo}, {hi}]"));
    }
    if hi == lo {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
        });
    }
    if hi < lo {
        let r = integrate_interval(f, hi, lo, cfg)?;
        return Ok(Integral {
            value: -r.value,
            error: r.error,
        });
    }
    let w = hi - lo;
    let r = integrate_unit(
        |t, omt| {
            // map from whichever end is nearer to keep small offsets exact
            let x = if t <= 0.5 { lo + w * t } else { hi - w * omt };
            if x <= lo || x >= hi {
                // the node rounded onto an endpoint; a finite endpoint value
                // stands in for it, a singular one contributes nothing
                let v = f(x.clamp(lo, hi));
                return if v.is_finite() { v } else { 0.0 };
            }
            f(x)
        },
        cfg,
    )?;
    Ok(Integral {
        value: w * r.value,
        error: w * r.error,
    })
}

/// Integral of `f` over `(0, inf)` through `x = t / (1 - t)`.
pub fn integrate_halfline<F: FnMut(f64) -> f64>(f: F, cfg: &QuadratureConfig) -> Result<Integral> {
    integrate_tail(f, 0.0, 1.0, cfg)
}

/// Integral of `f` over `(0, inf)` through `x = scale * t / (1 - t)`. A scale
/// near the bulk of the integrand's mass speeds convergence.
pub fn integrate_halfline_scaled<F: FnMut(f64) -> f64>(
    f: F,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    integrate_tail(f, 0.0, scale, cfg)
}

/// Integral of `f` over `(lo, inf)` through `x = lo + scale * t / (1 - t)`.
pub fn integrate_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    if !lo.is_finite() {
        return domain(format!("lower limit must be finite, got {lo}"));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return domain(format!("scale must be positive and finite, got {scale}"));
    }
    integrate_unit(
        |t, omt| {
            if omt <= 0.0 {
                return 0.0;
            }
            let x = lo + scale * (t / omt);
            if !x.is_finite() || x <= lo {
                return 0.0;
            }
            let fx = f(x);
            if fx == 0.0 {
                0.0
            } else {
                fx * scale / omt / omt
            }
        },
        cfg,
    )
}

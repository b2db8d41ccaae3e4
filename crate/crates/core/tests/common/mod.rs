#![allow(dead_code)]

/// 20-point Gauss-Legendre nodes and weights on `[-1, 1]` by Newton
/// iteration on the three-term recurrence.
fn gauss_legendre_20() -> Vec<(f64, f64)> {
    let n = 20;
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫_lo^hi f` by composite Gauss-Legendre on panels that halve in width
/// towards `lo`, so algebraic singularities at `lo` are resolved.
/// Independent of the crate's quadrature.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let rule = gauss_legendre_20();
    let panel = |a: f64, b: f64| -> f64 {
        (0..4)
            .map(|j| {
                let pa = a + (b - a) * j as f64 / 4.0;
                let pb = a + (b - a) * (j + 1) as f64 / 4.0;
                let (m, r) = (0.5 * (pa + pb), 0.5 * (pb - pa));
                rule.iter().map(|&(x, w)| w * f(m + r * x)).sum::<f64>() * r
            })
            .sum()
    };
    let width = hi - lo;
    (0..60)
        .map(|k| panel(lo + width * 0.5f64.powi(k + 1), lo + width * 0.5f64.powi(k)))
        .sum()
}

/// `sum_k (a)_k / (b)_k t^k / k!` summed until the terms stop mattering.
pub fn m_series(a: f64, b: f64, t: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 0..10_000 {
        let k = k as f64;
        term *= (a + k) / (b + k) * t / (k + 1.0);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Upper critical value of the Kolmogorov law at the 1% level.
pub const KS_CRIT_1PCT: f64 = 1.627_62;

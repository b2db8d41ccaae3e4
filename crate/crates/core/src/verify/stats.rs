//! Test statistics and their asymptotic null distributions.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::specfun::{reg_inc_beta, reg_inc_gamma_upper};

/// Upper tail `P(χ²_dof > x)`.
pub fn chi2_sf(x: f64, dof: f64) -> Result<f64> {
    if !(dof > 0.0) {
        return domain(format!("chi-square dof must be positive, got {dof}"));
    }
    if x.is_nan() {
        return domain("chi-square statistic is NaN");
    }
    if x <= 0.0 {
        return Ok(1.0);
    }
    reg_inc_gamma_upper(0.5 * dof, 0.5 * x)
}

/// `P(K > λ)` for the Kolmogorov distribution, the limit law of `√n D_n`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 1.18 {
        // theta-function form converges fast for small λ
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let y = -pi2 / (8.0 * lambda * lambda);
        let mut s = 0.0;
        for k in 1..=20 {
            let j = (2 * k - 1) as f64;
            s += (j * j * y).exp();
        }
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / lambda * s;
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let mut s = 0.0;
        for k in 1..=100 {
            let kf = k as f64;
            let t = (-2.0 * kf * kf * lambda * lambda).exp();
            s += if k % 2 == 1 { t } else { -t };
            if t < 1e-300 {
                break;
            }
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Two-sided `P(|T_dof| > |t|)` for Student's t.
pub fn student_t_two_sided(t: f64, dof: f64) -> Result<f64> {
    if !(dof > 0.0) {
        return domain(format!("t dof must be positive, got {dof}"));
    }
    if t.is_nan() {
        return domain("t statistic is NaN");
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    reg_inc_beta(0.5 * dof, 0.5, dof / (dof + t * t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub stat: f64,
    pub p_value: f64,
}

/// Kolmogorov–Smirnov distance from the CDF values of an ascending sample.
pub fn ks_statistic(cdf_sorted: &[f64]) -> f64 {
    let n = cdf_sorted.len() as f64;
    cdf_sorted
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let i = i as f64;
            ((i + 1.0) / n - f).max(f - i / n)
        })
        .fold(0.0, f64::max)
}

/// KS test of a sample against a law, with the asymptotic p-value.
pub fn ks_test<L: crate::distributions::Law>(law: &L, sample: &[f64]) -> Result<KsResult> {
    if sample.is_empty() {
        return domain("KS test needs a non-empty sample");
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let f = law.cdf_sorted(&xs)?;
    let stat = ks_statistic(&f);
    Ok(KsResult {
        stat,
        p_value: kolmogorov_sf((xs.len() as f64).sqrt() * stat),
    })
}

/// Sample mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

pub fn mean_se(xs: &[f64]) -> MeanSe {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    MeanSe {
        mean,
        se: (ss / (n - 1.0) / n).sqrt(),
    }
}

/// Sample covariance matrix of the columns, divided by `n` (the covariance
/// of the vector of column means).
pub fn mean_covariance(cols: &[&[f64]]) -> Vec<Vec<f64>> {
    let n = cols[0].len() as f64;
    let means: Vec<f64> = cols.iter().map(|c| c.iter().sum::<f64>() / n).collect();
    let k = cols.len();
    let mut out = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let s: f64 = cols[i]
                .iter()
                .zip(cols[j])
                .map(|(a, b)| (a - means[i]) * (b - means[j]))
                .sum();
            out[i][j] = s / (n - 1.0) / n;
            out[j][i] = out[i][j];
        }
    }
    out
}

/// Chi-square test on the contingency table of rank bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContingencyTest {
    pub k: usize,
    pub stat: f64,
    pub dof: usize,
    pub p_value: f64,
    pub table: Vec<Vec<u64>>,
}

/// Bin index in `0..k` of every value by rank, so that bins are equiprobable.
pub fn rank_bins(values: &[f64], k: usize) -> Vec<usize> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut bins = vec![0; n];
    for (rank, &i) in idx.iter().enumerate() {
        bins[i] = rank * k / n;
    }
    bins
}

pub fn chi2_independence(u: &[f64], v: &[f64], k: usize) -> Result<ContingencyTest> {
    if u.len() != v.len() {
        return domain("chi-square independence needs columns of equal length");
    }
    if k < 2 || u.len() < k * k {
        return domain(format!("need k >= 2 and at least k^2 points (k={k}, n={})", u.len()));
    }
    let bu = rank_bins(u, k);
    let bv = rank_bins(v, k);
    let mut table = vec![vec![0u64; k]; k];
    for (&i, &j) in bu.iter().zip(&bv) {
        table[i][j] += 1;
    }
    let n = u.len() as f64;
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let cols: Vec<f64> = (0..k)
        .map(|j| table.iter().map(|r| r[j]).sum::<u64>() as f64)
        .collect();
    let mut stat = 0.0;
    for i in 0..k {
        for j in 0..k {
            let e = rows[i] * cols[j] / n;
            let d = table[i][j] as f64 - e;
            stat += d * d / e;
        }
    }
    let dof = (k - 1) * (k - 1);
    Ok(ContingencyTest {
        k,
        stat,
        dof,
        p_value: chi2_sf(stat, dof as f64)?,
        table,
    })
}

/// Weighted least-squares slope with a t-test of zero slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeTest {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub t_stat: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Fits `y = intercept + slope x` with weights `1/se²`. The residual variance
/// is estimated from the fit, so the test has `len - 2` degrees of freedom.
pub fn wls_slope(x: &[f64], y: &[f64], se: &[f64]) -> Result<SlopeTest> {
    let q = x.len();
    if y.len() != q || se.len() != q {
        return domain("wls_slope needs columns of equal length");
    }
    if q < 3 {
        return domain(format!("wls_slope needs at least 3 points, got {q}"));
    }
    if se.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return domain("wls_slope needs positive finite standard errors");
    }
    let w: Vec<f64> = se.iter().map(|s| 1.0 / (s * s)).collect();
    let sw: f64 = w.iter().sum();
    let xm = w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() / sw;
    let ym = w.iter().zip(y).map(|(w, y)| w * y).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..q {
        sxx += w[i] * (x[i] - xm) * (x[i] - xm);
        sxy += w[i] * (x[i] - xm) * (y[i] - ym);
    }
    if !(sxx > 0.0) {
        return domain("wls_slope needs at least two distinct x values");
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let rss: f64 = (0..q)
        .map(|i| {
            let r = y[i] - intercept - slope * x[i];
            w[i] * r * r
        })
        .sum();
    let dof = q - 2;
    let slope_se = (rss / dof as f64 / sxx).sqrt();
    let t_stat = slope / slope_se;
    Ok(SlopeTest {
        slope,
        intercept,
        slope_se,
        t_stat,
        dof,
        p_value: student_t_two_sided(t_stat, dof as f64)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // critical values from standard tables
    #[test]
    fn chi2_critical_values() {
        for (x, dof, p) in [
            (3.841458820694124, 1.0, 0.05),
            (6.634896601021214, 1.0, 0.01),
            (103.00950871, 81.0, 0.05),
            (113.51241047, 81.0, 0.01),
        ] {
            let got = chi2_sf(x, dof).unwrap();
            assert!((got - p).abs() < 1e-7, "dof={dof}: {got}");
        }
        assert_eq!(chi2_sf(0.0, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn kolmogorov_critical_values() {
        assert!((kolmogorov_sf(1.35809864) - 0.05).abs() < 1e-7);
        assert!((kolmogorov_sf(1.62762361) - 0.01).abs() < 1e-7);
        // the two series agree where they switch
        assert!((kolmogorov_sf(1.18 - 1e-12) - kolmogorov_sf(1.18)).abs() < 1e-12);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
        assert!(kolmogorov_sf(0.2) > 0.999_999);
    }

    #[test]
    fn student_t_critical_values() {
        for (t, dof, p) in [
            (2.01063476, 48.0, 0.05),
            (2.68220403, 48.0, 0.01),
            (2.22813885, 10.0, 0.05),
            (3.16927267, 10.0, 0.01),
        ] {
            let got = student_t_two_sided(t, dof).unwrap();
            assert!((got - p).abs() < 1e-7, "dof={dof}: {got}");
            assert!((student_t_two_sided(-t, dof).unwrap() - p).abs() < 1e-7);
        }
        assert_eq!(student_t_two_sided(0.0, 5.0).unwrap(), 1.0);
    }

    #[test]
    fn ks_statistic_of_perfect_grid() {
        let n = 10;
        let f: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        assert!((ks_statistic(&f) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn rank_bins_are_balanced() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 37) % 100) as f64).collect();
        let b = rank_bins(&xs, 4);
        for k in 0..4 {
            assert_eq!(b.iter().filter(|&&j| j == k).count(), 25);
        }
    }

    #[test]
    fn chi2_detects_perfect_dependence() {
        let u: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        let t = chi2_independence(&u, &u, 5).unwrap();
        assert_eq!(t.dof, 16);
        assert!(t.p_value < 1e-100);
        assert!(chi2_independence(&u, &u[..10], 5).is_err());
    }

    #[test]
    fn wls_recovers_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [1.0, 3.1, 4.9, 7.0, 9.05];
        let se = [0.1; 5];
        let t = wls_slope(&x, &y, &se).unwrap();
        assert!((t.slope - 2.0).abs() < 0.05);
        assert_eq!(t.dof, 3);
        assert!(t.p_value < 1e-4);
        // weights only matter relatively for the point estimate
        let t2 = wls_slope(&x, &y, &[1.0; 5]).unwrap();
        assert!((t.slope - t2.slope).abs() < 1e-12);
        assert!(wls_slope(&x[..2], &y[..2], &se[..2]).is_err());
        assert!(wls_slope(&[1.0; 3], &y[..3], &se[..3]).is_err());
    }

    #[test]
    fn mean_covariance_diagonal_matches_se() {
        let a = [1.0, 2.0, 4.0, 7.0];
        let b = [0.5, 0.1, 0.3, 0.9];
        let c = mean_covariance(&[&a, &b]);
        let m = mean_se(&a);
        assert!((c[0][0].sqrt() - m.se).abs() < 1e-15);
        assert_eq!(c[0][1], c[1][0]);
    }
}

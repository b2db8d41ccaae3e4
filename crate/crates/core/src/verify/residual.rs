use serde::Serialize;

use crate::error::{domain, Result};

/// One grid point of a functional equation `lhs = rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualRow {
    /// Grid coordinate (`s` for Laplace identities, `t` for the confluent ODE).
    pub s: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs|` over the scale the equation is normalized by.
    pub residual: f64,
}

impl ResidualRow {
    /// Residual relative to the larger side.
    pub fn relative(s: f64, lhs: f64, rhs: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        let residual = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
        Self {
            s,
            lhs,
            rhs,
            residual,
        }
    }

    /// Residual relative to a caller-supplied scale.
    pub fn scaled(s: f64, lhs: f64, rhs: f64, scale: f64) -> Self {
        Self {
            s,
            lhs,
            rhs,
            residual: (lhs - rhs).abs() / scale,
        }
    }
}

/// Residuals of one equation over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquationResiduals {
    pub name: String,
    /// `None` for residuals that are reported but not gated.
    pub tolerance: Option<f64>,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub passed: bool,
    pub rows: Vec<ResidualRow>,
}

impl EquationResiduals {
    pub fn new(name: impl Into<String>, tolerance: Option<f64>, rows: Vec<ResidualRow>) -> Self {
        let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
        let mean_residual = if rows.is_empty() {
            0.0
        } else {
            rows.iter().map(|r| r.residual).sum::<f64>() / rows.len() as f64
        };
        let finite = rows.iter().all(|r| r.residual.is_finite());
        let passed = match tolerance {
            Some(tol) => finite && max_residual <= tol,
            None => true,
        };
        Self {
            name: name.into(),
            tolerance,
            max_residual,
            mean_residual,
            passed,
            rows,
        }
    }
}

/// Residuals of a family of equations for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub subject: String,
    pub grid: Vec<f64>,
    pub equations: Vec<EquationResiduals>,
    pub passed: bool,
}

impl ResidualReport {
    pub fn new(subject: impl Into<String>, grid: Vec<f64>, equations: Vec<EquationResiduals>) -> Self {
        let passed = equations.iter().all(|e| e.passed);
        Self {
            subject: subject.into(),
            grid,
            equations,
            passed,
        }
    }

    pub fn equation(&self, name: &str) -> Option<&EquationResiduals> {
        self.equations.iter().find(|e| e.name == name)
    }

    /// Concatenates the equations of several reports.
    pub fn merge(subject: impl Into<String>, reports: Vec<ResidualReport>) -> Self {
        let grid = reports.first().map(|r| r.grid.clone()).unwrap_or_default();
        let equations = reports.into_iter().flat_map(|r| r.equations).collect();
        Self::new(subject, grid, equations)
    }
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

pub(crate) fn require_negative_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return domain("the s grid is empty");
    }
    if let Some(&s) = grid.iter().find(|&&s| !(s < 0.0) || !s.is_finite()) {
        return domain(format!("differentiated identities are checked at s < 0 only, got {s}"));
    }
    Ok(())
}

//! Python module `kummer_verify`: the three laws, the transform and its
//! parameter maps, the special functions, and the verification runs.
//! Reports come back as plain dicts with the same fields as the JSON
//! reports of the command-line tool.

use kummer_core::distributions::{self as dist, Law};
use kummer_core::specfun;
use kummer_core::transform;
use kummer_core::verify::{self, MonteCarlo, XLaw};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

fn to_py(e: kummer_core::Error) -> PyErr {
    match e {
        kummer_core::Error::Domain(_) | kummer_core::Error::BinUnderflow { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for kummer_core::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Serializes a report and parses it back as a Python dict.
fn report<'py, T: Serialize>(py: Python<'py>, r: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(r).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn monte_carlo(seed: u64, streams: usize) -> MonteCarlo {
    MonteCarlo::new(seed).with_streams(streams)
}

/// `K(a, b, c)`: density proportional to `x^{a-1} e^{-cx} (1+x)^{-(a+b)}`.
#[pyclass(frozen, module = "kummer_verify")]
struct Kummer {
    inner: dist::Kummer,
}

#[pymethods]
impl Kummer {
    #[new]
    fn new(a: f64, b: f64, c: f64) -> PyResult<Self> {
        let p = dist::KummerParams::new(a, b, c).py_err()?;
        Ok(Self {
            inner: dist::Kummer::new(p).py_err()?,
        })
    }

    #[getter]
    fn params(&self) -> (f64, f64, f64) {
        let p = self.inner.params();
        (p.a(), p.b(), p.c())
    }

    /// Log of the normalizing constant `Γ(a) U(a, 1-b, c)`.
    #[getter]
    fn ln_norm(&self) -> f64 {
        self.inner.ln_norm()
    }

    fn pdf(&self, x: f64) -> f64 {
        self.inner.pdf(x)
    }

    fn cdf(&self, x: f64) -> PyResult<f64> {
        self.inner.cdf(x).py_err()
    }

    fn quantile(&self, p: f64) -> PyResult<f64> {
        self.inner.quantile(p).py_err()
    }

    fn mean(&self) -> PyResult<f64> {
        self.inner.mean().py_err()
    }

    fn moment(&self, k: f64) -> PyResult<f64> {
        self.inner.moment(k).py_err()
    }

    /// `E e^{sX}` for `s <= 0`.
    fn laplace(&self, s: f64) -> PyResult<f64> {
        self.inner.laplace(s).py_err()
    }

    #[pyo3(signature = (n, seed, streams = verify::DEFAULT_STREAMS))]
    fn sample(&self, py: Python<'_>, n: usize, seed: u64, streams: usize) -> PyResult<Vec<f64>> {
        let law = XLaw::Kummer(self.inner.params());
        py.detach(|| verify::sample_x(&law, n, &dist::RngStream::new(seed, 0), streams))
            .py_err()
    }

    fn __repr__(&self) -> String {
        let (a, b, c) = self.params();
        format!("Kummer(a={a}, b={b}, c={c})")
    }
}

/// `G(b, c)`: shape `b`, rate `c`.
#[pyclass(frozen, module = "kummer_verify")]
struct Gamma {
    inner: dist::Gamma,
}

#[pymethods]
impl Gamma {
    #[new]
    fn new(b: f64, c: f64) -> PyResult<Self> {
        Ok(Self {
            inner: dist::Gamma::new(dist::GammaParams::new(b, c).py_err()?),
        })
    }

    #[getter]
    fn params(&self) -> (f64, f64) {
        let p = self.inner.params();
        (p.shape(), p.rate())
    }

    fn pdf(&self, x: f64) -> f64 {
        self.inner.pdf(x)
    }

    fn cdf(&self, x: f64) -> PyResult<f64> {
        self.inner.cdf(x).py_err()
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    /// `(1 - s/c)^{-b}` for `s < c`.
    fn laplace(&self, s: f64) -> PyResult<f64> {
        self.inner.laplace(s).py_err()
    }

    #[pyo3(signature = (n, seed, streams = verify::DEFAULT_STREAMS))]
    fn sample(&self, py: Python<'_>, n: usize, seed: u64, streams: usize) -> PyResult<Vec<f64>> {
        let law = XLaw::Gamma(self.inner.params());
        py.detach(|| verify::sample_x(&law, n, &dist::RngStream::new(seed, 0), streams))
            .py_err()
    }

    fn __repr__(&self) -> String {
        let (b, c) = self.params();
        format!("Gamma(b={b}, c={c})")
    }
}

/// Beta of the first kind on `(0, 1)`.
#[pyclass(frozen, module = "kummer_verify")]
struct Beta {
    inner: dist::Beta,
}

#[pymethods]
impl Beta {
    #[new]
    fn new(a: f64, b: f64) -> PyResult<Self> {
        Ok(Self {
            inner: dist::Beta::new(dist::BetaParams::new(a, b).py_err()?),
        })
    }

    #[getter]
    fn params(&self) -> (f64, f64) {
        let p = self.inner.params();
        (p.a(), p.b())
    }

    fn pdf(&self, u: f64) -> f64 {
        self.inner.pdf(u)
    }

    fn cdf(&self, u: f64) -> PyResult<f64> {
        self.inner.cdf(u).py_err()
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    /// `E 1/U`, infinite when `a <= 1`.
    fn mean_reciprocal(&self) -> f64 {
        self.inner.mean_reciprocal()
    }

    #[pyo3(signature = (n, seed, streams = verify::DEFAULT_STREAMS))]
    fn sample(&self, py: Python<'_>, n: usize, seed: u64, streams: usize) -> PyResult<Vec<f64>> {
        let stream = dist::RngStream::new(seed, 0);
        py.detach(|| verify::sample_chunked(n, &stream, streams, |len, s| self.inner.sample(len, s)))
            .py_err()
    }

    fn __repr__(&self) -> String {
        let (a, b) = self.params();
        format!("Beta(a={a}, b={b})")
    }
}

/// `(u, v)` from `(x, y)`.
#[pyfunction]
fn kv_forward(x: f64, y: f64) -> PyResult<(f64, f64)> {
    transform::kv_forward(x, y).py_err()
}

/// `(x, y)` from `(u, v)`.
#[pyfunction]
fn kv_inverse(u: f64, v: f64) -> PyResult<(f64, f64)> {
    transform::kv_inverse(u, v).py_err()
}

/// `(α, β) = (a/(a+b), (a+b-1)/(a-1))`.
#[pyfunction]
fn constants_from_params(a: f64, b: f64) -> PyResult<(f64, f64)> {
    let rc = transform::constants_from_params(a, b).py_err()?;
    Ok((rc.alpha(), rc.beta()))
}

/// `(a, b)` from `(α, β)`, the inverse of `constants_from_params`.
#[pyfunction]
fn params_from_constants(alpha: f64, beta: f64) -> PyResult<(f64, f64)> {
    let rc = kummer_core::RegressionConstants::new(alpha, beta).py_err()?;
    transform::params_from_constants(&rc).py_err()
}

/// Laws of `U` and `V`: `((a, b), (a+b, -b, c))`.
#[pyfunction]
fn kv_output_laws(a: f64, b: f64, c: f64) -> PyResult<((f64, f64), (f64, f64, f64))> {
    let p = dist::KummerParams::new(a, b, c).py_err()?;
    let (u, v) = transform::kv_output_laws(&p).py_err()?;
    Ok(((u.a(), u.b()), (v.a(), v.b(), v.c())))
}

#[pyfunction]
fn kummer_m(a: f64, b: f64, t: f64) -> PyResult<f64> {
    specfun::kummer_m(a, b, t).py_err()
}

#[pyfunction]
fn tricomi_u(a: f64, b: f64, t: f64) -> PyResult<f64> {
    specfun::tricomi_u(a, b, t).py_err()
}

#[pyfunction]
fn log_gamma(x: f64) -> PyResult<f64> {
    specfun::log_gamma(x).py_err()
}

#[pyfunction]
fn reg_inc_beta(a: f64, b: f64, u: f64) -> PyResult<f64> {
    specfun::reg_inc_beta(a, b, u).py_err()
}

#[pyfunction]
fn reg_inc_gamma(p: f64, z: f64) -> PyResult<f64> {
    specfun::reg_inc_gamma(p, z).py_err()
}

/// Pairs `X ~ K(a,b,c)`, `Y ~ G(b,c)` with their image, as a dict of
/// columns `x, y, u, v`.
#[pyfunction]
#[pyo3(signature = (a, b, c, n, seed = 42, streams = verify::DEFAULT_STREAMS))]
fn sample_pairs<'py>(
    py: Python<'py>,
    a: f64,
    b: f64,
    c: f64,
    n: usize,
    seed: u64,
    streams: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let x = XLaw::Kummer(dist::KummerParams::new(a, b, c).py_err()?);
    let y = dist::GammaParams::new(b, c).py_err()?;
    let s = py.detach(|| monte_carlo(seed, streams).sample(&x, &y, n)).py_err()?;
    let d = PyDict::new(py);
    d.set_item("x", s.x)?;
    d.set_item("y", s.y)?;
    d.set_item("u", s.u)?;
    d.set_item("v", s.v)?;
    Ok(d)
}

/// Independence and marginal tests; `gamma_x=True` runs the negative
/// control `X ~ G(a, c)`.
#[pyfunction]
#[pyo3(signature = (a, b, c, n = 100_000, seed = 42, streams = verify::DEFAULT_STREAMS,
                    k_bins = verify::DEFAULT_K_BINS, gamma_x = false))]
#[allow(clippy::too_many_arguments)]
fn run_forward_property<'py>(
    py: Python<'py>,
    a: f64,
    b: f64,
    c: f64,
    n: usize,
    seed: u64,
    streams: usize,
    k_bins: usize,
    gamma_x: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let (x, y) = laws(a, b, c, gamma_x)?;
    let r = py
        .detach(|| verify::run_independence(&x, &y, n, &monte_carlo(seed, streams), k_bins))
        .py_err()?;
    report(py, &r)
}

/// Binned regressions of `U`, `1/U`, `1-U`, `(1-U)²` on `V`.
#[pyfunction]
#[pyo3(signature = (a, b, c, n = 100_000, seed = 42, streams = verify::DEFAULT_STREAMS,
                    q_bins = verify::DEFAULT_Q_BINS, gamma_x = false))]
#[allow(clippy::too_many_arguments)]
fn run_regression_check<'py>(
    py: Python<'py>,
    a: f64,
    b: f64,
    c: f64,
    n: usize,
    seed: u64,
    streams: usize,
    q_bins: usize,
    gamma_x: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let (x, y) = laws(a, b, c, gamma_x)?;
    let mc = monte_carlo(seed, streams);
    let r = py
        .detach(|| verify::run_regression(&x, &y, n, &mc, q_bins, verify::DEFAULT_MIN_BIN_COUNT))
        .py_err()?;
    report(py, &r)
}

fn laws(a: f64, b: f64, c: f64, gamma_x: bool) -> PyResult<(XLaw, dist::GammaParams)> {
    let x = if gamma_x {
        XLaw::Gamma(dist::GammaParams::new(a, c).py_err()?)
    } else {
        XLaw::Kummer(dist::KummerParams::new(a, b, c).py_err()?)
    };
    Ok((x, dist::GammaParams::new(b, c).py_err()?))
}

#[pyfunction]
fn check_regression_identities<'py>(
    py: Python<'py>,
    a: f64,
    b: f64,
    c: f64,
    s_grid: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let p = dist::KummerParams::new(a, b, c).py_err()?;
    let r = py.detach(|| verify::check_regression_identities(&p, &s_grid)).py_err()?;
    report(py, &r)
}

#[pyfunction]
fn check_transform_identities<'py>(
    py: Python<'py>,
    a: f64,
    b: f64,
    c: f64,
    s_grid: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let p = dist::KummerParams::new(a, b, c).py_err()?;
    let r = py.detach(|| verify::check_transform_identities(&p, &s_grid)).py_err()?;
    report(py, &r)
}

#[pyfunction]
fn check_kummer_ode<'py>(
    py: Python<'py>,
    a: f64,
    b: f64,
    c: f64,
    s_grid: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let p = dist::KummerParams::new(a, b, c).py_err()?;
    let r = py.detach(|| verify::check_kummer_ode(&p, &s_grid)).py_err()?;
    report(py, &r)
}

/// Gamma ODE for `G(p, c)` where `p` is recovered from `(alpha, beta)`.
#[pyfunction]
fn check_gamma_ode<'py>(
    py: Python<'py>,
    alpha: f64,
    beta: f64,
    c: f64,
    s_grid: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let rc = kummer_core::RegressionConstants::new(alpha, beta).py_err()?;
    let (_, p) = transform::params_from_constants(&rc).py_err()?;
    let g = dist::GammaParams::new(p, c).py_err()?;
    report(py, &verify::check_gamma_ode(&g, &s_grid, &rc).py_err()?)
}

/// Fit `(a, b, c)` to the `u`, `v` columns; with `truth=(a, b, c)` the
/// report also carries the distance of each estimate from it.
#[pyfunction]
#[pyo3(signature = (u, v, truth = None))]
fn fit_from_sample<'py>(
    py: Python<'py>,
    u: Vec<f64>,
    v: Vec<f64>,
    truth: Option<(f64, f64, f64)>,
) -> PyResult<Bound<'py, PyAny>> {
    let truth = truth
        .map(|(a, b, c)| dist::KummerParams::new(a, b, c))
        .transpose()
        .py_err()?;
    let mut r = py.detach(|| verify::fit_from_sample(&u, &v)).py_err()?;
    if let Some(t) = &truth {
        r = r.against(t);
    }
    report(py, &r)
}

#[pymodule]
pub fn kummer_verify(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Kummer>()?;
    m.add_class::<Gamma>()?;
    m.add_class::<Beta>()?;
    m.add_function(wrap_pyfunction!(kv_forward, m)?)?;
    m.add_function(wrap_pyfunction!(kv_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(constants_from_params, m)?)?;
    m.add_function(wrap_pyfunction!(params_from_constants, m)?)?;
    m.add_function(wrap_pyfunction!(kv_output_laws, m)?)?;
    m.add_function(wrap_pyfunction!(kummer_m, m)?)?;
    m.add_function(wrap_pyfunction!(tricomi_u, m)?)?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(reg_inc_beta, m)?)?;
    m.add_function(wrap_pyfunction!(reg_inc_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(sample_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(run_forward_property, m)?)?;
    m.add_function(wrap_pyfunction!(run_regression_check, m)?)?;
    m.add_function(wrap_pyfunction!(check_regression_identities, m)?)?;
    m.add_function(wrap_pyfunction!(check_transform_identities, m)?)?;
    m.add_function(wrap_pyfunction!(check_kummer_ode, m)?)?;
    m.add_function(wrap_pyfunction!(check_gamma_ode, m)?)?;
    m.add_function(wrap_pyfunction!(fit_from_sample, m)?)?;
    Ok(())
}

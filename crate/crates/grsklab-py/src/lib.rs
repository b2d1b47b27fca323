//! Python bindings for `grsklab`.
//!
//! Arrays cross the boundary as lists of rows (`list[list[float]]`) plus an
//! optional list of `(row, col)` corners for polygonal shapes. Library errors
//! become `ValidationError` (a `ValueError`) for bad input and
//! `ComputationError` (a `RuntimeError`) when the numerics fail. Long
//! computations release the GIL.

use grsklab::airy::{self, AiryEstimate as RsAiryEstimate};
use grsklab::arrays::{self, IndexSet, MaxPlus, PolygonalArray, TriangularArray};
use grsklab::contour::{self, Estimate as RsEstimate, QuadratureSpec};
use grsklab::sampling::{self, ParameterSet as RsParameterSet, DEFAULT_STREAMS};
use grsklab::{oracle, specfun};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(grsklab_py, ValidationError, PyValueError, "Invalid input or violated precondition.");
create_exception!(grsklab_py, ComputationError, PyRuntimeError, "A numerical evaluation failed or exceeded its budget.");

fn to_py(e: grsklab::Error) -> PyErr {
    if e.is_validation() {
        ValidationError::new_err(e.to_string())
    } else {
        ComputationError::new_err(e.to_string())
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for grsklab::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// A rectangular array when `corners` is absent, a polygonal one otherwise.
fn polygonal(rows: Vec<Vec<f64>>, corners: Option<Vec<(usize, usize)>>) -> grsklab::Result<PolygonalArray<f64>> {
    match corners {
        None => PolygonalArray::matrix(rows),
        Some(c) => PolygonalArray::new(IndexSet::new(c)?, rows),
    }
}

fn tropical(w: &PolygonalArray<f64>) -> grsklab::Result<PolygonalArray<MaxPlus>> {
    w.map(|&x| MaxPlus(x))
}

fn untropical(x: PolygonalArray<MaxPlus>) -> Vec<Vec<f64>> {
    x.into_rows().into_iter().map(|r| r.into_iter().map(|v| v.0).collect()).collect()
}

// ---------------------------------------------------------------- classes

/// Inverse-gamma rates: the weight at `(i, j)` is `1/Gamma(alpha_i + alphahat_j)`.
#[pyclass(frozen, skip_from_py_object, module = "grsklab_py")]
#[derive(Clone)]
pub struct ParameterSet {
    inner: RsParameterSet,
}

#[pymethods]
impl ParameterSet {
    #[new]
    fn new(alpha: Vec<f64>, alphahat: Vec<f64>) -> PyResult<Self> {
        Ok(ParameterSet { inner: RsParameterSet::new(alpha, alphahat).py_err()? })
    }

    /// `alpha = 0`, `alphahat = gamma` on a `rows x cols` grid.
    #[staticmethod]
    fn homogeneous(rows: usize, cols: usize, gamma: f64) -> PyResult<Self> {
        Ok(ParameterSet { inner: RsParameterSet::homogeneous(rows, cols, gamma).py_err()? })
    }

    #[getter]
    fn alpha(&self) -> Vec<f64> {
        self.inner.alpha.clone()
    }

    #[getter]
    fn alphahat(&self) -> Vec<f64> {
        self.inner.alphahat.clone()
    }

    /// Rate `alpha_i + alphahat_j` of cell `(i, j)` (1-based).
    fn rate(&self, i: usize, j: usize) -> PyResult<f64> {
        if i == 0 || j == 0 || i > self.inner.alpha.len() || j > self.inner.alphahat.len() {
            return Err(ValidationError::new_err(format!("cell ({i}, {j}) is outside the parameter grid")));
        }
        Ok(self.inner.rate(i, j))
    }

    fn __repr__(&self) -> String {
        format!("ParameterSet(alpha={:?}, alphahat={:?})", self.inner.alpha, self.inner.alphahat)
    }
}

/// Discretisation of the contour integrals.
#[pyclass(frozen, skip_from_py_object, module = "grsklab_py")]
#[derive(Clone)]
pub struct Quadrature {
    inner: QuadratureSpec,
}

#[pymethods]
impl Quadrature {
    #[new]
    #[pyo3(signature = (half_length=None, nodes_per_unit=None, circle_nodes=None, refinement=None))]
    fn new(
        half_length: Option<f64>,
        nodes_per_unit: Option<f64>,
        circle_nodes: Option<usize>,
        refinement: Option<usize>,
    ) -> PyResult<Self> {
        let d = QuadratureSpec::default();
        let inner = QuadratureSpec {
            half_length: half_length.unwrap_or(d.half_length),
            nodes_per_unit: nodes_per_unit.unwrap_or(d.nodes_per_unit),
            circle_nodes: circle_nodes.unwrap_or(d.circle_nodes),
            refinement: refinement.unwrap_or(d.refinement),
        };
        inner.validate().py_err()?;
        Ok(Quadrature { inner })
    }

    #[getter]
    fn half_length(&self) -> f64 {
        self.inner.half_length
    }

    #[getter]
    fn nodes_per_unit(&self) -> f64 {
        self.inner.nodes_per_unit
    }

    #[getter]
    fn circle_nodes(&self) -> usize {
        self.inner.circle_nodes
    }

    #[getter]
    fn refinement(&self) -> usize {
        self.inner.refinement
    }

    /// Total nodes on one integration line.
    #[getter]
    fn line_nodes(&self) -> usize {
        self.inner.line_nodes()
    }

    fn __repr__(&self) -> String {
        let q = &self.inner;
        format!(
            "Quadrature(half_length={}, nodes_per_unit={}, circle_nodes={}, refinement={})",
            q.half_length, q.nodes_per_unit, q.circle_nodes, q.refinement
        )
    }
}

fn quad_or_default(q: Option<PyRef<'_, Quadrature>>) -> QuadratureSpec {
    q.map(|q| q.inner).unwrap_or_default()
}

/// A quadrature value with its refinement error and the imaginary residual.
#[pyclass(frozen, get_all, skip_from_py_object, module = "grsklab_py")]
#[derive(Clone)]
pub struct Estimate {
    value: f64,
    error: f64,
    imag: f64,
}

impl From<RsEstimate> for Estimate {
    fn from(e: RsEstimate) -> Self {
        Estimate { value: e.value, error: e.error, imag: e.imag }
    }
}

#[pymethods]
impl Estimate {
    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        format!("Estimate(value={}, error={:e}, imag={:e})", self.value, self.error, self.imag)
    }
}

/// Monte Carlo mean with its standard error.
#[pyclass(frozen, get_all, skip_from_py_object, module = "grsklab_py")]
#[derive(Clone)]
pub struct MCEstimate {
    mean: f64,
    stderr: f64,
    n: u64,
    seed: u64,
}

#[pymethods]
impl MCEstimate {
    fn __repr__(&self) -> String {
        format!("MCEstimate(mean={}, stderr={:e}, n={}, seed={})", self.mean, self.stderr, self.n, self.seed)
    }
}

/// A truncated Fredholm series: the sum, its individual terms and contours.
#[pyclass(frozen, get_all, skip_from_py_object, module = "grsklab_py")]
#[derive(Clone)]
pub struct FredholmEstimate {
    value: f64,
    error: f64,
    imag: f64,
    terms: Vec<f64>,
    delta1: f64,
    delta2: f64,
    shift: f64,
}

#[pymethods]
impl FredholmEstimate {
    fn __repr__(&self) -> String {
        format!("FredholmEstimate(value={}, error={:e}, terms={:?})", self.value, self.error, self.terms)
    }
}

/// A truncated Airy-process determinant with partial sums.
#[pyclass(frozen, get_all, skip_from_py_object, module = "grsklab_py")]
#[derive(Clone)]
pub struct AiryEstimate {
    value: f64,
    error: f64,
    full: f64,
    partial_sums: Vec<f64>,
    terms: Vec<Vec<f64>>,
}

impl From<RsAiryEstimate> for AiryEstimate {
    fn from(e: RsAiryEstimate) -> Self {
        AiryEstimate { value: e.value, error: e.error, full: e.full, partial_sums: e.partial_sums, terms: e.terms }
    }
}

#[pymethods]
impl AiryEstimate {
    fn __repr__(&self) -> String {
        format!("AiryEstimate(value={}, error={:e}, partial_sums={:?})", self.value, self.error, self.partial_sums)
    }
}

// ---------------------------------------------------------------- arrays

/// Geometric RSK of an array. With `tropical=True` the max-plus version.
#[pyfunction]
#[pyo3(signature = (rows, corners=None, tropical=false))]
fn grsk(rows: Vec<Vec<f64>>, corners: Option<Vec<(usize, usize)>>, tropical: bool) -> PyResult<Vec<Vec<f64>>> {
    let w = polygonal(rows, corners).py_err()?;
    Ok(if tropical { untropical(arrays::grsk(&self::tropical(&w).py_err()?)) } else { arrays::grsk(&w).into_rows() })
}

/// Geometric PNG of an array. With `tropical=True` the max-plus version.
#[pyfunction]
#[pyo3(signature = (rows, corners=None, tropical=false))]
fn gpng(rows: Vec<Vec<f64>>, corners: Option<Vec<(usize, usize)>>, tropical: bool) -> PyResult<Vec<Vec<f64>>> {
    let w = polygonal(rows, corners).py_err()?;
    Ok(if tropical { untropical(arrays::gpng(&self::tropical(&w).py_err()?)) } else { arrays::gpng(&w).into_rows() })
}

/// Geometric PNG of a triangular array given as rows of lengths `n, n-1, ..., 1`.
#[pyfunction]
fn gpng_triangular(rows: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    let n = rows.len();
    let w = TriangularArray::new(n, rows).py_err()?;
    Ok(arrays::gpng_triangular(&w).into_polygonal().into_rows())
}

/// One local move at cell `(i, j)` (1-based).
#[pyfunction]
#[pyo3(signature = (rows, i, j, corners=None))]
fn local_move(rows: Vec<Vec<f64>>, i: usize, j: usize, corners: Option<Vec<(usize, usize)>>) -> PyResult<Vec<Vec<f64>>> {
    let w = polygonal(rows, corners).py_err()?;
    Ok(arrays::local_move(&w, i, j).py_err()?.into_rows())
}

/// Energy of an output array.
#[pyfunction]
#[pyo3(signature = (rows, corners=None))]
fn energy(rows: Vec<Vec<f64>>, corners: Option<Vec<(usize, usize)>>) -> PyResult<f64> {
    Ok(arrays::energy(&polygonal(rows, corners).py_err()?))
}

/// `(row_type, col_type)` of an output array.
#[pyfunction]
#[pyo3(signature = (rows, corners=None))]
fn type_vectors(rows: Vec<Vec<f64>>, corners: Option<Vec<(usize, usize)>>) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let t = arrays::type_vectors(&polygonal(rows, corners).py_err()?);
    Ok((t.row_type, t.col_type))
}

/// Point-to-point partition function `Z_{m,n}` by dynamic programming.
#[pyfunction]
#[pyo3(signature = (rows, m, n, corners=None))]
fn partition_function(rows: Vec<Vec<f64>>, m: usize, n: usize, corners: Option<Vec<(usize, usize)>>) -> PyResult<f64> {
    oracle::partition_function(&polygonal(rows, corners).py_err()?, m, n).py_err()
}

/// Last-passage time to `(m, n)`.
#[pyfunction]
#[pyo3(signature = (rows, m, n, corners=None))]
fn last_passage(rows: Vec<Vec<f64>>, m: usize, n: usize, corners: Option<Vec<(usize, usize)>>) -> PyResult<f64> {
    oracle::last_passage(&polygonal(rows, corners).py_err()?, m, n).py_err()
}

// ---------------------------------------------------------------- sampling

/// One log-gamma array on the staircase with the given corners.
#[pyfunction]
fn sample_array(corners: Vec<(usize, usize)>, params: PyRef<'_, ParameterSet>, seed: u64) -> PyResult<Vec<Vec<f64>>> {
    let shape = IndexSet::new(corners).py_err()?;
    Ok(sampling::sample_array(&shape, &params.inner, seed).py_err()?.into_rows())
}

/// Monte Carlo estimate of `E[exp(-sum_l u_l Z_{m_l, n_l})]`.
#[pyfunction]
#[pyo3(signature = (points, us, params, samples=1_000_000, seed=0, streams=DEFAULT_STREAMS))]
fn mc_laplace(
    py: Python<'_>,
    points: Vec<(usize, usize)>,
    us: Vec<f64>,
    params: PyRef<'_, ParameterSet>,
    samples: u64,
    seed: u64,
    streams: usize,
) -> PyResult<MCEstimate> {
    let p = params.inner.clone();
    let e = py.detach(|| sampling::mc_laplace_streams(&points, &us, &p, samples, seed, streams)).py_err()?;
    Ok(MCEstimate { mean: e.mean, stderr: e.stderr, n: e.n_samples, seed: e.seed })
}

// ---------------------------------------------------------------- contour formulas

/// `E[exp(-u Z_{m,n})]` for `m >= n` by the `n`-fold contour integral.
#[pyfunction]
#[pyo3(signature = (m, n, u, params, delta=None, quadrature=None))]
fn laplace1(
    py: Python<'_>,
    m: usize,
    n: usize,
    u: f64,
    params: PyRef<'_, ParameterSet>,
    delta: Option<f64>,
    quadrature: Option<PyRef<'_, Quadrature>>,
) -> PyResult<Estimate> {
    let (p, q) = (params.inner.clone(), quad_or_default(quadrature));
    Ok(py.detach(|| contour::laplace1(m, n, u, &p, delta, &q)).py_err()?.into())
}

/// Joint transform `E[exp(-u1 Z_{p1} - u2 Z_{p2})]` when `m2 >= n2`.
#[pyfunction]
#[pyo3(signature = (p1, p2, u1, u2, params, delta=None, gamma_shift=None, quadrature=None))]
#[allow(clippy::too_many_arguments)]
fn laplace2_case_a(
    py: Python<'_>,
    p1: (usize, usize),
    p2: (usize, usize),
    u1: f64,
    u2: f64,
    params: PyRef<'_, ParameterSet>,
    delta: Option<f64>,
    gamma_shift: Option<f64>,
    quadrature: Option<PyRef<'_, Quadrature>>,
) -> PyResult<Estimate> {
    let (p, q) = (params.inner.clone(), quad_or_default(quadrature));
    Ok(py.detach(|| contour::laplace2_case_a(p1, p2, (u1, u2), &p, delta, gamma_shift, &q)).py_err()?.into())
}

/// Joint transform `E[exp(-u1 Z_{p1} - u2 Z_{p2})]` when `m2 < n2`.
#[pyfunction]
#[pyo3(signature = (p1, p2, u1, u2, params, delta=None, delta_prime=None, quadrature=None))]
#[allow(clippy::too_many_arguments)]
fn laplace2_case_b(
    py: Python<'_>,
    p1: (usize, usize),
    p2: (usize, usize),
    u1: f64,
    u2: f64,
    params: PyRef<'_, ParameterSet>,
    delta: Option<f64>,
    delta_prime: Option<f64>,
    quadrature: Option<PyRef<'_, Quadrature>>,
) -> PyResult<Estimate> {
    let (p, q) = (params.inner.clone(), quad_or_default(quadrature));
    Ok(py.detach(|| contour::laplace2_case_b(p1, p2, (u1, u2), &p, delta, delta_prime, &q)).py_err()?.into())
}

/// `E[exp(-u Z_{m,n})]` as a Fredholm determinant, truncated after `order`
/// terms (default `n`, the kernel rank).
#[pyfunction]
#[pyo3(signature = (m, n, u, params, order=None, quadrature=None))]
fn fredholm(
    py: Python<'_>,
    m: usize,
    n: usize,
    u: f64,
    params: PyRef<'_, ParameterSet>,
    order: Option<usize>,
    quadrature: Option<PyRef<'_, Quadrature>>,
) -> PyResult<FredholmEstimate> {
    let (p, q) = (params.inner.clone(), quad_or_default(quadrature));
    let f = py.detach(|| contour::bcr_fredholm(m, n, u, &p, None, &q, order.unwrap_or(n))).py_err()?;
    Ok(FredholmEstimate {
        value: f.estimate.value,
        error: f.estimate.error,
        imag: f.estimate.imag,
        terms: f.terms,
        delta1: f.contours.delta1,
        delta2: f.contours.delta2,
        shift: f.contours.shift,
    })
}

// ---------------------------------------------------------------- Airy

/// `P(A(t1) <= x1, A(t2) <= x2)` for the Airy2 process, series truncated at
/// `order` variables per time.
#[pyfunction]
#[pyo3(signature = (t1, t2, x1, x2, order=airy::MAX_ORDER))]
fn airy_two_point(py: Python<'_>, t1: f64, t2: f64, x1: f64, x2: f64, order: usize) -> PyResult<AiryEstimate> {
    Ok(py.detach(|| airy::airy_two_point(t1, t2, x1, x2, order)).py_err()?.into())
}

/// `P(A(0) <= x)`, the GUE Tracy–Widom distribution, by the same series.
#[pyfunction]
#[pyo3(signature = (x, order=airy::MAX_ORDER))]
fn airy_one_point(py: Python<'_>, x: f64, order: usize) -> PyResult<AiryEstimate> {
    Ok(py.detach(|| airy::airy_one_point(x, order)).py_err()?.into())
}

/// Two-point Airy probability at the times and thresholds matching the
/// scaled polymer points `(t1, r1)`, `(t2, r2)` with parameter `gamma`.
#[pyfunction]
#[pyo3(signature = (t1, t2, r1, r2, gamma, order=airy::MAX_ORDER))]
fn scaled_airy_limit(
    py: Python<'_>,
    t1: f64,
    t2: f64,
    r1: f64,
    r2: f64,
    gamma: f64,
    order: usize,
) -> PyResult<AiryEstimate> {
    Ok(py.detach(|| airy::conjecture_rhs(t1, t2, r1, r2, gamma, order)).py_err()?.into())
}

/// GUE Tracy–Widom distribution function by the Airy-kernel determinant.
#[pyfunction]
fn tracy_widom_f2(s: f64) -> PyResult<f64> {
    airy::tracy_widom_f2(s).py_err()
}

// ---------------------------------------------------------------- special functions

#[pyfunction]
fn airy_ai(x: f64) -> PyResult<f64> {
    specfun::airy_ai(x).py_err()
}

/// Principal branch of `log Gamma(z)`.
#[pyfunction]
fn log_gamma(z: Complex64) -> PyResult<Complex64> {
    specfun::log_gamma(z).py_err()
}

#[pyfunction]
fn digamma(x: f64) -> PyResult<f64> {
    specfun::digamma(x).py_err()
}

#[pymodule]
fn grsklab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("ValidationError", py.get_type::<ValidationError>())?;
    m.add("ComputationError", py.get_type::<ComputationError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<ParameterSet>()?;
    m.add_class::<Quadrature>()?;
    m.add_class::<Estimate>()?;
    m.add_class::<MCEstimate>()?;
    m.add_class::<FredholmEstimate>()?;
    m.add_class::<AiryEstimate>()?;
    m.add_function(wrap_pyfunction!(grsk, m)?)?;
    m.add_function(wrap_pyfunction!(gpng, m)?)?;
    m.add_function(wrap_pyfunction!(gpng_triangular, m)?)?;
    m.add_function(wrap_pyfunction!(local_move, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(type_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(partition_function, m)?)?;
    m.add_function(wrap_pyfunction!(last_passage, m)?)?;
    m.add_function(wrap_pyfunction!(sample_array, m)?)?;
    m.add_function(wrap_pyfunction!(mc_laplace, m)?)?;
    m.add_function(wrap_pyfunction!(laplace1, m)?)?;
    m.add_function(wrap_pyfunction!(laplace2_case_a, m)?)?;
    m.add_function(wrap_pyfunction!(laplace2_case_b, m)?)?;
    m.add_function(wrap_pyfunction!(fredholm, m)?)?;
    m.add_function(wrap_pyfunction!(airy_two_point, m)?)?;
    m.add_function(wrap_pyfunction!(airy_one_point, m)?)?;
    m.add_function(wrap_pyfunction!(scaled_airy_limit, m)?)?;
    m.add_function(wrap_pyfunction!(tracy_widom_f2, m)?)?;
    m.add_function(wrap_pyfunction!(airy_ai, m)?)?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(digamma, m)?)?;
    Ok(())
}

//! Python bindings: the `liespec` extension module.

use liespec::geometry;
use liespec::lie::{self, LieGroupCatalogEntry};
use liespec::linalg::Matrix;
use liespec::metric::{self, MetricSpec, SamplerConfig};
use liespec::rep::{self, RestrictedLambda};
use liespec::scan::{self, DiamConfig, PropertyConfig};
use liespec::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. }
        | Error::CapExceeded { .. }
        | Error::Disconnected { .. }
        | Error::NotHermitian { .. }
        | Error::InvalidStructureConstants(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    Matrix::from_rows(&rows).map_err(py_err)
}

/// A catalog group: `t<m>`, `su2`, `so3` or `su2xsu2`.
#[pyclass(name = "Group", frozen, skip_from_py_object, module = "liespec")]
#[derive(Clone)]
pub struct PyGroup {
    inner: LieGroupCatalogEntry,
}

#[pymethods]
impl PyGroup {
    #[new]
    fn new(key: &str) -> PyResult<Self> {
        Ok(Self {
            inner: LieGroupCatalogEntry::from_key(key).map_err(py_err)?,
        })
    }

    #[getter]
    fn key(&self) -> String {
        self.inner.key()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn k_max(&self) -> usize {
        self.inner.k_max()
    }

    #[getter]
    fn is_semisimple(&self) -> bool {
        self.inner.is_semisimple()
    }

    /// Bracket-generating index of the rotation (identity by default).
    #[pyo3(signature = (rotation=None))]
    fn ell(&self, rotation: Option<Vec<Vec<f64>>>) -> PyResult<usize> {
        let p = self.rotation(rotation)?;
        lie::ell_index(&self.inner, &p).map_err(py_err)
    }

    #[pyo3(signature = (rotation=None))]
    fn prefix_dimensions(&self, rotation: Option<Vec<Vec<f64>>>) -> PyResult<Vec<usize>> {
        let p = self.rotation(rotation)?;
        lie::prefix_dimensions(&self.inner, &p).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Group('{}')", self.inner.key())
    }
}

impl PyGroup {
    fn rotation(&self, rotation: Option<Vec<Vec<f64>>>) -> PyResult<Matrix> {
        match rotation {
            Some(r) => matrix(r),
            None => Ok(Matrix::identity(self.inner.dim())),
        }
    }
}

/// Left-invariant metric `g_A`.
#[pyclass(name = "Metric", frozen, skip_from_py_object, module = "liespec")]
#[derive(Clone)]
pub struct PyMetric {
    inner: MetricSpec,
}

#[pymethods]
impl PyMetric {
    #[new]
    fn new(a: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: MetricSpec::from_matrix(matrix(a)?).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn identity(m: usize) -> Self {
        Self {
            inner: MetricSpec::identity(m),
        }
    }

    /// Metric with the given positive definite `AAᵀ`.
    #[staticmethod]
    fn from_aat(aat: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: MetricSpec::from_aat(&matrix(aat)?).map_err(py_err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn sigma(&self) -> Vec<f64> {
        self.inner.sigma().to_vec()
    }

    #[getter]
    fn a(&self) -> Vec<Vec<f64>> {
        self.inner.a().to_rows()
    }

    #[getter]
    fn aat(&self) -> Vec<Vec<f64>> {
        self.inner.aat().to_rows()
    }

    #[getter]
    fn gram(&self) -> Vec<Vec<f64>> {
        self.inner.gram().to_rows()
    }

    #[getter]
    fn p_sort(&self) -> Vec<Vec<f64>> {
        self.inner.p_sort().to_rows()
    }

    fn norm(&self, x: Vec<f64>) -> PyResult<f64> {
        if x.len() != self.inner.dim() {
            return Err(py_err(Error::DimensionMismatch {
                expected: self.inner.dim(),
                found: x.len(),
            }));
        }
        Ok(self.inner.norm(&x))
    }

    fn scaled(&self, t: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.scaled(t).map_err(py_err)?,
        })
    }

    /// `AAᵀ ≤ BBᵀ` in the Loewner order.
    fn loewner_leq(&self, other: &PyMetric) -> PyResult<bool> {
        metric::loewner_leq(&self.inner, &other.inner).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Metric(sigma={:?})", self.inner.sigma())
    }
}

fn spec_or_identity(group: &PyGroup, metric: Option<&PyMetric>) -> MetricSpec {
    metric.map_or_else(|| MetricSpec::identity(group.inner.dim()), |m| m.inner.clone())
}

fn diam_config(
    method: &str,
    net_size: usize,
    knn: usize,
    hops: usize,
    net_seed: u64,
    grid_resolution: usize,
) -> PyResult<DiamConfig> {
    Ok(DiamConfig {
        method: method.parse().map_err(py_err)?,
        net_size,
        knn,
        hops,
        net_seed,
        grid_resolution,
        eps_net: geometry::DEFAULT_EPS_NET,
    })
}

/// Certified first eigenvalue as a dict.
#[pyfunction]
#[pyo3(signature = (group, metric=None, cap=rep::DEFAULT_CASIMIR_CAP))]
fn lambda1(py: Python<'_>, group: &PyGroup, metric: Option<&PyMetric>, cap: f64) -> PyResult<Py<PyAny>> {
    let spec = spec_or_identity(group, metric);
    let entry = group.inner.clone();
    let r = py
        .detach(move || rep::lambda1_certified_with_cap(&entry, &spec, cap))
        .map_err(py_err)?;
    let out = to_py(py, &r)?;
    out.bind(py).set_item("witness", r.witness.to_string())?;
    Ok(out)
}

/// Restricted eigenvalue; `inf` when only constants are invariant.
#[pyfunction]
fn lambda1_restricted(group: &PyGroup, rotation: Vec<Vec<f64>>, k: usize) -> PyResult<f64> {
    let p = matrix(rotation)?;
    Ok(match rep::lambda1_restricted(&group.inner, &p, k).map_err(py_err)? {
        RestrictedLambda::Finite { value, .. } => value,
        RestrictedLambda::Infinite => f64::INFINITY,
    })
}

/// Diameter estimate as a dict.
#[pyfunction]
#[pyo3(signature = (
    group, metric=None, method="auto", net_size=geometry::DEFAULT_NET_SIZE,
    knn=geometry::DEFAULT_KNN, hops=geometry::DEFAULT_HOPS, net_seed=0,
    grid_resolution=geometry::DEFAULT_GRID_RESOLUTION
))]
#[allow(clippy::too_many_arguments)]
fn diameter(
    py: Python<'_>,
    group: &PyGroup,
    metric: Option<&PyMetric>,
    method: &str,
    net_size: usize,
    knn: usize,
    hops: usize,
    net_seed: u64,
    grid_resolution: usize,
) -> PyResult<Py<PyAny>> {
    let spec = spec_or_identity(group, metric);
    let cfg = diam_config(method, net_size, knn, hops, net_seed, grid_resolution)?;
    let entry = group.inner.clone();
    let est = py
        .detach(move || scan::DiameterEngine::new(&entry, &cfg)?.estimate(&spec))
        .map_err(py_err)?;
    to_py(py, &est)
}

/// Analytic `(lower, upper)` diameter interval.
#[pyfunction]
#[pyo3(signature = (group, metric=None))]
fn diameter_bounds(group: &PyGroup, metric: Option<&PyMetric>) -> PyResult<(f64, f64)> {
    let b = geometry::diameter_bounds(&group.inner, &spec_or_identity(group, metric)).map_err(py_err)?;
    Ok((b.lower, b.upper))
}

/// One `λ₁·diam²` record as a dict.
#[pyfunction]
#[pyo3(signature = (
    group, metric=None, method="auto", net_size=geometry::DEFAULT_NET_SIZE,
    knn=geometry::DEFAULT_KNN, hops=geometry::DEFAULT_HOPS, net_seed=0,
    grid_resolution=geometry::DEFAULT_GRID_RESOLUTION
))]
#[allow(clippy::too_many_arguments)]
fn egs_ratio(
    py: Python<'_>,
    group: &PyGroup,
    metric: Option<&PyMetric>,
    method: &str,
    net_size: usize,
    knn: usize,
    hops: usize,
    net_seed: u64,
    grid_resolution: usize,
) -> PyResult<Py<PyAny>> {
    let spec = spec_or_identity(group, metric);
    let cfg = diam_config(method, net_size, knn, hops, net_seed, grid_resolution)?;
    let entry = group.inner.clone();
    let rec = py
        .detach(move || scan::egs_ratio(&entry, &spec, &cfg))
        .map_err(py_err)?;
    to_py(py, &rec)
}

/// Seeded random metric with log-uniform singular values.
#[pyfunction]
#[pyo3(signature = (group, seed, sigma_min=0.1, sigma_max=10.0, random_rotation=true))]
fn sample_metric(
    group: &PyGroup,
    seed: u64,
    sigma_min: f64,
    sigma_max: f64,
    random_rotation: bool,
) -> PyResult<PyMetric> {
    let mut sampler = SamplerConfig::log_uniform(sigma_min, sigma_max);
    sampler.random_rotation = random_rotation;
    Ok(PyMetric {
        inner: metric::sample_metric(&group.inner, &sampler, seed).map_err(py_err)?,
    })
}

/// Randomized scan; returns the JSON report as a dict.
#[pyfunction]
#[pyo3(signature = (
    group, samples, seed=0, sigma_min=0.1, sigma_max=10.0, random_rotation=true,
    method="auto", net_size=geometry::DEFAULT_NET_SIZE, knn=geometry::DEFAULT_KNN,
    hops=geometry::DEFAULT_HOPS, net_seed=0,
    grid_resolution=geometry::DEFAULT_GRID_RESOLUTION, jobs=None
))]
#[allow(clippy::too_many_arguments)]
fn scan_metrics(
    py: Python<'_>,
    group: &PyGroup,
    samples: usize,
    seed: u64,
    sigma_min: f64,
    sigma_max: f64,
    random_rotation: bool,
    method: &str,
    net_size: usize,
    knn: usize,
    hops: usize,
    net_seed: u64,
    grid_resolution: usize,
    jobs: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let mut sampler = SamplerConfig::log_uniform(sigma_min, sigma_max);
    sampler.random_rotation = random_rotation;
    let cfg = diam_config(method, net_size, knn, hops, net_seed, grid_resolution)?;
    let entry = group.inner.clone();
    let report = py
        .detach(move || scan::scan(&entry, samples, &sampler, &cfg, seed, jobs))
        .map_err(py_err)?;
    to_py(py, &report)
}

/// Degeneration sweep; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (
    group, kind, s_values, net_size=geometry::DEFAULT_NET_SIZE, knn=geometry::DEFAULT_KNN,
    grid_resolution=geometry::DEFAULT_GRID_RESOLUTION
))]
fn degenerate(
    py: Python<'_>,
    group: &PyGroup,
    kind: &str,
    s_values: Vec<f64>,
    net_size: usize,
    knn: usize,
    grid_resolution: usize,
) -> PyResult<Py<PyAny>> {
    let kind: scan::DegenerationKind = kind.parse().map_err(py_err)?;
    let cfg = diam_config("auto", net_size, knn, geometry::DEFAULT_HOPS, 0, grid_resolution)?;
    let entry = group.inner.clone();
    let report = py
        .detach(move || scan::degeneration_experiment(&entry, kind, &s_values, &cfg))
        .map_err(py_err)?;
    to_py(py, &report)
}

/// Randomized property suite; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (group, trials=50, seed=0, net_size=2000))]
fn verify(py: Python<'_>, group: &PyGroup, trials: usize, seed: u64, net_size: usize) -> PyResult<Py<PyAny>> {
    let cfg = PropertyConfig {
        net_size,
        ..PropertyConfig::default()
    };
    let entry = group.inner.clone();
    let report = py
        .detach(move || scan::property_suite(&entry, trials, seed, &cfg))
        .map_err(py_err)?;
    to_py(py, &report)
}

#[pyfunction]
fn self_test() -> PyResult<()> {
    liespec::self_test().map_err(py_err)
}

#[pymodule]
#[pyo3(name = "liespec")]
fn liespec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyMetric>()?;
    m.add_function(wrap_pyfunction!(lambda1, m)?)?;
    m.add_function(wrap_pyfunction!(lambda1_restricted, m)?)?;
    m.add_function(wrap_pyfunction!(diameter, m)?)?;
    m.add_function(wrap_pyfunction!(diameter_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(egs_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(sample_metric, m)?)?;
    m.add("scan", wrap_pyfunction!(scan_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(degenerate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(self_test, m)?)?;
    Ok(())
}

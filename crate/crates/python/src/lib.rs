//! Python bindings: complexes, chains, exact and linear fillings, profiles.

use std::sync::Arc;

use ::homfill as core;
use core::builders::{estimate_delta, rips_complex, DeltaMode, Preset, DEFAULT_EXACT_CAP};
use core::hypfill::{linear_bound, linear_fill, HyperbolicContext};
use core::profiler::{self, BallProbes, GrowthBands, ProfileConfig};
use core::solver::{Budget, Filler};
use core::{io, Error, NormedRing};
use num_rational::Rational64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::Budget(_) | Error::Certification { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rational(s: &str) -> PyResult<Rational64> {
    s.trim().parse().map_err(|_| PyValueError::new_err(format!("cannot read {s:?} as a rational")))
}

fn ring(spec: &str) -> PyResult<NormedRing> {
    spec.parse().map_err(err)
}

fn budget(nodes: Option<u64>, millis: Option<u64>) -> Budget {
    let mut b = Budget::from_env();
    if let Some(n) = nodes {
        b.nodes = n;
    }
    b.millis = millis;
    b
}

/// A finite simplicial complex, possibly carrying a vertex metric.
#[pyclass(name = "Complex", frozen)]
struct PyComplex {
    inner: Arc<core::Complex>,
}

#[pymethods]
impl PyComplex {
    /// `f2`, `z2`, `z2abc`, `genus2`, `grid:WxH` or `tree:V,D`.
    #[staticmethod]
    #[pyo3(signature = (name, radius = 3))]
    fn preset(name: &str, radius: u32) -> PyResult<Self> {
        let p: Preset = name.parse().map_err(err)?;
        Ok(PyComplex { inner: Arc::new(p.build(radius).map_err(err)?.0) })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyComplex { inner: Arc::new(io::read_complex(text).map_err(err)?) })
    }

    fn to_text(&self) -> String {
        io::write_complex(&self.inner)
    }

    /// Rips complex of the vertex metric at threshold `d` (a rational string).
    #[pyo3(signature = (d, max_dim = 2))]
    fn rips(&self, d: &str, max_dim: usize) -> PyResult<Self> {
        let m = self.inner.meta().metric.clone().ok_or_else(|| PyValueError::new_err("complex has no metric"))?;
        Ok(PyComplex { inner: Arc::new(rips_complex(&m, rational(d)?, max_dim).map_err(err)?) })
    }

    /// Four-point constant as a string; sampled when `samples` is given.
    #[pyo3(signature = (samples = None, seed = 0))]
    fn delta(&self, samples: Option<u64>, seed: u64) -> PyResult<String> {
        let m = self.inner.metric().ok_or_else(|| PyValueError::new_err("complex has no metric"))?;
        let mode = match samples {
            Some(count) => DeltaMode::Sampled { count, seed },
            None => DeltaMode::Exact { cap: DEFAULT_EXACT_CAP },
        };
        Ok(estimate_delta(m, mode).map_err(err)?.delta.to_string())
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn n_vertices(&self) -> usize {
        self.inner.n_vertices()
    }

    fn n_cells(&self, dim: usize) -> usize {
        self.inner.n_cells(dim)
    }

    fn vertices(&self, dim: usize, id: u32) -> PyResult<Vec<u32>> {
        if id as usize >= self.inner.n_cells(dim) {
            return Err(PyValueError::new_err(format!("no {dim}-cell {id}")));
        }
        Ok(self.inner.vertices(dim, id).to_vec())
    }

    /// 1-chain of a closed vertex path.
    #[pyo3(signature = (path, ring_spec = "Z:abs"))]
    fn path_chain(&self, path: Vec<u32>, ring_spec: &str) -> PyResult<PyChain> {
        Ok(PyChain { inner: self.inner.path_chain(&path, ring(ring_spec)?).map_err(err)? })
    }

    fn boundary(&self, c: &PyChain) -> PyResult<PyChain> {
        Ok(PyChain { inner: self.inner.boundary(&c.inner).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        let counts: Vec<String> = (0..=self.inner.dimension()).map(|k| self.inner.n_cells(k).to_string()).collect();
        format!("Complex(cells=[{}])", counts.join(", "))
    }
}

/// A sparse chain; coefficients are exchanged as strings (`"3"`, `"-1/2"`).
#[pyclass(name = "Chain", frozen)]
struct PyChain {
    inner: core::Chain,
}

#[pymethods]
impl PyChain {
    #[new]
    fn new(ring_spec: &str, dim: usize, terms: Vec<(u32, String)>) -> PyResult<Self> {
        let r = ring(ring_spec)?;
        let terms = terms
            .iter()
            .map(|(id, x)| r.parse_coefficient(x).map(|c| (*id, c)))
            .collect::<core::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(PyChain { inner: core::Chain::from_terms(r, dim, terms) })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyChain { inner: io::read_chain(text).map_err(err)? })
    }

    fn to_text(&self) -> String {
        io::write_chain(&self.inner)
    }

    fn terms(&self) -> Vec<(u32, String)> {
        let r = self.inner.ring();
        self.inner.iter().map(|(id, c)| (id, r.format_coefficient(c))).collect()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn ring(&self) -> String {
        self.inner.ring().to_string()
    }

    /// The l1-norm, as a string.
    fn norm(&self) -> String {
        self.inner.l1_norm().to_string()
    }

    fn __eq__(&self, other: &PyChain) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Chain(ring={}, dim={}, terms={})", self.inner.ring(), self.inner.dim(), self.inner.support_len())
    }
}

#[pyclass(name = "FillingResult", frozen)]
struct PyFilling {
    #[pyo3(get)]
    norm: String,
    #[pyo3(get)]
    status: String,
    #[pyo3(get)]
    nodes: u64,
    #[pyo3(get)]
    region_depth: usize,
    filling: core::Chain,
}

#[pymethods]
impl PyFilling {
    #[getter]
    fn filling(&self) -> PyChain {
        PyChain { inner: self.filling.clone() }
    }

    fn __repr__(&self) -> String {
        format!("FillingResult(norm={}, status={})", self.norm, self.status)
    }
}

impl From<core::solver::FillingResult> for PyFilling {
    fn from(r: core::solver::FillingResult) -> Self {
        PyFilling {
            norm: r.norm.to_string(),
            status: r.status.to_string(),
            nodes: r.nodes,
            region_depth: r.region.depth,
            filling: r.filling,
        }
    }
}

/// Minimal filling of a cycle.
#[pyfunction]
#[pyo3(signature = (complex, cycle, budget_nodes = None, budget_ms = None))]
fn fill(py: Python<'_>, complex: &PyComplex, cycle: &PyChain, budget_nodes: Option<u64>, budget_ms: Option<u64>) -> PyResult<PyFilling> {
    let cx = complex.inner.clone();
    let z = cycle.inner.clone();
    let b = budget(budget_nodes, budget_ms);
    let r = py.detach(move || Filler::new(&cx).with_budget(b).fill(&z)).map_err(err)?;
    Ok(r.into())
}

/// Area of a closed vertex path.
#[pyfunction]
#[pyo3(signature = (complex, path, ring_spec = "Z:abs", budget_nodes = None))]
fn area(py: Python<'_>, complex: &PyComplex, path: Vec<u32>, ring_spec: &str, budget_nodes: Option<u64>) -> PyResult<PyFilling> {
    let cx = complex.inner.clone();
    let r = ring(ring_spec)?;
    let b = budget(budget_nodes, None);
    let res = py.detach(move || Filler::new(&cx).with_budget(b).area(&path, r)).map_err(err)?;
    Ok(res.into())
}

/// Linear filling in a Rips complex; returns the result, the bound factor N and the trace text.
#[pyfunction]
#[pyo3(signature = (complex, cycle, delta, epsilon, basepoint = 0))]
fn hypfill(complex: &PyComplex, cycle: &PyChain, delta: &str, epsilon: &str, basepoint: u32) -> PyResult<(PyFilling, u64, String)> {
    let ctx = HyperbolicContext::new(&complex.inner, rational(delta)?, rational(epsilon)?, basepoint).map_err(err)?;
    let (r, t) = linear_fill(&ctx, &cycle.inner).map_err(err)?;
    Ok((r.into(), linear_bound(&ctx), io::write_trace(&t, cycle.inner.ring())))
}

#[pyclass(name = "Profile", frozen)]
struct PyProfile {
    inner: profiler::IsoProfile,
}

#[pymethods]
impl PyProfile {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyProfile { inner: io::read_profile(text).map_err(err)? })
    }

    fn to_text(&self) -> String {
        io::write_profile(&self.inner)
    }

    /// `(l, f_hat, mode, samples, worst_status)` rows.
    fn entries(&self) -> Vec<(usize, String, String, usize, Option<String>)> {
        self.inner
            .entries
            .iter()
            .map(|e| (e.l, e.f_hat.to_string(), e.mode.to_string(), e.samples, e.worst_status.map(|s| s.to_string())))
            .collect()
    }

    /// `(label, alpha)` of the growth fit.
    fn classify(&self) -> PyResult<(String, f64)> {
        let g = profiler::classify_growth(&self.inner, &GrowthBands::default()).map_err(err)?;
        Ok((g.label.to_string(), g.alpha))
    }

    fn plotdata(&self) -> PyResult<String> {
        let g = profiler::classify_growth(&self.inner, &GrowthBands::default()).map_err(err)?;
        Ok(io::write_plotdata(&self.inner, &g))
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }
}

/// Isoperimetric profile for `1 <= l <= lmax`.
#[pyfunction]
#[pyo3(signature = (complex, dim, lmax, ring_spec, exhaustive_to = 0, samples = 0, seed = 0, ball_radius = None, budget_nodes = None))]
#[allow(clippy::too_many_arguments)]
fn profile(
    py: Python<'_>,
    complex: &PyComplex,
    dim: usize,
    lmax: usize,
    ring_spec: &str,
    exhaustive_to: usize,
    samples: usize,
    seed: u64,
    ball_radius: Option<u32>,
    budget_nodes: Option<u64>,
) -> PyResult<PyProfile> {
    let cx = complex.inner.clone();
    let r = ring(ring_spec)?;
    let cfg = ProfileConfig {
        exhaustive_to,
        samples,
        seed,
        balls: ball_radius.map(|max_radius| BallProbes { centers: Some(vec![0]), max_radius }),
        paths: Vec::new(),
        budget: budget(budget_nodes, None),
    };
    let p = py.detach(move || profiler::profile(&cx, dim, lmax, r, &cfg)).map_err(err)?;
    Ok(PyProfile { inner: p })
}

#[pymodule]
pub fn homfill(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_class::<PyChain>()?;
    m.add_class::<PyFilling>()?;
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(fill, m)?)?;
    m.add_function(wrap_pyfunction!(area, m)?)?;
    m.add_function(wrap_pyfunction!(hypfill, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

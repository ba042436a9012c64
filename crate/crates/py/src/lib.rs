//! Python bindings: `import pysymcap`.

use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use symcap::bounds;
use symcap::c5_lab;
use symcap::config_space::{self, Configuration};
use symcap::mis_solver::{self, Budget};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_python<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn configuration(weights: Vec<u32>) -> PyResult<Configuration> {
    Configuration::new(weights).map_err(value_error)
}

fn budget(max_nodes: Option<u64>, max_seconds: Option<f64>) -> Budget {
    let mut b = Budget::default();
    if let Some(n) = max_nodes {
        b.max_nodes = n;
    }
    if let Some(s) = max_seconds {
        b.max_time = Duration::from_secs_f64(s.max(0.0));
    }
    b
}

#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: symcap::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        symcap::Graph::from_edges(n, edges)
            .map(|inner| PyGraph { inner })
            .map_err(value_error)
    }

    /// `c5`, `k4`, `petersen`, `cycle:7`, ... or a path to a graph file.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        symcap::cli::resolve_graph(name)
            .map(|(inner, _)| PyGraph { inner })
            .map_err(PyValueError::new_err)
    }

    /// Edge-list or DIMACS text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        symcap::parse_graph(text)
            .map(|inner| PyGraph { inner })
            .map_err(value_error)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn has_edge(&self, u: usize, v: usize) -> PyResult<bool> {
        if u >= self.inner.n() || v >= self.inner.n() {
            return Err(PyValueError::new_err("vertex out of range"));
        }
        Ok(self.inner.has_edge(u, v))
    }

    fn complement(&self) -> Self {
        PyGraph {
            inner: self.inner.complement(),
        }
    }

    fn alpha(&self) -> PyResult<usize> {
        self.inner.alpha_exact().map_err(value_error)
    }

    fn theta(&self) -> PyResult<usize> {
        self.inner.clique_cover_number().map_err(value_error)
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.edge_count())
    }
}

#[pyclass(name = "QuotientGraph", frozen)]
struct PyQuotient {
    inner: symcap::QuotientGraph,
}

#[pymethods]
impl PyQuotient {
    #[new]
    fn new(graph: &PyGraph, k: u32) -> PyResult<Self> {
        symcap::build_quotient(&graph.inner, k)
            .map(|inner| PyQuotient { inner })
            .map_err(value_error)
    }

    /// The same graph built from the strong power instead.
    #[staticmethod]
    fn from_strong_power(graph: &PyGraph, k: u32) -> PyResult<Self> {
        symcap::strong_power_quotient_oracle(&graph.inner, k)
            .map(|inner| PyQuotient { inner })
            .map_err(value_error)
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn configurations(&self) -> Vec<Vec<u32>> {
        self.inner
            .configurations()
            .iter()
            .map(|c| c.weights().to_vec())
            .collect()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.graph().edges()
    }

    fn graph(&self) -> PyGraph {
        PyGraph {
            inner: self.inner.graph().clone(),
        }
    }

    /// Exact α with a certificate. Returns the report as a dict.
    #[pyo3(signature = (max_nodes=None, max_seconds=None, symmetric=true))]
    fn solve<'py>(
        &self,
        py: Python<'py>,
        max_nodes: Option<u64>,
        max_seconds: Option<f64>,
        symmetric: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let b = budget(max_nodes, max_seconds);
        let g = self.inner.graph();
        let report = py
            .detach(|| {
                if symmetric {
                    let auts = self.inner.induced_automorphisms(bounds::AUTOMORPHISM_LIMIT);
                    mis_solver::solve_exact_symmetric(g, &auts, &b)
                } else {
                    mis_solver::solve_exact(g, &b)
                }
            })
            .map_err(value_error)?;
        to_python(py, &serde_json::to_value(&report).map_err(value_error)?)
    }

    /// Seeded local search; returns the configurations found.
    #[pyo3(signature = (seed=0, iterations=1000))]
    fn heuristic(&self, seed: u64, iterations: u64) -> PyResult<Vec<Vec<u32>>> {
        let cert = mis_solver::heuristic_search(self.inner.graph(), seed, iterations)
            .map_err(value_error)?;
        Ok(cert
            .members
            .iter()
            .map(|&r| self.inner.configuration(r).weights().to_vec())
            .collect())
    }

    fn sidecar_json(&self) -> String {
        self.inner.sidecar_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "QuotientGraph(base_n={}, k={}, vertices={})",
            self.inner.base().n(),
            self.inner.k(),
            self.inner.vertex_count()
        )
    }
}

#[pyfunction]
fn configuration_count(n: usize, k: u32) -> PyResult<u128> {
    config_space::configuration_count(n, k).ok_or_else(|| PyValueError::new_err("overflow"))
}

#[pyfunction]
fn enumerate_configurations(n: usize, k: u32) -> PyResult<Vec<Vec<u32>>> {
    Ok(config_space::enumerate_configurations(n, k)
        .map_err(value_error)?
        .into_iter()
        .map(|c| c.weights().to_vec())
        .collect())
}

#[pyfunction]
fn rank(weights: Vec<u32>) -> PyResult<u64> {
    Ok(configuration(weights)?.rank())
}

#[pyfunction]
fn unrank(n: usize, k: u32, r: u64) -> PyResult<Vec<u32>> {
    config_space::unrank(n, k, r)
        .map(|c| c.weights().to_vec())
        .map_err(value_error)
}

/// A one-step transport plan from `f` to `t` as a move matrix, or `None`.
#[pyfunction]
fn find_transport(graph: &PyGraph, f: Vec<u32>, t: Vec<u32>) -> PyResult<Option<Vec<Vec<u32>>>> {
    let plan = config_space::find_transport(&graph.inner, &configuration(f)?, &configuration(t)?)
        .map_err(value_error)?;
    Ok(plan.map(|p| p.moves))
}

#[pyfunction]
fn adjacent(graph: &PyGraph, f: Vec<u32>, t: Vec<u32>) -> PyResult<bool> {
    config_space::adjacent(&graph.inner, &configuration(f)?, &configuration(t)?)
        .map_err(value_error)
}

/// Lower/upper bounds for G[k]; with `solve`, also the exact α.
#[pyfunction]
#[pyo3(signature = (graph, k, solve=true, max_nodes=None, max_seconds=None))]
fn bounds_report<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    k: u32,
    solve: bool,
    max_nodes: Option<u64>,
    max_seconds: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let b = budget(max_nodes, max_seconds);
    let report = py
        .detach(|| {
            let base = bounds::base_parameters(&graph.inner)?;
            bounds::bounds_report(&graph.inner, k, base, solve.then_some(&b))
        })
        .map_err(value_error)?;
    to_python(py, &serde_json::to_value(&report).map_err(value_error)?)
}

#[pyfunction]
fn c5_upper_bound(k: u64) -> u64 {
    bounds::c5_upper_bound(k)
}

/// Counting, cardinality and midpoint audits for C5 at weight `k`.
#[pyfunction]
fn c5_audits<'py>(py: Python<'py>, k: u32) -> PyResult<Bound<'py, PyAny>> {
    let audits = py
        .detach(|| -> Result<_, c5_lab::C5Error> {
            Ok(vec![
                c5_lab::counting_audit(k)?,
                c5_lab::cardinality_audit(k)?,
                c5_lab::midpoint_characterization_audit(k)?,
            ])
        })
        .map_err(value_error)?;
    to_python(py, &serde_json::to_value(&audits).map_err(value_error)?)
}

#[pymodule]
fn pysymcap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyQuotient>()?;
    m.add_function(wrap_pyfunction!(configuration_count, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_configurations, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(unrank, m)?)?;
    m.add_function(wrap_pyfunction!(find_transport, m)?)?;
    m.add_function(wrap_pyfunction!(adjacent, m)?)?;
    m.add_function(wrap_pyfunction!(bounds_report, m)?)?;
    m.add_function(wrap_pyfunction!(c5_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(c5_audits, m)?)?;
    Ok(())
}

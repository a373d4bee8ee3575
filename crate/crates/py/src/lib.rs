//! Python bindings: instances, solutions, the solver, heuristics and the oracle.

use std::time::Duration;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use reserve_core::formulation::{build, VariantId};
use reserve_core::heuristics;
use reserve_core::instance::{self as core_instance, ScenarioId};
use reserve_core::io::{parse_instance, write_instance};
use reserve_core::milp::export_lp_file;
use reserve_core::oracle;
use reserve_core::render::{render_solution, Layout};
use reserve_core::solution;
use reserve_core::solver::{self, Setting, SolverConfig};

fn err(e: reserve_core::Error) -> PyErr {
    match e {
        reserve_core::Error::Io(m) => PyIOError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn variant(name: &str) -> PyResult<VariantId> {
    name.parse().map_err(err)
}

/// Problem instance (graph, costs, species, quotas and parameters).
#[pyclass(frozen, skip_from_py_object, name = "Instance", module = "grsc")]
#[derive(Clone)]
struct Instance {
    inner: core_instance::Instance,
}

#[pymethods]
impl Instance {
    /// Random `n x n` grid with `s1` core-class and `s2` reserve-class species.
    #[staticmethod]
    #[pyo3(signature = (n, s1=1, s2=3, seed=0))]
    fn generate_grid(n: usize, s1: usize, s2: usize, seed: u64) -> PyResult<Self> {
        Ok(Instance { inner: core_instance::generate_grid(n, s1, s2, seed).map_err(err)? })
    }

    /// Parses the plain-text instance format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Instance { inner: parse_instance(text).map_err(err)? })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| PyIOError::new_err(e.to_string()))?;
        Self::parse(&text)
    }

    fn to_text(&self) -> String {
        write_instance(&self.inner)
    }

    #[getter]
    fn n_nodes(&self) -> usize {
        self.inner.n_nodes()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    #[getter]
    fn costs(&self) -> Vec<f64> {
        self.inner.cost().to_vec()
    }

    #[getter]
    fn n_species(&self) -> (usize, usize) {
        (self.inner.n_s1(), self.inner.n_s2())
    }

    #[getter]
    fn quotas(&self) -> Vec<f64> {
        self.inner.species().iter().map(|s| s.lambda).collect()
    }

    #[getter]
    fn protection(&self) -> (usize, usize) {
        (self.inner.p1, self.inner.p2)
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.max_components
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.buffer_width
    }

    /// Copy with P1/P2 set by scenario "A", "B" or "C".
    fn with_scenario(&self, scenario: &str) -> PyResult<Self> {
        let sc: ScenarioId = scenario.parse().map_err(err)?;
        Ok(Instance { inner: self.inner.apply_scenario(sc) })
    }

    fn with_k(&self, k: usize) -> Self {
        Instance { inner: self.inner.with_max_components(k) }
    }

    fn with_d(&self, d: usize) -> Self {
        Instance { inner: self.inner.with_buffer_width(d) }
    }

    fn with_lambda_fraction(&self, fraction: f64) -> PyResult<Self> {
        Ok(Instance { inner: self.inner.derive_lambda(fraction).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(n_nodes={}, edges={}, species=({}, {}), P=({}, {}), d={}, k={})",
            self.inner.n_nodes(),
            self.inner.edges().len(),
            self.inner.n_s1(),
            self.inner.n_s2(),
            self.inner.p1,
            self.inner.p2,
            self.inner.buffer_width,
            self.inner.max_components
        )
    }
}

/// A selected reserve: core nodes, reserve nodes, component roots and hosted species.
#[pyclass(frozen, skip_from_py_object, name = "Solution", module = "grsc")]
#[derive(Clone)]
struct Solution {
    inner: solution::Solution,
}

#[pymethods]
impl Solution {
    /// Canonical solution for a core set.
    #[staticmethod]
    fn from_core(inst: &Instance, variant_name: &str, core: Vec<usize>) -> PyResult<Self> {
        let v = variant(variant_name)?;
        if let Some(&i) = core.iter().find(|&&i| i >= inst.inner.n_nodes()) {
            return Err(PyValueError::new_err(format!("node {i} out of range")));
        }
        Ok(Solution { inner: solution::Solution::from_core(&inst.inner, v, &core) })
    }

    #[getter]
    fn core(&self) -> Vec<usize> {
        self.inner.core_nodes()
    }

    #[getter]
    fn reserve(&self) -> Vec<usize> {
        self.inner.reserve_nodes()
    }

    #[getter]
    fn roots(&self) -> Vec<usize> {
        self.inner.roots()
    }

    #[getter]
    fn hosted(&self) -> Vec<usize> {
        self.inner.hosted()
    }

    fn cost(&self, inst: &Instance) -> f64 {
        self.inner.cost(&inst.inner)
    }

    fn __repr__(&self) -> String {
        format!("Solution(core={:?}, reserve={:?})", self.inner.core_nodes(), self.inner.reserve_nodes())
    }
}

/// Solves with branch-and-cut; returns a dict with status, objective,
/// dual_bound, gap, root_bound, heuristic, nodes, time and solution.
#[pyfunction]
#[pyo3(signature = (inst, variant_name="grsc-cb", setting="basic+cp", time_limit=None, node_limit=None, seed=0))]
fn solve<'py>(
    py: Python<'py>,
    inst: &Instance,
    variant_name: &str,
    setting: &str,
    time_limit: Option<f64>,
    node_limit: Option<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let v = variant(variant_name)?;
    let cfg = SolverConfig {
        setting: setting.parse::<Setting>().map_err(err)?,
        time_limit: time_limit.map(Duration::from_secs_f64),
        node_limit,
        seed,
        ..Default::default()
    };
    let inner = inst.inner.clone();
    let out = py.detach(move || solver::solve(&inner, v, &cfg)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("status", out.status.to_string())?;
    d.set_item("objective", out.objective)?;
    d.set_item("dual_bound", out.dual_bound)?;
    d.set_item("gap", out.gap())?;
    d.set_item("root_bound", out.root_bound)?;
    d.set_item("heuristic", out.heuristic_objective)?;
    d.set_item("nodes", out.stats.nodes)?;
    d.set_item("time", out.time)?;
    d.set_item("solution", out.solution.map(|s| Solution { inner: s }))?;
    Ok(d)
}

/// Construction heuristic with post-processing.
#[pyfunction]
#[pyo3(signature = (inst, variant_name="grsc-cb", k=1, seed=0, nstarts=heuristics::DEFAULT_NSTARTS))]
fn construct(inst: &Instance, variant_name: &str, k: usize, seed: u64, nstarts: usize) -> PyResult<Solution> {
    let v = variant(variant_name)?;
    Ok(Solution { inner: heuristics::construct(&inst.inner, v, k, seed, nstarts).map_err(err)? })
}

/// Exact optimum by enumeration as `(cost, Solution)`, or None if infeasible.
#[pyfunction]
#[pyo3(signature = (inst, variant_name="grsc-cb"))]
fn brute_force(inst: &Instance, variant_name: &str) -> PyResult<Option<(f64, Solution)>> {
    let v = variant(variant_name)?;
    Ok(oracle::brute_force(&inst.inner, v).map_err(err)?.map(|(c, s)| (c, Solution { inner: s })))
}

/// `(feasible, violations)` where violations are readable strings.
#[pyfunction]
#[pyo3(signature = (inst, variant_name, sol))]
fn validate(inst: &Instance, variant_name: &str, sol: &Solution) -> PyResult<(bool, Vec<String>)> {
    let v = variant(variant_name)?;
    let r = oracle::validate(&inst.inner, v, &sol.inner).map_err(err)?;
    let msgs = r.violations.iter().map(|x| format!("{:?} {} (slack {})", x.family, x.index, x.slack)).collect();
    Ok((r.feasible, msgs))
}

/// Model of the instance in LP format.
#[pyfunction]
#[pyo3(signature = (inst, variant_name="grsc-cb"))]
fn export_lp(inst: &Instance, variant_name: &str) -> PyResult<String> {
    let v = variant(variant_name)?;
    Ok(export_lp_file(&build(&inst.inner, v).map_err(err)?.model))
}

/// SVG map of a solution.
#[pyfunction]
fn render_svg(inst: &Instance, sol: &Solution) -> String {
    render_solution(&inst.inner, &sol.inner, Layout::Auto)
}

#[pymodule]
fn grsc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(export_lp, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    m.add("VARIANTS", VariantId::ALL.iter().map(|v| v.as_str().to_lowercase()).collect::<Vec<_>>())?;
    Ok(())
}

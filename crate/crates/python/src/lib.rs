//! Python bindings: circuits, plans and simulation.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use swarmsim::generators::gen_circuit;
use swarmsim::{Complex64, Gate, GateKind, InitialState, OptLevel, SimConfig, StateVector, UpdateCounter};

fn err(e: swarmsim::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A quantum circuit on a fixed number of qubits.
#[pyclass(name = "Circuit", module = "swarmsim_py")]
pub struct PyCircuit {
    inner: swarmsim::Circuit,
}

#[pymethods]
impl PyCircuit {
    #[new]
    fn new(n: usize) -> Self {
        PyCircuit { inner: swarmsim::Circuit::new(n) }
    }

    /// Parses OpenQASM 2.0 source.
    #[staticmethod]
    fn from_qasm(source: &str) -> PyResult<Self> {
        swarmsim::parse_qasm(source).map(|inner| PyCircuit { inner }).map_err(err)
    }

    /// Builds a benchmark circuit from a spec such as `"qft:10"`.
    #[staticmethod]
    fn generate(spec: &str) -> PyResult<Self> {
        let spec = spec.parse().map_err(err)?;
        gen_circuit(&spec).map(|inner| PyCircuit { inner }).map_err(err)
    }

    /// Appends a standard gate. `qubits` lists controls first, then targets,
    /// as in OpenQASM.
    #[pyo3(signature = (name, qubits, params = Vec::new()))]
    fn add(&mut self, name: &str, qubits: Vec<usize>, params: Vec<f64>) -> PyResult<()> {
        let kind = GateKind::from_qasm_name(&name.to_ascii_lowercase())
            .ok_or_else(|| PyValueError::new_err(format!("unknown gate `{name}`")))?;
        let (nc, _, _) = kind.arity().unwrap_or((0, 0, 0));
        if qubits.len() < nc {
            return Err(PyValueError::new_err(format!("{name} needs at least {nc} qubits")));
        }
        let (controls, targets) = qubits.split_at(nc);
        let gate = Gate::standard(kind, controls.to_vec(), targets.to_vec(), params).map_err(err)?;
        self.inner.push(gate).map_err(err)
    }

    fn to_qasm(&self) -> PyResult<String> {
        swarmsim::emit_qasm(&self.inner).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Circuit(n={}, gates={})", self.inner.n(), self.inner.len())
    }
}

/// An optimized execution plan.
#[pyclass(name = "Plan", module = "swarmsim_py")]
pub struct PyPlan {
    inner: swarmsim::Plan,
    cfg: SimConfig,
}

#[pymethods]
impl PyPlan {
    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// Block count per kind.
    fn histogram(&self) -> BTreeMap<String, usize> {
        self.inner.histogram()
    }

    /// Amplitude updates when every gate sweeps its whole register.
    fn sweep_cost(&self) -> PyResult<u64> {
        self.inner.sweep_cost().map_err(err)
    }

    #[getter]
    fn registers(&self) -> Vec<Vec<usize>> {
        self.inner.registers.clone()
    }

    fn __len__(&self) -> usize {
        self.inner.blocks.len()
    }

    /// Executes the plan from `|0...0>` or a product state such as `"+-01"`.
    #[pyo3(signature = (product_state = None))]
    fn run(&self, product_state: Option<&str>) -> PyResult<PyRunResult> {
        let init = match product_state {
            Some(t) => InitialState::parse_product(t).map_err(err)?,
            None => InitialState::Zero,
        };
        let report = swarmsim::adaptive_sim(init, &self.inner, &self.cfg).map_err(err)?;
        Ok(PyRunResult {
            amplitudes: report.final_state.map(StateVector::into_amps),
            counters: report.counters,
            norm: report.norm,
            histogram: report.histogram,
            seconds: report.wall_time.total,
        })
    }
}

/// Outcome of a plan run.
#[pyclass(name = "RunResult", module = "swarmsim_py")]
pub struct PyRunResult {
    amplitudes: Option<Vec<Complex64>>,
    counters: UpdateCounter,
    #[pyo3(get)]
    norm: f64,
    #[pyo3(get)]
    histogram: BTreeMap<String, usize>,
    #[pyo3(get)]
    seconds: f64,
}

#[pymethods]
impl PyRunResult {
    /// Final amplitudes, or `None` above the retention cap.
    #[getter]
    fn amplitudes(&self) -> Option<Vec<Complex64>> {
        self.amplitudes.clone()
    }

    #[getter]
    fn counters(&self) -> BTreeMap<&'static str, u64> {
        let c = &self.counters;
        BTreeMap::from([
            ("state_updates", c.state_updates),
            ("sweep_updates", c.sweep_updates),
            ("merge_updates", c.merge_updates),
            ("reorder_moves", c.reorder_moves),
            ("sweep_total", c.sweep_total()),
        ])
    }
}

/// Optimizes `circuit` at level `opt` (none, fusion, block, boost, diag, all).
#[pyfunction]
#[pyo3(signature = (circuit, opt = "all", qubits_per_chunk = None, fuse_cap = None, diag_cap = None, boost_div = None))]
fn optimize(
    circuit: &PyCircuit,
    opt: &str,
    qubits_per_chunk: Option<usize>,
    fuse_cap: Option<usize>,
    diag_cap: Option<usize>,
    boost_div: Option<usize>,
) -> PyResult<PyPlan> {
    let level: OptLevel = opt.parse().map_err(err)?;
    let mut cfg = SimConfig::new(circuit.inner.n());
    if let Some(c) = qubits_per_chunk {
        cfg.chunk_qubits = c;
        cfg.fuse_cap = cfg.fuse_cap.min(c.max(1));
    }
    if let Some(f) = fuse_cap {
        cfg.fuse_cap = f;
    }
    if let Some(d) = diag_cap {
        cfg.diag_cap = d;
    }
    if let Some(b) = boost_div {
        cfg.boost_div = b;
    }
    cfg.validate().map_err(err)?;
    let inner = swarmsim::swarm_optimize(&circuit.inner, &cfg, level).map_err(err)?;
    Ok(PyPlan { inner, cfg })
}

/// Optimizes and runs in one call.
#[pyfunction]
#[pyo3(signature = (circuit, opt = "all", product_state = None))]
fn simulate(circuit: &PyCircuit, opt: &str, product_state: Option<&str>) -> PyResult<PyRunResult> {
    optimize(circuit, opt, None, None, None, None)?.run(product_state)
}

/// Gate-by-gate reference amplitudes from `|0...0>`.
#[pyfunction]
fn reference_state(circuit: &PyCircuit) -> PyResult<Vec<Complex64>> {
    let mut sv = StateVector::zero(circuit.inner.n());
    swarmsim::gate_by_gate_sim(&mut sv, &circuit.inner).map_err(err)?;
    Ok(sv.into_amps())
}

#[pymodule]
fn swarmsim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyPlan>()?;
    m.add_class::<PyRunResult>()?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(reference_state, m)?)?;
    Ok(())
}

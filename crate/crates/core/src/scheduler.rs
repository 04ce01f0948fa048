//! Plan execution and the gate-by-gate reference simulator.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::config::SimConfig;
use crate::gate::Gate;
use crate::kernel::{apply_diagonal, apply_gate, reorder_register, run_block, tensor_product, UpdateCounter};
use crate::optimizer::{BlockOp, Plan};
use crate::state::{QubitRegister, StateVector, SubStateVector};
use crate::{Error, Result};

/// Final amplitudes are kept in the report only up to this many qubits.
pub const FINAL_STATE_CAP: usize = 26;

/// Applies every gate in order to the full state (one sweep per gate). This
/// is the reference all other execution paths are checked against.
pub fn gate_by_gate_sim(sv: &mut StateVector, circuit: &Circuit) -> Result<UpdateCounter> {
    if sv.n() != circuit.n() {
        return Err(Error::Config(format!("state has {} qubits, circuit {}", sv.n(), circuit.n())));
    }
    let mut reg = SubStateVector::from_state(std::mem::replace(sv, StateVector::zero(0)));
    let mut counter = UpdateCounter::default();
    let res = circuit.gates().iter().try_for_each(|g| apply_gate(&mut reg, g, &mut counter));
    *sv = reg.into_state_vector()?;
    res.map(|_| counter)
}

/// Where a run starts.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// `|0…0⟩`.
    Zero,
    /// `⊗_q (α_q|0⟩ + β_q|1⟩)`, one factor per qubit, qubit 0 first.
    Product(Vec<[Complex64; 2]>),
    /// An arbitrary state. Plans with more than one initial register are
    /// rejected for it.
    Full(StateVector),
}

impl InitialState {
    /// Factors for the single-qubit tokens `0 1 + - r l` (`r`/`l` are the
    /// `±i` eigenstates of Y).
    pub fn parse_product(tokens: &str) -> Result<InitialState> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = Complex64::new;
        let factors = tokens
            .chars()
            .filter(|ch| !ch.is_whitespace() && *ch != ',')
            .map(|ch| match ch {
                '0' => Ok([c(1.0, 0.0), c(0.0, 0.0)]),
                '1' => Ok([c(0.0, 0.0), c(1.0, 0.0)]),
                '+' => Ok([c(h, 0.0), c(h, 0.0)]),
                '-' => Ok([c(h, 0.0), c(-h, 0.0)]),
                'r' => Ok([c(h, 0.0), c(0.0, h)]),
                'l' => Ok([c(h, 0.0), c(0.0, -h)]),
                other => Err(Error::Config(format!("unknown product-state token `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InitialState::Product(factors))
    }

    /// Materialises the state over all `n` qubits.
    pub fn to_state(&self, n: usize) -> Result<StateVector> {
        match self {
            InitialState::Zero => Ok(StateVector::zero(n)),
            InitialState::Full(sv) => Ok(sv.clone()),
            InitialState::Product(f) => {
                SubStateVector::product((0..n).collect(), f).and_then(SubStateVector::into_state_vector)
            }
        }
    }
}

/// Handler for `Extension` blocks: receives the register and the block's
/// gates.
pub type ExtensionHook = Box<dyn Fn(&mut SubStateVector, &[Gate], &mut UpdateCounter) -> Result<()> + Send + Sync>;

/// Extension handlers keyed by block name.
#[derive(Default)]
pub struct ExtensionRegistry {
    hooks: HashMap<String, ExtensionHook>,
}

impl ExtensionRegistry {
    pub fn new() -> ExtensionRegistry {
        ExtensionRegistry::default()
    }

    pub fn register(&mut self, name: impl Into<String>, hook: ExtensionHook) {
        self.hooks.insert(name.into(), hook);
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct WallTimes {
    /// Seconds for the whole run.
    pub total: f64,
    /// Seconds spent in blocks of each kind.
    pub by_kind: BTreeMap<String, f64>,
}

/// Outcome of one plan execution.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub n: usize,
    /// Block count per kind.
    pub histogram: BTreeMap<String, usize>,
    pub counters: UpdateCounter,
    pub counters_by_kind: BTreeMap<String, UpdateCounter>,
    pub wall_time: WallTimes,
    pub norm: f64,
    /// First few amplitudes as `[re, im]` pairs.
    pub leading_amplitudes: Vec<[f64; 2]>,
    /// Largest deviation from the reference simulator, when checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude_dump: Option<String>,
    #[serde(skip)]
    pub final_state: Option<StateVector>,
}

/// Executes `plan` from `init`.
pub fn adaptive_sim(init: InitialState, plan: &Plan, cfg: &SimConfig) -> Result<RunReport> {
    adaptive_sim_with(init, plan, cfg, &ExtensionRegistry::default())
}

/// Executes `plan`, dispatching on block kind: tensor merges, fused
/// diagonals, reorders and gate blocks go to the kernel, `Extension` blocks
/// to `extensions`. Blocks run one after another; each block's kernel work
/// may fan out over the current rayon pool.
pub fn adaptive_sim_with(
    init: InitialState,
    plan: &Plan,
    cfg: &SimConfig,
    extensions: &ExtensionRegistry,
) -> Result<RunReport> {
    let start = Instant::now();
    let n = plan.n;
    if cfg.qubits != n {
        return Err(Error::Config(format!("config has {} qubits, plan {n}", cfg.qubits)));
    }
    let mut regs: HashMap<usize, SubStateVector> = HashMap::new();
    match init {
        InitialState::Full(sv) => {
            if sv.n() != n {
                return Err(Error::Config(format!("initial state has {} qubits, plan {n}", sv.n())));
            }
            if plan.registers.len() != 1 {
                return Err(Error::Plan("a split plan needs a product initial state".into()));
            }
            let mut reg = SubStateVector::from_state(sv);
            reorder_register(&mut reg, &plan.registers[0], &mut UpdateCounter::default())?;
            regs.insert(0, reg);
        }
        InitialState::Zero => {
            for (id, q) in plan.registers.iter().enumerate() {
                regs.insert(id, SubStateVector::zero(q.clone())?);
            }
        }
        InitialState::Product(f) => {
            if f.len() != n {
                return Err(Error::Config(format!("{} product factors for {n} qubits", f.len())));
            }
            for (id, q) in plan.registers.iter().enumerate() {
                let factors: Vec<[Complex64; 2]> = q.iter().map(|&i| f[i]).collect();
                regs.insert(id, SubStateVector::product(q.clone(), &factors)?);
            }
        }
    }

    let mut counter = UpdateCounter::default();
    let mut by_kind: BTreeMap<String, UpdateCounter> = BTreeMap::new();
    let mut times: BTreeMap<String, f64> = BTreeMap::new();
    let missing = |r: usize| Error::Plan(format!("register {r} is not live"));
    for block in &plan.blocks {
        let t0 = Instant::now();
        let before = counter;
        match &block.op {
            BlockOp::TensorMerge { left, right, into } => {
                let a = regs.remove(left).ok_or_else(|| missing(*left))?;
                let b = regs.remove(right).ok_or_else(|| missing(*right))?;
                let merged = tensor_product(&a, &b, &mut counter)?;
                drop((a, b));
                regs.insert(*into, merged);
            }
            op => {
                let reg = regs.get_mut(&block.register).ok_or_else(|| missing(block.register))?;
                match op {
                    BlockOp::FusedDiagonal(g) => apply_diagonal(reg, &g.gate, &mut counter)?,
                    BlockOp::Reorder(layout) => reorder_register(reg, layout, &mut counter)?,
                    BlockOp::Standard { gates, chunked } | BlockOp::FusedUnitary { gates, chunked } => {
                        if *chunked {
                            let raw: Vec<Gate> = gates.iter().map(|g| g.gate.clone()).collect();
                            run_block(reg, &raw, cfg.chunk_qubits, &mut counter)?;
                        } else {
                            for g in gates {
                                apply_gate(reg, &g.gate, &mut counter)?;
                            }
                        }
                    }
                    BlockOp::Extension { name, gates } => {
                        let hook = extensions.hooks.get(name).ok_or_else(|| Error::UnknownExtension(name.clone()))?;
                        let raw: Vec<Gate> = gates.iter().map(|g| g.gate.clone()).collect();
                        hook(reg, &raw, &mut counter)?;
                    }
                    BlockOp::TensorMerge { .. } => unreachable!(),
                }
            }
        }
        let kind = block.kind().name().to_string();
        *by_kind.entry(kind.clone()).or_default() += counter - before;
        *times.entry(kind).or_default() += t0.elapsed().as_secs_f64();
    }

    if regs.len() != 1 {
        return Err(Error::Plan(format!("{} registers live at the end of the plan", regs.len())));
    }
    let mut reg = regs.into_values().next().expect("one register");
    if reg.num_qubits() != n {
        return Err(Error::Plan(format!("final register holds {} of {n} qubits", reg.num_qubits())));
    }
    let identity: Vec<usize> = (0..n).collect();
    if reg.qubits() != identity.as_slice() {
        reorder_register(&mut reg, &identity, &mut counter)?;
    }
    let state = reg.into_state_vector()?;
    let leading_amplitudes = state.amps().iter().take(8).map(|a| [a.re, a.im]).collect();
    Ok(RunReport {
        schema: 1,
        n,
        histogram: plan.histogram(),
        counters: counter,
        counters_by_kind: by_kind,
        wall_time: WallTimes { total: start.elapsed().as_secs_f64(), by_kind: times },
        norm: state.norm(),
        leading_amplitudes,
        max_deviation: None,
        amplitude_dump: None,
        final_state: (n <= FINAL_STATE_CAP).then_some(state),
    })
}

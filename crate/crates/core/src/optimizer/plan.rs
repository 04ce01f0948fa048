use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::gate::Gate;
use crate::{Error, Result};

/// A gate in a plan together with the circuit positions it was built from.
/// Fused gates list every constituent.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanGate {
    pub gate: Gate,
    pub sources: Vec<usize>,
}

impl PlanGate {
    pub fn new(gate: Gate, source: usize) -> PlanGate {
        PlanGate { gate, sources: vec![source] }
    }

    /// True for gates produced by a fusion pass.
    pub fn is_fused(&self) -> bool {
        self.sources.len() > 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BlockKind {
    Standard,
    FusedUnitary,
    FusedDiagonal,
    TensorMerge,
    Reorder,
    Extension,
}

impl BlockKind {
    pub fn name(self) -> &'static str {
        match self {
            BlockKind::Standard => "STANDARD",
            BlockKind::FusedUnitary => "FUSED_UNITARY",
            BlockKind::FusedDiagonal => "FUSED_DIAGONAL",
            BlockKind::TensorMerge => "TENSOR_MERGE",
            BlockKind::Reorder => "REORDER",
            BlockKind::Extension => "EXTENSION",
        }
    }
}

/// What a block does when executed.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockOp {
    /// Gates applied in order. `chunked` selects block-by-block traversal
    /// over `2^C`-amplitude chunks instead of one sweep per gate.
    Standard { gates: Vec<PlanGate>, chunked: bool },
    /// Like `Standard`, but at least one gate is a fused unitary.
    FusedUnitary { gates: Vec<PlanGate>, chunked: bool },
    FusedDiagonal(PlanGate),
    /// Replaces registers `left` and `right` with their tensor product,
    /// stored as register `into`.
    TensorMerge { left: usize, right: usize, into: usize },
    /// New layout of the register: `layout[p]` is the qubit at position `p`.
    Reorder(Vec<usize>),
    /// Routed to a hook registered under `name` at run time.
    Extension { name: String, gates: Vec<PlanGate> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateBlock {
    /// Register the block acts on (for merges, the register it creates).
    pub register: usize,
    /// Sorted qubit set the block touches.
    pub qubits: Vec<usize>,
    pub op: BlockOp,
    /// Index of the rank-level segment the block came from.
    pub rank_segment: usize,
}

impl GateBlock {
    pub fn kind(&self) -> BlockKind {
        match self.op {
            BlockOp::Standard { .. } => BlockKind::Standard,
            BlockOp::FusedUnitary { .. } => BlockKind::FusedUnitary,
            BlockOp::FusedDiagonal(_) => BlockKind::FusedDiagonal,
            BlockOp::TensorMerge { .. } => BlockKind::TensorMerge,
            BlockOp::Reorder(_) => BlockKind::Reorder,
            BlockOp::Extension { .. } => BlockKind::Extension,
        }
    }

    /// Gates the block applies; empty for merges and reorders.
    pub fn gates(&self) -> &[PlanGate] {
        match &self.op {
            BlockOp::Standard { gates, .. } | BlockOp::FusedUnitary { gates, .. } | BlockOp::Extension { gates, .. } => {
                gates
            }
            BlockOp::FusedDiagonal(g) => std::slice::from_ref(g),
            BlockOp::TensorMerge { .. } | BlockOp::Reorder(_) => &[],
        }
    }

    /// Builds a gate-carrying block, labelled `FusedUnitary` when any gate
    /// is a fused dense unitary.
    pub(crate) fn gate_run(register: usize, gates: Vec<PlanGate>, chunked: bool, rank_segment: usize) -> GateBlock {
        let qubits = sorted_support(gates.iter().map(|g| &g.gate));
        let fused = gates.iter().any(|g| g.is_fused() && !g.gate.is_diagonal());
        let op = if fused { BlockOp::FusedUnitary { gates, chunked } } else { BlockOp::Standard { gates, chunked } };
        GateBlock { register, qubits, op, rank_segment }
    }
}

pub(crate) fn sorted_support<'a>(gates: impl IntoIterator<Item = &'a Gate>) -> Vec<usize> {
    let mask = gates.into_iter().fold(0u64, |m, g| m | g.support_mask());
    crate::bits::qubits_of(mask)
}

/// An executable plan: initial registers (qubit groups, each starting as its
/// own sub-state) and the blocks to run in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub n: usize,
    pub registers: Vec<Vec<usize>>,
    pub blocks: Vec<GateBlock>,
}

impl Plan {
    /// The gate-by-gate plan: one unchunked block holding every gate.
    pub fn naive(circuit: &Circuit) -> Plan {
        let gates: Vec<PlanGate> =
            circuit.gates().iter().enumerate().map(|(i, g)| PlanGate::new(g.clone(), i)).collect();
        let mut blocks = Vec::new();
        if !gates.is_empty() {
            blocks.push(GateBlock::gate_run(0, gates, false, 0));
        }
        Plan { n: circuit.n(), registers: vec![(0..circuit.n()).collect()], blocks }
    }

    pub fn histogram(&self) -> BTreeMap<String, usize> {
        let mut h = BTreeMap::new();
        for b in &self.blocks {
            *h.entry(b.kind().name().to_string()).or_insert(0) += 1;
        }
        h
    }

    pub fn count(&self, kind: BlockKind) -> usize {
        self.blocks.iter().filter(|b| b.kind() == kind).count()
    }

    /// Gates in execution order.
    pub fn gates(&self) -> impl Iterator<Item = &PlanGate> {
        self.blocks.iter().flat_map(|b| b.gates())
    }

    /// Register sizes after replaying the merges, or an error if a merge
    /// names a register that is not live.
    fn register_sizes(&self) -> Result<HashMap<usize, usize>> {
        let mut sizes: HashMap<usize, usize> = self.registers.iter().map(Vec::len).enumerate().collect();
        for b in &self.blocks {
            if let BlockOp::TensorMerge { left, right, into } = b.op {
                let l = sizes.remove(&left).ok_or_else(|| Error::Plan(format!("register {left} is not live")))?;
                let r = sizes.remove(&right).ok_or_else(|| Error::Plan(format!("register {right} is not live")))?;
                sizes.insert(into, l + r);
            }
        }
        Ok(sizes)
    }

    /// Update count the plan incurs when every gate sweeps its whole
    /// register and every merge writes the merged register once.
    pub fn sweep_cost(&self) -> Result<u64> {
        let mut sizes: HashMap<usize, usize> = self.registers.iter().map(Vec::len).enumerate().collect();
        let mut cost = 0u64;
        for b in &self.blocks {
            match b.op {
                BlockOp::TensorMerge { left, right, into } => {
                    let l = sizes.remove(&left).ok_or_else(|| Error::Plan(format!("register {left} is not live")))?;
                    let r = sizes.remove(&right).ok_or_else(|| Error::Plan(format!("register {right} is not live")))?;
                    sizes.insert(into, l + r);
                    cost += 1 << (l + r);
                }
                BlockOp::Reorder(_) => {}
                _ => {
                    let k = *sizes.get(&b.register).ok_or_else(|| Error::Plan(format!("register {} is not live", b.register)))?;
                    cost += (b.gates().len() as u64) << k;
                }
            }
        }
        Ok(cost)
    }

    /// Checks structural invariants: registers partition the qubits, every
    /// gate stays inside its block's qubit set and register, and merges
    /// only join live registers.
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.n];
        for q in self.registers.iter().flatten() {
            if *q >= self.n || std::mem::replace(&mut seen[*q], true) {
                return Err(Error::Plan(format!("initial registers do not partition 0..{}", self.n)));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Plan(format!("initial registers do not partition 0..{}", self.n)));
        }
        let mut live: HashMap<usize, u64> =
            self.registers.iter().enumerate().map(|(i, r)| (i, crate::bits::mask_of(r))).collect();
        for b in &self.blocks {
            match &b.op {
                BlockOp::TensorMerge { left, right, into } => {
                    let l = live.remove(left).ok_or_else(|| Error::Plan(format!("register {left} is not live")))?;
                    let r = live.remove(right).ok_or_else(|| Error::Plan(format!("register {right} is not live")))?;
                    live.insert(*into, l | r);
                }
                BlockOp::Reorder(layout) => {
                    let m = live.get(&b.register).ok_or_else(|| Error::Plan(format!("register {} is not live", b.register)))?;
                    if crate::bits::mask_of(layout) != *m || layout.len() != m.count_ones() as usize {
                        return Err(Error::Plan(format!("reorder layout {layout:?} does not match register {}", b.register)));
                    }
                }
                _ => {
                    let m = live.get(&b.register).ok_or_else(|| Error::Plan(format!("register {} is not live", b.register)))?;
                    let qm = crate::bits::mask_of(&b.qubits);
                    for g in b.gates() {
                        let s = g.gate.support_mask();
                        if s & !qm != 0 || s & !m != 0 {
                            return Err(Error::Plan(format!("gate {} escapes its block", g.gate)));
                        }
                    }
                }
            }
        }
        if live.len() != 1 {
            return Err(Error::Plan(format!("{} registers live at the end", live.len())));
        }
        self.register_sizes().map(|_| ())
    }

    /// Line-oriented text form: a header, then one block per line. Fused
    /// gates list their sources joined by `+`.
    pub fn to_text(&self) -> String {
        let join = |v: &[usize], sep: &str| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep);
        let regs: Vec<String> = self.registers.iter().map(|r| join(r, ",")).collect();
        let mut out = format!("# swarmsim plan v1 n={} registers={}\n", self.n, regs.join(";"));
        for b in &self.blocks {
            write!(out, "{} reg={} qubits={}", b.kind().name(), b.register, join(&b.qubits, ",")).unwrap();
            match &b.op {
                BlockOp::TensorMerge { left, right, .. } => write!(out, " from={left},{right}").unwrap(),
                BlockOp::Reorder(layout) => write!(out, " layout={}", join(layout, ",")).unwrap(),
                op => {
                    let gates: Vec<String> = b.gates().iter().map(|g| join(&g.sources, "+")).collect();
                    write!(out, " gates={}", gates.join(",")).unwrap();
                    match op {
                        BlockOp::Standard { chunked, .. } | BlockOp::FusedUnitary { chunked, .. } => {
                            write!(out, " chunked={chunked}").unwrap()
                        }
                        BlockOp::Extension { name, .. } => write!(out, " name={name}").unwrap(),
                        _ => {}
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

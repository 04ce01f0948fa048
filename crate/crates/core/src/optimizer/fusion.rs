//! Dense and diagonal gate fusion with a per-amplitude cost model.

use num_complex::Complex64;

use super::gbsa::{full_mask, greedy_blocks, Item, Locality};
use super::plan::{sorted_support, PlanGate};
use crate::gate::Gate;
use crate::kernel::{apply_gate, UpdateCounter};
use crate::matrix::Matrix;
use crate::state::SubStateVector;
use crate::{Error, Result};

/// Multiplies the gates, in order, into one unitary over the sorted union
/// of their qubits (controls included).
pub fn fuse_unitaries(gates: &[Gate], cap: usize) -> Result<Gate> {
    if gates.is_empty() {
        return Err(Error::InvalidGate("nothing to fuse".into()));
    }
    let qubits = sorted_support(gates);
    if qubits.len() > cap {
        return Err(Error::LimitExceeded { needed: qubits.len(), limit: cap });
    }
    let t = qubits.len();
    let dim = 1usize << t;
    // Row-major identity viewed as a 2t-qubit register: the low t bits index
    // columns (placeholder qubits), the high t bits index rows (the real
    // qubits), so applying a gate to the register left-multiplies the matrix.
    let layout: Vec<usize> = (0..t).map(|j| usize::MAX - j).chain(qubits.iter().copied()).collect();
    let mut reg = SubStateVector::new(layout, Matrix::identity(dim).data().to_vec())?;
    let mut scratch = UpdateCounter::default();
    for g in gates {
        apply_gate(&mut reg, g, &mut scratch)?;
    }
    Gate::unitary(qubits, Matrix::from_vec(dim, reg.amps().to_vec())?)
}

/// Multiplies diagonal gates into one diagonal over the sorted union of
/// their qubits.
pub fn fuse_diagonals(gates: &[Gate], cap: usize) -> Result<Gate> {
    if gates.is_empty() {
        return Err(Error::InvalidGate("nothing to fuse".into()));
    }
    if let Some(g) = gates.iter().find(|g| !g.is_diagonal()) {
        return Err(Error::NotDiagonal(g.kind().name().into()));
    }
    let qubits = sorted_support(gates);
    if qubits.len() > cap {
        return Err(Error::LimitExceeded { needed: qubits.len(), limit: cap });
    }
    let mut entries = vec![Complex64::new(1.0, 0.0); 1 << qubits.len()];
    for g in gates {
        for (e, p) in entries.iter_mut().zip(g.phases_over(&qubits)?) {
            *e *= p;
        }
    }
    Gate::diagonal(qubits, entries)
}

/// Fixed per-gate overhead, in units of one complex multiply-add per
/// amplitude, for a gate whose register is cache resident.
pub(crate) const IN_CACHE_SWEEP: f64 = 8.0;
/// Per-gate overhead for a full sweep over a register that does not fit in
/// cache.
pub(crate) const MEMORY_SWEEP: f64 = 32.0;

fn gate_cost(g: &Gate, sweep: f64) -> f64 {
    if g.is_diagonal() {
        sweep + 1.0
    } else {
        sweep + (1u64 << g.targets().len()) as f64 / (1u64 << g.controls().len()) as f64
    }
}

pub(crate) struct Fuser {
    pub cap: usize,
    pub diag_cap: usize,
    /// Qubits a dense fused gate may touch.
    pub local: u64,
    pub sweep: f64,
}

impl Fuser {
    fn items(&self, gates: &[PlanGate], limit: usize) -> Vec<Item> {
        gates
            .iter()
            .map(|g| {
                let s = g.gate.support_mask();
                let loc = if s & !self.local == 0 && s.count_ones() as usize <= limit {
                    Locality::Mask(s)
                } else {
                    Locality::Solo
                };
                Item::of(&g.gate, loc)
            })
            .collect()
    }

    /// Groups gates into fusion candidates of at most `cap` qubits and
    /// replaces each group whose fused form is cheaper.
    pub fn run(&self, gates: Vec<PlanGate>) -> Result<Vec<PlanGate>> {
        self.regroup(gates, self.cap)
    }

    fn regroup(&self, gates: Vec<PlanGate>, limit: usize) -> Result<Vec<PlanGate>> {
        let groups = greedy_blocks(&self.items(&gates, limit), limit, full_mask(64))?;
        let mut slots: Vec<Option<PlanGate>> = gates.into_iter().map(Some).collect();
        let mut out = Vec::with_capacity(slots.len());
        for idx in groups {
            let group: Vec<PlanGate> = idx.iter().map(|&i| slots[i].take().expect("each gate in one group")).collect();
            out.extend(self.try_group(group, limit)?);
        }
        Ok(out)
    }

    fn try_group(&self, group: Vec<PlanGate>, limit: usize) -> Result<Vec<PlanGate>> {
        if group.len() < 2 {
            return Ok(group);
        }
        let width = sorted_support(group.iter().map(|g| &g.gate)).len();
        let all_diag = group.iter().all(|g| g.gate.is_diagonal());
        let unfused: f64 = group.iter().map(|g| gate_cost(&g.gate, self.sweep)).sum();
        let fused = self.sweep + if all_diag { 1.0 } else { (1u64 << width) as f64 };
        if fused < unfused && (!all_diag || width <= self.diag_cap) {
            let raw: Vec<Gate> = group.iter().map(|g| g.gate.clone()).collect();
            let gate = if all_diag { fuse_diagonals(&raw, self.diag_cap)? } else { fuse_unitaries(&raw, self.cap)? };
            let mut sources: Vec<usize> = group.into_iter().flat_map(|g| g.sources).collect();
            sources.sort_unstable();
            return Ok(vec![PlanGate { gate, sources }]);
        }
        if limit > 1 {
            let narrower = limit.min(width) - 1;
            if narrower >= 1 {
                return self.regroup(group, narrower);
            }
        }
        Ok(group)
    }
}

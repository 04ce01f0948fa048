//! Gate application, chunked block traversal, qubit reordering and tensor
//! product merges, all instrumented with an [`UpdateCounter`].

mod ops;
mod reorder;
mod tensor;

use std::ops::{Add, AddAssign, Sub};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gate::{check_unit_modulus, Gate};
use crate::state::QubitRegister;
use crate::{Error, Result};

pub(crate) use ops::LocalOp;
pub use reorder::{reorder_qubits, reorder_register};
pub use tensor::tensor_product;

/// Amplitude-write tallies.
///
/// `state_updates` counts only amplitudes a gate actually touches (controlled
/// gates skip the control-off half). `sweep_updates` charges every gate
/// a full sweep of its register, the accounting under which a 40-gate,
/// 8-qubit circuit costs `40 × 2^8`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateCounter {
    pub state_updates: u64,
    pub sweep_updates: u64,
    pub merge_updates: u64,
    /// Amplitude moves done by qubit reorders. Not part of either total.
    pub reorder_moves: u64,
}

impl UpdateCounter {
    pub fn total(&self) -> u64 {
        self.state_updates + self.merge_updates
    }

    pub fn sweep_total(&self) -> u64 {
        self.sweep_updates + self.merge_updates
    }

    pub(crate) fn record_gate(&mut self, k: usize, controls: usize) {
        self.state_updates += 1 << (k - controls);
        self.sweep_updates += 1 << k;
    }
}

impl Add for UpdateCounter {
    type Output = UpdateCounter;
    fn add(self, o: UpdateCounter) -> UpdateCounter {
        UpdateCounter {
            state_updates: self.state_updates + o.state_updates,
            sweep_updates: self.sweep_updates + o.sweep_updates,
            merge_updates: self.merge_updates + o.merge_updates,
            reorder_moves: self.reorder_moves + o.reorder_moves,
        }
    }
}

impl AddAssign for UpdateCounter {
    fn add_assign(&mut self, o: UpdateCounter) {
        *self = *self + o;
    }
}

impl Sub for UpdateCounter {
    type Output = UpdateCounter;
    fn sub(self, o: UpdateCounter) -> UpdateCounter {
        UpdateCounter {
            state_updates: self.state_updates - o.state_updates,
            sweep_updates: self.sweep_updates - o.sweep_updates,
            merge_updates: self.merge_updates - o.merge_updates,
            reorder_moves: self.reorder_moves - o.reorder_moves,
        }
    }
}

fn lower<R: QubitRegister + ?Sized>(reg: &R, gate: &Gate) -> Result<LocalOp> {
    LocalOp::lower(gate, reg.num_qubits(), |q| reg.position_of(q))
}

/// Applies `gate` to every amplitude group of the register whose control bits
/// are all 1.
pub fn apply_gate<R: QubitRegister + ?Sized>(reg: &mut R, gate: &Gate, counter: &mut UpdateCounter) -> Result<()> {
    let op = lower(reg, gate)?;
    op.apply_full(reg.amplitudes_mut());
    counter.record_gate(reg.num_qubits(), op.num_controls());
    Ok(())
}

/// Multiplies each amplitude by the phase its target bits select.
pub fn apply_diagonal<R: QubitRegister + ?Sized>(reg: &mut R, gate: &Gate, counter: &mut UpdateCounter) -> Result<()> {
    let diag = gate.target_diagonal().ok_or_else(|| Error::NotDiagonal(gate.kind().name().into()))?;
    check_unit_modulus(&diag)?;
    apply_gate(reg, gate, counter)
}

/// Runs a gate block chunk by chunk: the register is cut into `2^C`-amplitude
/// chunks and each chunk goes through every gate before the next chunk
/// starts. Non-diagonal gates must sit in the low `C` positions; diagonal
/// gates may touch any qubit since their phase only depends on the global
/// index.
pub fn run_block<R: QubitRegister + ?Sized>(
    reg: &mut R,
    gates: &[Gate],
    chunk_qubits: usize,
    counter: &mut UpdateCounter,
) -> Result<()> {
    let k = reg.num_qubits();
    let chunk_bits = chunk_qubits.min(k);
    let ops = gates.iter().map(|g| Ok((lower(reg, g)?, g))).collect::<Result<Vec<_>>>()?;
    ops::check_chunk_local(&ops, chunk_bits, |q| reg.position_of(q).unwrap_or(usize::MAX))?;
    let ops: Vec<LocalOp> = ops.into_iter().map(|(op, _)| op).collect();
    let chunk = 1usize << chunk_bits;
    let amps = reg.amplitudes_mut();
    let work = |(ci, c): (usize, &mut [Complex64])| {
        for op in &ops {
            op.apply_chunk(c, ci * chunk);
        }
    };
    if amps.len() > chunk && rayon::current_num_threads() > 1 {
        amps.par_chunks_mut(chunk).enumerate().for_each(work);
    } else {
        amps.chunks_mut(chunk).enumerate().for_each(work);
    }
    for op in &ops {
        counter.record_gate(k, op.num_controls());
    }
    Ok(())
}

#[cfg(test)]
mod tests;

//! Greedy gate-block search.

use std::collections::VecDeque;

use super::fusion::fuse_unitaries;
use super::plan::{BlockOp, GateBlock, PlanGate};
use crate::circuit::Circuit;
use crate::{Error, Result};

/// How many skipped gates one pass may look past before closing a block.
pub(crate) const LOOKAHEAD: usize = 512;

/// Which qubits a gate claims in a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Locality {
    /// Counts against the block's qubit budget.
    Mask(u64),
    /// Joins any block (diagonal gates inside a cache block).
    Free,
    /// Always a block of its own.
    Solo,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Item {
    pub support: u64,
    pub diagonal: bool,
    pub locality: Locality,
}

impl Item {
    pub fn of(g: &crate::Gate, locality: Locality) -> Item {
        Item { support: g.support_mask(), diagonal: g.is_diagonal(), locality }
    }
}

/// Partitions `items` into blocks of at most `limit` claimed qubits.
///
/// Each pass scans pending gates in order. A gate joins the current block if
/// it fits and commutes with every gate skipped earlier in the pass (disjoint
/// supports, or both diagonal); otherwise it is skipped and its qubits become
/// blocked. A pass ends after `LOOKAHEAD` skips or once every qubit is
/// blocked for dense gates.
pub(crate) fn greedy_blocks(items: &[Item], limit: usize, full: u64) -> Result<Vec<Vec<usize>>> {
    for it in items {
        if let Locality::Mask(m) = it.locality {
            if m.count_ones() as usize > limit {
                return Err(Error::LimitExceeded { needed: m.count_ones() as usize, limit });
            }
        }
    }
    let mut pending: VecDeque<usize> = (0..items.len()).collect();
    let mut blocks = Vec::new();
    let mut skipped = Vec::new();
    while !pending.is_empty() {
        let mut block = Vec::new();
        let (mut set, mut blocked_any, mut blocked_dense) = (0u64, 0u64, 0u64);
        skipped.clear();
        while let Some(i) = pending.pop_front() {
            let it = items[i];
            let commutes = it.support & if it.diagonal { blocked_dense } else { blocked_any } == 0;
            let fits = match it.locality {
                Locality::Mask(m) => ((set | m).count_ones() as usize) <= limit,
                Locality::Free => true,
                Locality::Solo => block.is_empty(),
            };
            if commutes && fits {
                block.push(i);
                match it.locality {
                    Locality::Mask(m) => set |= m,
                    Locality::Free => {}
                    Locality::Solo => break,
                }
            } else {
                skipped.push(i);
                blocked_any |= it.support;
                if !it.diagonal {
                    blocked_dense |= it.support;
                }
                if skipped.len() >= LOOKAHEAD || blocked_dense & full == full {
                    break;
                }
            }
        }
        for &i in skipped.iter().rev() {
            pending.push_front(i);
        }
        blocks.push(block);
    }
    Ok(blocks)
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Gate-block search over a circuit: blocks touch at most `limit` qubits.
/// With `fuse`, each block is collapsed into one fused unitary over its
/// qubits, so `limit` doubles as the fusion cap.
pub fn gbsa(circuit: &Circuit, limit: usize, fuse: bool) -> Result<Vec<GateBlock>> {
    let n = circuit.n();
    if limit == 0 || limit > n.max(1) {
        return Err(Error::Config(format!("block limit {limit} outside 1..={n}")));
    }
    let items: Vec<Item> =
        circuit.gates().iter().map(|g| Item::of(g, Locality::Mask(g.support_mask()))).collect();
    let groups = greedy_blocks(&items, limit, full_mask(n))?;
    groups
        .into_iter()
        .map(|idx| {
            let gates: Vec<PlanGate> = idx.iter().map(|&i| PlanGate::new(circuit.gates()[i].clone(), i)).collect();
            if fuse {
                let raw: Vec<_> = gates.iter().map(|g| g.gate.clone()).collect();
                let fused = fuse_unitaries(&raw, limit)?;
                let qubits = fused.targets().to_vec();
                let pg = PlanGate { gate: fused, sources: idx };
                Ok(GateBlock { register: 0, qubits, op: BlockOp::FusedUnitary { gates: vec![pg], chunked: false }, rank_segment: 0 })
            } else {
                Ok(GateBlock::gate_run(0, gates, false, 0))
            }
        })
        .collect()
}

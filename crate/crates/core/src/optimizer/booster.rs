//! Merge booster: simulate qubit groups as separate sub-states while they
//! are unentangled, then join them pairwise by tensor products.

use std::collections::VecDeque;

use super::plan::{BlockOp, GateBlock, Plan, PlanGate};
use crate::bits::mask_of;
use crate::circuit::Circuit;
use crate::config::SimConfig;
use crate::{Error, Result};

/// Splits `n` qubits into group sizes by recursive halving: pieces no larger
/// than `div_size` are emitted left to right, and an odd count rounds the
/// second half up. The sizes always sum to `n`.
pub fn divider(n: usize, div_size: usize) -> Vec<usize> {
    fn divide(n: usize, div_size: usize, que: &mut Vec<usize>) {
        if n <= div_size {
            que.push(n);
            return;
        }
        divide(n >> 1, div_size, que);
        let n = if n & 1 == 1 { n + 1 } else { n };
        divide(n >> 1, div_size, que);
    }
    let mut que = Vec::new();
    divide(n, div_size.max(1), &mut que);
    // Rounding up the second half of an odd count exactly restores the
    // floor lost by the first half, so no overshoot is possible; keep the
    // sum correct regardless.
    let sum: usize = que.iter().sum();
    if sum > n {
        let last = que.last_mut().expect("non-empty");
        *last -= (sum - n).min(*last);
    }
    que
}

/// Group bookkeeping across merge rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitGroupState {
    /// Sizes of the live groups, in qubit order.
    pub queue: VecDeque<usize>,
    /// Sizes produced by the most recent merge round.
    pub merged: Vec<usize>,
    /// Register id owning each qubit.
    pub group_of: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoostStep {
    Local { register: usize, gates: Vec<PlanGate> },
    Merge { left: usize, right: usize, into: usize },
}

/// Output of the booster before downstream passes run on each step.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostSchedule {
    pub registers: Vec<Vec<usize>>,
    pub steps: Vec<BoostStep>,
    pub final_register: usize,
    pub state: QubitGroupState,
}

impl BoostSchedule {
    /// Full-sweep update count: every gate touches its whole register once,
    /// every merge writes the merged register once.
    pub fn sweep_cost(&self) -> u64 {
        let mut sizes: Vec<usize> = self.registers.iter().map(Vec::len).collect();
        let mut cost = 0u64;
        for s in &self.steps {
            match *s {
                BoostStep::Local { register, ref gates } => cost += (gates.len() as u64) << sizes[register],
                BoostStep::Merge { left, right, into } => {
                    let k = sizes[left] + sizes[right];
                    if sizes.len() <= into {
                        sizes.resize(into + 1, 0);
                    }
                    sizes[into] = k;
                    cost += 1 << k;
                }
            }
        }
        cost
    }
}

/// Schedules `gates` over contiguous qubit groups of `div_size`-bounded
/// sizes.
///
/// Each round makes one pass over the unscheduled gates. A gate is placed in
/// its group's block when all its qubits live in one group and it commutes
/// with every gate left behind earlier in the pass; otherwise it stays and
/// blocks its qubits. After the pass, adjacent groups are merged in pairs
/// (an odd last group waits for the next round). The last round runs on the
/// single remaining group and takes every gate left.
pub fn boost_schedule(gates: &[PlanGate], n: usize, div_size: usize) -> Result<BoostSchedule> {
    let sizes = divider(n, div_size);
    let mut registers = Vec::new();
    let mut live: Vec<(usize, u64)> = Vec::new();
    let mut group_of = vec![0usize; n];
    let mut start = 0;
    for (id, &s) in sizes.iter().enumerate() {
        let qubits: Vec<usize> = (start..start + s).collect();
        for &q in &qubits {
            group_of[q] = id;
        }
        live.push((id, mask_of(&qubits)));
        registers.push(qubits);
        start += s;
    }
    let mut next_id = registers.len();
    let mut slot_of: Vec<usize> = (0..live.len()).collect();
    let mut steps = Vec::new();
    let mut merged = Vec::new();
    let mut remaining: Vec<usize> = (0..gates.len()).collect();
    loop {
        let mut per_group: Vec<Vec<usize>> = vec![Vec::new(); live.len()];
        let (mut blocked_any, mut blocked_dense) = (0u64, 0u64);
        let mut rest = Vec::new();
        for i in remaining {
            let g = &gates[i].gate;
            let s = g.support_mask();
            let q0 = s.trailing_zeros() as usize;
            if q0 >= n {
                return Err(Error::QubitOutOfRange { qubit: g.max_qubit(), n });
            }
            let slot = slot_of[group_of[q0]];
            let local = s & !live[slot].1 == 0;
            let commutes = s & if g.is_diagonal() { blocked_dense } else { blocked_any } == 0;
            if local && commutes {
                per_group[slot].push(i);
            } else {
                rest.push(i);
                blocked_any |= s;
                if !g.is_diagonal() {
                    blocked_dense |= s;
                }
            }
        }
        for (slot, idx) in per_group.into_iter().enumerate() {
            if !idx.is_empty() {
                steps.push(BoostStep::Local {
                    register: live[slot].0,
                    gates: idx.into_iter().map(|i| gates[i].clone()).collect(),
                });
            }
        }
        remaining = rest;
        if live.len() == 1 {
            debug_assert!(remaining.is_empty());
            break;
        }
        let mut next_live = Vec::with_capacity(live.len().div_ceil(2));
        merged.clear();
        for pair in live.chunks(2) {
            if let [(l, lm), (r, rm)] = *pair {
                steps.push(BoostStep::Merge { left: l, right: r, into: next_id });
                next_live.push((next_id, lm | rm));
                merged.push((lm | rm).count_ones() as usize);
                next_id += 1;
            } else {
                next_live.push(pair[0]);
            }
        }
        live = next_live;
        slot_of.resize(next_id, 0);
        for (slot, &(id, m)) in live.iter().enumerate() {
            slot_of[id] = slot;
            for q in crate::bits::qubits_of(m) {
                group_of[q] = id;
            }
        }
    }
    let state = QubitGroupState {
        queue: live.iter().map(|(_, m)| m.count_ones() as usize).collect(),
        merged,
        group_of,
    };
    Ok(BoostSchedule { registers, steps, final_register: live[0].0, state })
}

/// Booster plan for a circuit: per-group blocks and tensor merges, with no
/// further passes applied. Group sizes start at `cfg.division_size()`.
pub fn merge_booster(circuit: &Circuit, cfg: &SimConfig) -> Result<Plan> {
    cfg.validate()?;
    if cfg.qubits != circuit.n() {
        return Err(Error::Config(format!("config has {} qubits, circuit {}", cfg.qubits, circuit.n())));
    }
    let gates: Vec<PlanGate> = circuit.gates().iter().enumerate().map(|(i, g)| PlanGate::new(g.clone(), i)).collect();
    let sched = boost_schedule(&gates, circuit.n(), cfg.division_size())?;
    let mut qubits_of_reg: Vec<Vec<usize>> = sched.registers.clone();
    let mut blocks = Vec::new();
    for step in sched.steps {
        match step {
            BoostStep::Local { register, gates } => blocks.push(GateBlock::gate_run(register, gates, false, 0)),
            BoostStep::Merge { left, right, into } => {
                let mut q: Vec<usize> = qubits_of_reg[left].iter().chain(&qubits_of_reg[right]).copied().collect();
                q.sort_unstable();
                if qubits_of_reg.len() <= into {
                    qubits_of_reg.resize(into + 1, Vec::new());
                }
                qubits_of_reg[into] = q.clone();
                blocks.push(GateBlock { register: into, qubits: q, op: BlockOp::TensorMerge { left, right, into }, rank_segment: 0 });
            }
        }
    }
    Ok(Plan { n: circuit.n(), registers: sched.registers, blocks })
}

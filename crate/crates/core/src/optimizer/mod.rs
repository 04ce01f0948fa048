//! Circuit optimizer: turns a circuit into a [`Plan`] of gate blocks.
//!
//! [`swarm_optimize`] runs the passes in this order:
//!
//! 1. rank-level block search over the low `N − R` qubits (annotation only),
//! 2. the merge booster on the first rank segment,
//! 3. per register phase: the diagonal detector, cache blocking with
//!    reorders so dense gates sit in the low `C` positions, and cost-based
//!    fusion inside each cache block.
//!
//! Each pass can be switched off through [`OptLevel`].

mod booster;
mod detector;
mod fusion;
mod gbsa;
mod plan;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

pub use booster::{boost_schedule, divider, merge_booster, BoostSchedule, BoostStep, QubitGroupState};
pub use detector::{diagonal_detector, DetectorOutput, DetectorRun, DetectorState};
pub use fusion::{fuse_diagonals, fuse_unitaries};
pub use gbsa::gbsa;
pub use plan::{BlockKind, BlockOp, GateBlock, Plan, PlanGate};

use crate::bits::{mask_of, qubits_of};
use crate::circuit::Circuit;
use crate::config::SimConfig;
use crate::{Error, Result};
use fusion::{Fuser, IN_CACHE_SWEEP, MEMORY_SWEEP};
use gbsa::{full_mask, greedy_blocks, Item, Locality};

/// Which passes run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OptLevel {
    /// Cache blocking with chunked traversal and reorders.
    pub blocking: bool,
    /// Cost-based unitary fusion.
    pub fusion: bool,
    /// Merge booster.
    pub boost: bool,
    /// Diagonal detector.
    pub diag: bool,
}

impl OptLevel {
    pub const NONE: OptLevel = OptLevel { blocking: false, fusion: false, boost: false, diag: false };
    pub const FUSION: OptLevel = OptLevel { blocking: false, fusion: true, boost: false, diag: false };
    pub const BLOCK: OptLevel = OptLevel { blocking: true, fusion: false, boost: false, diag: false };
    pub const BOOST: OptLevel = OptLevel { blocking: true, fusion: false, boost: true, diag: false };
    pub const DIAG: OptLevel = OptLevel { blocking: true, fusion: false, boost: false, diag: true };
    pub const ALL: OptLevel = OptLevel { blocking: true, fusion: true, boost: true, diag: true };

    /// Named presets accepted by [`OptLevel::from_str`].
    pub const PRESETS: [(&'static str, OptLevel); 6] = [
        ("none", OptLevel::NONE),
        ("fusion", OptLevel::FUSION),
        ("block", OptLevel::BLOCK),
        ("boost", OptLevel::BOOST),
        ("diag", OptLevel::DIAG),
        ("all", OptLevel::ALL),
    ];

    pub fn name(&self) -> Option<&'static str> {
        OptLevel::PRESETS.iter().find(|(_, l)| l == self).map(|(n, _)| *n)
    }
}

impl FromStr for OptLevel {
    type Err = Error;
    fn from_str(s: &str) -> Result<OptLevel> {
        OptLevel::PRESETS
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, l)| *l)
            .ok_or_else(|| Error::Config(format!("unknown optimization level `{s}`")))
    }
}

impl fmt::Display for OptLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(n) => f.write_str(n),
            None => write!(
                f,
                "custom(blocking={},fusion={},boost={},diag={})",
                self.blocking, self.fusion, self.boost, self.diag
            ),
        }
    }
}

/// Optimizes `circuit` into an executable plan. The booster assumes the run
/// starts from a product state.
pub fn swarm_optimize(circuit: &Circuit, cfg: &SimConfig, level: OptLevel) -> Result<Plan> {
    cfg.validate()?;
    let n = circuit.n();
    if cfg.qubits != n {
        return Err(Error::Config(format!("config has {} qubits, circuit {n}", cfg.qubits)));
    }
    let gates: Vec<PlanGate> = circuit.gates().iter().enumerate().map(|(i, g)| PlanGate::new(g.clone(), i)).collect();
    let segments = rank_segments(gates, n, cfg.rank_qubits)?;

    let mut b = Builder { cfg, level, n, blocks: Vec::new(), layouts: HashMap::new() };
    let mut registers = vec![(0..n).collect::<Vec<_>>()];
    let mut current = 0;
    let mut segments = segments.into_iter().enumerate();
    if let Some((seg, first)) = segments.next() {
        let boosted = if level.boost && n > 1 {
            let sched = boost_schedule(&first, n, cfg.division_size())?;
            let naive = (first.len() as u64) << n;
            (sched.registers.len() > 1 && sched.sweep_cost() < naive).then_some(sched)
        } else {
            None
        };
        match boosted {
            Some(sched) => {
                registers = sched.registers.clone();
                for (id, r) in registers.iter().enumerate() {
                    b.layouts.insert(id, r.clone());
                }
                for step in sched.steps {
                    match step {
                        BoostStep::Local { register, gates } => b.emit_phase(register, gates, seg)?,
                        BoostStep::Merge { left, right, into } => b.merge(left, right, into, seg),
                    }
                }
                current = sched.final_register;
            }
            None => {
                b.layouts.insert(0, registers[0].clone());
                b.emit_phase(0, first, seg)?;
            }
        }
    } else {
        b.layouts.insert(0, registers[0].clone());
    }
    for (seg, gates) in segments {
        b.emit_phase(current, gates, seg)?;
    }
    let identity: Vec<usize> = (0..n).collect();
    if b.layouts[&current] != identity {
        let seg = b.blocks.last().map_or(0, |x| x.rank_segment);
        b.blocks.push(GateBlock { register: current, qubits: identity.clone(), op: BlockOp::Reorder(identity), rank_segment: seg });
    }
    Ok(Plan { n, registers, blocks: b.blocks })
}

/// Splits the gate list into segments whose gates fit in `n − r` qubits.
fn rank_segments(gates: Vec<PlanGate>, n: usize, r: usize) -> Result<Vec<Vec<PlanGate>>> {
    if r == 0 || gates.is_empty() {
        return Ok(if gates.is_empty() { Vec::new() } else { vec![gates] });
    }
    let widest = gates.iter().map(|g| g.gate.support_mask().count_ones() as usize).max().unwrap_or(1);
    let limit = (n - r).max(widest).max(1);
    let items: Vec<Item> = gates.iter().map(|g| Item::of(&g.gate, Locality::Mask(g.gate.support_mask()))).collect();
    let groups = greedy_blocks(&items, limit, full_mask(n))?;
    let mut slots: Vec<Option<PlanGate>> = gates.into_iter().map(Some).collect();
    Ok(groups.into_iter().map(|idx| idx.into_iter().map(|i| slots[i].take().expect("once")).collect()).collect())
}

struct Builder<'a> {
    cfg: &'a SimConfig,
    level: OptLevel,
    n: usize,
    blocks: Vec<GateBlock>,
    /// Current layout of every live register.
    layouts: HashMap<usize, Vec<usize>>,
}

impl Builder<'_> {
    fn merge(&mut self, left: usize, right: usize, into: usize, seg: usize) {
        let l = self.layouts.remove(&left).expect("live register");
        let r = self.layouts.remove(&right).expect("live register");
        let mut q: Vec<usize> = l.into_iter().chain(r).collect();
        q.sort_unstable();
        self.layouts.insert(into, q.clone());
        self.blocks.push(GateBlock { register: into, qubits: q, op: BlockOp::TensorMerge { left, right, into }, rank_segment: seg });
    }

    fn emit_phase(&mut self, reg: usize, gates: Vec<PlanGate>, seg: usize) -> Result<()> {
        if gates.is_empty() {
            return Ok(());
        }
        let cfg = self.cfg;
        let k = self.layouts[&reg].len();
        let gates = if self.level.diag { diagonal_detector(&gates, self.n, cfg.diag_cap)?.gates } else { gates };
        if !self.level.blocking {
            let gates = if self.level.fusion {
                let sweep = if k <= cfg.chunk_qubits { IN_CACHE_SWEEP } else { MEMORY_SWEEP };
                Fuser { cap: cfg.fuse_cap, diag_cap: cfg.diag_cap, local: u64::MAX, sweep }.run(gates)?
            } else {
                gates
            };
            self.emit_runs(reg, gates, seg);
            return Ok(());
        }

        let c = cfg.chunk_qubits.min(k);
        let chunked = k > c;
        let items: Vec<Item> = gates
            .iter()
            .map(|g| {
                let loc = if g.gate.is_diagonal() { Locality::Free } else { Locality::Mask(g.gate.support_mask()) };
                Item::of(&g.gate, loc)
            })
            .collect();
        let groups = greedy_blocks(&items, c, mask_of(&self.layouts[&reg]))?;
        let dense: Vec<u64> = groups
            .iter()
            .map(|idx| idx.iter().filter(|&&i| !gates[i].gate.is_diagonal()).fold(0, |m, &i| m | gates[i].gate.support_mask()))
            .collect();
        let mut uses: Vec<VecDeque<usize>> = vec![VecDeque::new(); self.n];
        for (bi, &m) in dense.iter().enumerate() {
            for q in qubits_of(m) {
                uses[q].push_back(bi);
            }
        }
        let mut slots: Vec<Option<PlanGate>> = gates.into_iter().map(Some).collect();
        for (bi, idx) in groups.into_iter().enumerate() {
            let mut block: Vec<PlanGate> = idx.iter().map(|&i| slots[i].take().expect("once")).collect();
            for u in uses.iter_mut() {
                while u.front().is_some_and(|&x| x <= bi) {
                    u.pop_front();
                }
            }
            if block.len() == 1 && block[0].is_fused() && block[0].gate.is_diagonal() {
                let g = block.pop().expect("one gate");
                self.blocks.push(GateBlock {
                    register: reg,
                    qubits: g.gate.targets().to_vec(),
                    op: BlockOp::FusedDiagonal(g),
                    rank_segment: seg,
                });
                continue;
            }
            if chunked {
                self.make_local(reg, dense[bi], c, &uses, seg);
            }
            if self.level.fusion {
                let local = mask_of(&self.layouts[&reg][..c]);
                block = Fuser { cap: cfg.fuse_cap.min(c), diag_cap: cfg.diag_cap, local, sweep: IN_CACHE_SWEEP }.run(block)?;
            }
            if chunked {
                self.blocks.push(GateBlock::gate_run(reg, block, true, seg));
            } else {
                // The register fits in one chunk, so every gate is a sweep
                // of it anyway and fused diagonals can stand alone.
                self.emit_runs(reg, block, seg);
            }
        }
        Ok(())
    }

    /// Unchunked emission: fused diagonals become their own blocks, every
    /// other maximal run of gates one block.
    fn emit_runs(&mut self, reg: usize, gates: Vec<PlanGate>, seg: usize) {
        let mut run = Vec::new();
        for g in gates {
            if g.is_fused() && g.gate.is_diagonal() {
                if !run.is_empty() {
                    self.blocks.push(GateBlock::gate_run(reg, std::mem::take(&mut run), false, seg));
                }
                let qubits = g.gate.targets().to_vec();
                self.blocks.push(GateBlock { register: reg, qubits, op: BlockOp::FusedDiagonal(g), rank_segment: seg });
            } else {
                run.push(g);
            }
        }
        if !run.is_empty() {
            self.blocks.push(GateBlock::gate_run(reg, run, false, seg));
        }
    }

    /// Moves the qubits of `need` into the low `c` positions of the register,
    /// evicting the resident qubits whose next use is furthest away.
    fn make_local(&mut self, reg: usize, need: u64, c: usize, uses: &[VecDeque<usize>], seg: usize) {
        let layout = self.layouts.get_mut(&reg).expect("live register");
        let missing: Vec<usize> = (c..layout.len()).filter(|&p| need >> layout[p] & 1 == 1).collect();
        if missing.is_empty() {
            return;
        }
        let mut victims: Vec<usize> = (0..c).filter(|&p| need >> layout[p] & 1 == 0).collect();
        let next = |p: usize| uses[layout[p]].front().copied().unwrap_or(usize::MAX);
        victims.sort_by_key(|&p| std::cmp::Reverse(next(p)));
        for (&hi, &lo) in missing.iter().zip(&victims) {
            layout.swap(hi, lo);
        }
        let mut qubits = layout.clone();
        qubits.sort_unstable();
        self.blocks.push(GateBlock { register: reg, qubits, op: BlockOp::Reorder(layout.clone()), rank_segment: seg });
    }
}

//! Diagonal detector: pulls commuting diagonal gates together and fuses
//! them.

use super::fusion::fuse_diagonals;
use super::plan::PlanGate;
use crate::bits::qubits_of;
use crate::Result;

/// Working state of one detector run.
#[derive(Debug, Clone, Default)]
pub struct DetectorState {
    /// Gates disjoint from everything pending; emitted before the fused gate.
    pub res_list: Vec<PlanGate>,
    /// Diagonal gates to fuse.
    pub diag_list: Vec<PlanGate>,
    /// Non-diagonal gates that overlap pending work; emitted after the fused
    /// gate.
    pub u_list: Vec<PlanGate>,
    /// Qubits touched by deferred gates. A diagonal on a stopped qubit ends
    /// the run.
    pub stop_table: Vec<bool>,
    /// Qubits touched by pending diagonals.
    pub dep_set: u64,
}

/// Record of one run, by position in the detector's input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DetectorRun {
    pub fused: Vec<usize>,
    pub bypassed: Vec<usize>,
    pub deferred: Vec<usize>,
    /// Input position of the diagonal that ended the run, if one did.
    pub stopped_by: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct DetectorOutput {
    pub gates: Vec<PlanGate>,
    pub runs: Vec<DetectorRun>,
}

impl DetectorState {
    fn new(n: usize) -> DetectorState {
        DetectorState { stop_table: vec![false; n], ..Default::default() }
    }

    fn stopped(&self, mask: u64) -> bool {
        qubits_of(mask).into_iter().any(|q| self.stop_table[q])
    }

    fn stop(&mut self, mask: u64) {
        for q in qubits_of(mask) {
            self.stop_table[q] = true;
        }
    }
}

/// Rewrites a gate list so that runs of mutually commuting diagonal gates
/// become single fused diagonals of at most `cap` qubits.
///
/// Starting at a diagonal gate, the scan collects later diagonals into the
/// run. Non-diagonal gates that share qubits with the run (or with gates
/// already deferred) are deferred behind it; disjoint ones are moved in front
/// of it. The run ends at a diagonal that touches a deferred gate's qubit or
/// that would grow the fused support past `cap`. Runs of one diagonal are
/// left as they are.
pub fn diagonal_detector(gates: &[PlanGate], n: usize, cap: usize) -> Result<DetectorOutput> {
    let mut out = DetectorOutput { gates: Vec::with_capacity(gates.len()), runs: Vec::new() };
    let mut it = 0;
    while it < gates.len() {
        if !gates[it].gate.is_diagonal() {
            out.gates.push(gates[it].clone());
            it += 1;
            continue;
        }
        let mut st = DetectorState::new(n);
        let mut run = DetectorRun::default();
        let mut j = it;
        while j < gates.len() {
            let g = &gates[j];
            let s = g.gate.support_mask();
            if g.gate.is_diagonal() {
                if st.stopped(s) {
                    run.stopped_by = Some(j);
                    break;
                }
                if !st.diag_list.is_empty() && (st.dep_set | s).count_ones() as usize > cap {
                    break;
                }
                st.dep_set |= s;
                st.diag_list.push(g.clone());
                run.fused.push(j);
            } else if s & st.dep_set != 0 || st.stopped(s) {
                st.stop(s);
                st.u_list.push(g.clone());
                run.deferred.push(j);
            } else {
                st.res_list.push(g.clone());
                run.bypassed.push(j);
            }
            j += 1;
        }
        out.gates.append(&mut st.res_list);
        if st.diag_list.len() > 1 {
            let raw: Vec<_> = st.diag_list.iter().map(|g| g.gate.clone()).collect();
            let mut sources: Vec<usize> = st.diag_list.into_iter().flat_map(|g| g.sources).collect();
            sources.sort_unstable();
            out.gates.push(PlanGate { gate: fuse_diagonals(&raw, cap)?, sources });
        } else {
            out.gates.append(&mut st.diag_list);
        }
        out.gates.append(&mut st.u_list);
        out.runs.push(run);
        it = j;
    }
    Ok(out)
}

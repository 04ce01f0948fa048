use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Simulation environment.
///
/// | field          | meaning                                                    |
/// |----------------|------------------------------------------------------------|
/// | `qubits`       | total qubits N                                             |
/// | `boost_div`    | booster division parameter B; groups start at ceil(N/B)     |
/// | `chunk_qubits` | C, a chunk holds 2^C amplitudes                            |
/// | `rank_qubits`  | R, 2^R logical ranks (partitioning only)                   |
/// | `diag_cap`     | D, max qubits of a fused diagonal                          |
/// | `fuse_cap`     | F, max qubits of a fused unitary                           |
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub qubits: usize,
    pub boost_div: usize,
    pub chunk_qubits: usize,
    pub rank_qubits: usize,
    pub diag_cap: usize,
    pub fuse_cap: usize,
    /// Overrides the booster's initial group size (`ceil(N/B)` otherwise).
    pub div_size: Option<usize>,
}

pub const DEFAULT_CHUNK_QUBITS: usize = 10;
pub const DEFAULT_FUSE_CAP: usize = 5;
pub const DEFAULT_DIAG_CAP: usize = 5;
pub const DEFAULT_BOOST_DIV: usize = 4;

impl SimConfig {
    /// Defaults (C=10, F=5, D=5, B=4, R=0) clamped to `n` qubits.
    pub fn new(n: usize) -> SimConfig {
        let n1 = n.max(1);
        let chunk_qubits = DEFAULT_CHUNK_QUBITS.min(n1);
        SimConfig {
            qubits: n,
            boost_div: DEFAULT_BOOST_DIV.min(n1),
            chunk_qubits,
            rank_qubits: 0,
            diag_cap: DEFAULT_DIAG_CAP.min(n1),
            fuse_cap: DEFAULT_FUSE_CAP.min(chunk_qubits),
            div_size: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.qubits;
        let bad = |msg: String| Err(Error::Config(msg));
        if n == 0 || n > 48 {
            return bad(format!("qubit count {n} outside 1..=48"));
        }
        if self.rank_qubits > n {
            return bad(format!("R={} exceeds N={n}", self.rank_qubits));
        }
        if !(1..=n).contains(&self.chunk_qubits) {
            return bad(format!("C={} outside 1..={n}", self.chunk_qubits));
        }
        if !(1..=self.chunk_qubits).contains(&self.fuse_cap) {
            return bad(format!("F={} outside 1..={}", self.fuse_cap, self.chunk_qubits));
        }
        if !(1..=n).contains(&self.diag_cap) {
            return bad(format!("D={} outside 1..={n}", self.diag_cap));
        }
        if !(1..=n).contains(&self.boost_div) {
            return bad(format!("B={} outside 1..={n}", self.boost_div));
        }
        if self.div_size == Some(0) {
            return bad("division size must be at least 1".into());
        }
        Ok(())
    }

    /// Initial booster group size.
    pub fn division_size(&self) -> usize {
        self.div_size.unwrap_or_else(|| self.qubits.div_ceil(self.boost_div))
    }
}

use crate::gate::Gate;
use crate::{Error, Result};

/// Ordered gate sequence over `n` qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    /// Gate positions at which a `barrier` statement appeared. No-op markers;
    /// they do not constrain the optimizer.
    barriers: Vec<usize>,
}

impl Circuit {
    pub fn new(n: usize) -> Circuit {
        Circuit { n, gates: Vec::new(), barriers: Vec::new() }
    }

    pub fn from_gates(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Circuit> {
        let mut c = Circuit::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Appends a gate, rejecting qubit indices outside `[0, n)`.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&q) = gate.support().iter().find(|&&q| q >= self.n) {
            return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn push_barrier(&mut self) {
        self.barriers.push(self.gates.len());
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn barriers(&self) -> &[usize] {
        &self.barriers
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }
}

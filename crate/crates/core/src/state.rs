//! Dense amplitude storage: the full state vector and qubit-group sub-vectors.

use num_complex::Complex64;
use rand::Rng;

use crate::{Error, Result};

/// Anything the kernel can apply gates to: an amplitude array plus a map from
/// global qubit index to bit position in that array.
pub trait QubitRegister {
    /// Number of qubits held (the array has `2^k` amplitudes).
    fn num_qubits(&self) -> usize;
    /// Bit position of global qubit `q`, or an ownership error.
    fn position_of(&self, q: usize) -> Result<usize>;
    fn amplitudes(&self) -> &[Complex64];
    fn amplitudes_mut(&mut self) -> &mut [Complex64];

    fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|a| a.norm_sqr()).sum()
    }
}

/// `2^n` amplitudes; qubit `q` is bit `q` of the index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn basis(n: usize, index: usize) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<StateVector> {
        if !amps.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(amps.len()));
        }
        let n = amps.len().trailing_zeros() as usize;
        Ok(StateVector { n, amps })
    }

    /// Normalised state with independent Gaussian-ish components.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVector {
        let mut amps: Vec<Complex64> =
            (0..1usize << n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest elementwise `|a_i − b_i|`.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl QubitRegister for StateVector {
    fn num_qubits(&self) -> usize {
        self.n
    }
    fn position_of(&self, q: usize) -> Result<usize> {
        if q < self.n {
            Ok(q)
        } else {
            Err(Error::QubitOutOfRange { qubit: q, n: self.n })
        }
    }
    fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
    fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }
}

/// Amplitudes of a qubit group. `qubits[p]` is the global qubit stored at bit
/// position `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubStateVector {
    qubits: Vec<usize>,
    amps: Vec<Complex64>,
}

impl SubStateVector {
    /// `|0…0⟩` over the given qubits.
    pub fn zero(qubits: Vec<usize>) -> Result<SubStateVector> {
        let k = qubits.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << k];
        amps[0] = Complex64::new(1.0, 0.0);
        SubStateVector::new(qubits, amps)
    }

    pub fn new(qubits: Vec<usize>, amps: Vec<Complex64>) -> Result<SubStateVector> {
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::DuplicateQubit(*q));
            }
        }
        if amps.len() != 1 << qubits.len() {
            return Err(Error::InvalidGate(format!(
                "{} amplitudes for {} qubits",
                amps.len(),
                qubits.len()
            )));
        }
        Ok(SubStateVector { qubits, amps })
    }

    /// Product state `⊗_j (α_j|0⟩ + β_j|1⟩)` with `qubits[j]` at position `j`.
    pub fn product(qubits: Vec<usize>, factors: &[[Complex64; 2]]) -> Result<SubStateVector> {
        if factors.len() != qubits.len() {
            return Err(Error::InvalidGate(format!("{} factors for {} qubits", factors.len(), qubits.len())));
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            let mut next = Vec::with_capacity(amps.len() * 2);
            next.extend(amps.iter().map(|a| a * f[0]));
            next.extend(amps.iter().map(|a| a * f[1]));
            amps = next;
        }
        SubStateVector::new(qubits, amps)
    }

    pub fn from_state(sv: StateVector) -> SubStateVector {
        SubStateVector { qubits: (0..sv.n).collect(), amps: sv.amps }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn set_layout(&mut self, qubits: Vec<usize>, amps: Vec<Complex64>) {
        debug_assert_eq!(amps.len(), 1 << qubits.len());
        self.qubits = qubits;
        self.amps = amps;
    }

    /// Converts to a full state vector. Requires the qubits to be exactly
    /// `0..n` in ascending position order.
    pub fn into_state_vector(self) -> Result<StateVector> {
        if let Some((p, &q)) = self.qubits.iter().enumerate().find(|(p, q)| *p != **q) {
            return Err(Error::Plan(format!("position {p} holds qubit {q}; reorder before extracting")));
        }
        Ok(StateVector { n: self.qubits.len(), amps: self.amps })
    }
}

impl QubitRegister for SubStateVector {
    fn num_qubits(&self) -> usize {
        self.qubits.len()
    }
    fn position_of(&self, q: usize) -> Result<usize> {
        self.qubits.iter().position(|&x| x == q).ok_or(Error::QubitNotOwned(q))
    }
    fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
    fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }
}

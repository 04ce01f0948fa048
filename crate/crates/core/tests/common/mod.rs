//! Reference implementations used as test oracles. None of them go through
//! the crate's kernel.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swarmsim::{Circuit, Complex64, Gate, Matrix, StateVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Full `2^n × 2^n` matrix of a gate, built entry by entry from its target
/// matrix: row `r`, column `col` is nonzero only when both agree off the
/// targets; if any control bit is 0 the entry is the identity's.
pub fn expand(gate: &Gate, n: usize) -> Vec<Vec<Complex64>> {
    let dim = 1usize << n;
    let m = gate.target_matrix();
    let t = gate.targets();
    let tmask: usize = t.iter().map(|&q| 1 << q).sum();
    let bits = |x: usize| -> usize { t.iter().enumerate().map(|(j, &q)| ((x >> q) & 1) << j).sum() };
    let mut out = vec![vec![c(0.0, 0.0); dim]; dim];
    for (r, row) in out.iter_mut().enumerate() {
        for (col, e) in row.iter_mut().enumerate() {
            let controls_on = gate.controls().iter().all(|&q| (col >> q) & 1 == 1);
            if !controls_on {
                if r == col {
                    *e = c(1.0, 0.0);
                }
            } else if r & !tmask == col & !tmask {
                *e = m.get(bits(r), bits(col));
            }
        }
    }
    out
}

pub fn matvec(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// Runs a circuit by dense matrix-vector products (small n only).
pub fn dense_run(circuit: &Circuit, init: &[Complex64]) -> Vec<Complex64> {
    circuit.gates().iter().fold(init.to_vec(), |v, g| matvec(&expand(g, circuit.n()), &v))
}

/// Restriction of a full-register unitary to `qubits` when it acts as the
/// identity elsewhere: entry (r, c) over the qubit patterns, read at the
/// all-zero assignment of the other qubits.
pub fn restrict(full: &[Vec<Complex64>], qubits: &[usize]) -> Matrix {
    let k = qubits.len();
    let place = |x: usize| -> usize { qubits.iter().enumerate().map(|(j, &q)| ((x >> j) & 1) << q).sum() };
    let dim = 1 << k;
    let mut m = Matrix::identity(dim);
    for r in 0..dim {
        for col in 0..dim {
            m.set(r, col, full[place(r)][place(col)]);
        }
    }
    m
}

pub fn random_state(n: usize, r: &mut impl Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..1 << n).map(|_| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn reference(circuit: &Circuit) -> StateVector {
    let mut sv = StateVector::zero(circuit.n());
    swarmsim::gate_by_gate_sim(&mut sv, circuit).unwrap();
    sv
}

/// The 8-qubit, 40-gate circuit whose per-group gate counts are 6/6/7/7,
/// then 7/4 on the two 4-qubit halves, then 3 on all eight qubits. Built to
/// match the stated group structure; the exact wires are a reconstruction.
pub fn boost_fixture() -> Circuit {
    use swarmsim::Gate as G;
    let gates = vec![
        // {0,1}
        G::h(0), G::h(1), G::cx(0, 1), G::rx(0, 0.3), G::ry(1, 0.7), G::cx(1, 0),
        // {2,3}
        G::h(2), G::x(3), G::cx(2, 3), G::ry(2, 1.1), G::h(3), G::cx(3, 2),
        // {4,5}
        G::h(4), G::h(5), G::cx(4, 5), G::rx(4, 0.5), G::ry(5, 0.9), G::cx(5, 4), G::h(4),
        // {6,7}
        G::h(6), G::rx(7, 0.2), G::cx(6, 7), G::h(7), G::ry(6, 1.3), G::cx(7, 6), G::x(7),
        // {0..3}
        G::cx(1, 2), G::h(1), G::ry(2, 0.4), G::cx(0, 3), G::rx(0, 0.8), G::cx(2, 1), G::h(3),
        // {4..7}
        G::cx(5, 6), G::rx(5, 0.6), G::cx(4, 7), G::h(6),
        // all
        G::cx(3, 4), G::h(3), G::ry(4, 1.7),
    ];
    Circuit::from_gates(8, gates).unwrap()
}

/// Five-qubit circuit with the overlap pattern of the detector example,
/// gate i (1-based) at index i-1:
/// H₁ q0, RZZ₂ q0q1, H₃ q0, RY₄ q0, RZZ₅ q1q2, CP₆ q2q3, RX₇ q3, RZZ₈ q1q2,
/// CP₉ q1q2, H₁₀ q4, RZZ₁₁ q0q4.
pub fn detector_fixture() -> Circuit {
    use swarmsim::Gate as G;
    let gates = vec![
        G::h(0),
        G::rzz(0, 1, 0.3),
        G::h(0),
        G::ry(0, 0.5),
        G::rzz(1, 2, 0.7),
        G::cp(2, 3, 1.1),
        G::rx(3, 0.9),
        G::rzz(1, 2, 1.3),
        G::cp(1, 2, 0.4),
        G::h(4),
        G::rzz(0, 4, 0.6),
    ];
    Circuit::from_gates(5, gates).unwrap()
}

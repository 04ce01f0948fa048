use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::*;
use crate::gate::Gate;
use crate::state::{StateVector, SubStateVector};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn assert_amps(actual: &[Complex64], expected: &[Complex64]) {
    assert_eq!(actual.len(), expected.len());
    for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
        assert!((a - e).norm() < 1e-12, "amp {i}: {a} != {e}");
    }
}

#[test]
fn hadamard_on_zero_state() {
    let mut sv = StateVector::zero(2);
    let mut ctr = UpdateCounter::default();
    apply_gate(&mut sv, &Gate::h(0), &mut ctr).unwrap();
    let s = FRAC_1_SQRT_2;
    assert_amps(sv.amps(), &[c(s, 0.0), c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert_eq!(ctr.state_updates, 4);
    assert_eq!(ctr.sweep_updates, 4);
}

#[test]
fn controlled_phase_touches_only_control_on_half() {
    let theta = 0.7;
    let mut sv = StateVector::basis(2, 3);
    let mut ctr = UpdateCounter::default();
    apply_gate(&mut sv, &Gate::cp(1, 0, theta), &mut ctr).unwrap();
    assert_amps(sv.amps(), &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, theta)]);
    assert_eq!(ctr.state_updates, 2);
    assert_eq!(ctr.sweep_updates, 4);
}

#[test]
fn z_on_uniform_state() {
    let mut sv = StateVector::from_amplitudes(vec![c(0.5, 0.0); 4]).unwrap();
    let mut ctr = UpdateCounter::default();
    apply_diagonal(&mut sv, &Gate::z(1), &mut ctr).unwrap();
    assert_amps(sv.amps(), &[c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(-0.5, 0.0)]);
    assert_eq!(ctr.state_updates, 4);
}

#[test]
fn fused_diagonal_entry_lookup() {
    let d = Gate::diagonal(vec![0, 1], vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(-1.0, 0.0)]).unwrap();
    let mut sv = StateVector::basis(2, 0b10);
    let mut ctr = UpdateCounter::default();
    apply_diagonal(&mut sv, &d, &mut ctr).unwrap();
    assert_amps(sv.amps(), &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
}

#[test]
fn apply_diagonal_rejects_dense_gates() {
    let mut sv = StateVector::zero(1);
    let mut ctr = UpdateCounter::default();
    assert!(matches!(apply_diagonal(&mut sv, &Gate::h(0), &mut ctr), Err(Error::NotDiagonal(_))));
}

#[test]
fn gate_on_foreign_qubit_is_an_error() {
    let mut sub = SubStateVector::zero(vec![2, 3]).unwrap();
    let mut ctr = UpdateCounter::default();
    assert!(matches!(apply_gate(&mut sub, &Gate::h(1), &mut ctr), Err(Error::QubitNotOwned(1))));
    let mut sv = StateVector::zero(2);
    assert!(apply_gate(&mut sv, &Gate::h(2), &mut ctr).is_err());
}

#[test]
fn sub_state_vector_maps_global_qubits() {
    let mut sub = SubStateVector::zero(vec![5, 2]).unwrap();
    let mut ctr = UpdateCounter::default();
    apply_gate(&mut sub, &Gate::x(2), &mut ctr).unwrap();
    // qubit 2 lives at position 1
    assert_eq!(sub.amps()[2], c(1.0, 0.0));
    assert_eq!(ctr.sweep_updates, 4);
}

#[test]
fn tensor_product_of_basis_states() {
    let a = SubStateVector::new(vec![0], vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let b = SubStateVector::new(vec![1], vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let mut ctr = UpdateCounter::default();
    let ab = tensor_product(&a, &b, &mut ctr).unwrap();
    assert_eq!(ab.qubits(), &[0, 1]);
    assert_amps(ab.amps(), &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    assert_eq!(ctr.merge_updates, 4);
    // Same result with the operands swapped.
    let ba = tensor_product(&b, &a, &mut ctr).unwrap();
    assert_eq!(ba, ab);
}

#[test]
fn tensor_product_of_plus_states_is_uniform() {
    let s = FRAC_1_SQRT_2;
    let plus = |q| SubStateVector::new(vec![q], vec![c(s, 0.0), c(s, 0.0)]).unwrap();
    let mut ctr = UpdateCounter::default();
    let ab = tensor_product(&plus(0), &plus(1), &mut ctr).unwrap();
    let abc = tensor_product(&ab, &plus(2), &mut ctr).unwrap();
    let u = 1.0 / 8f64.sqrt();
    assert_amps(abc.amps(), &[c(u, 0.0); 8]);
}

#[test]
fn tensor_product_rejects_overlap() {
    let a = SubStateVector::zero(vec![0, 1]).unwrap();
    let b = SubStateVector::zero(vec![1, 2]).unwrap();
    let mut ctr = UpdateCounter::default();
    assert!(matches!(tensor_product(&a, &b, &mut ctr), Err(Error::OverlappingRegisters(1))));
}

#[test]
fn swap_permutation_exchanges_bits() {
    let mut sv = StateVector::basis(2, 0b01);
    let mut ctr = UpdateCounter::default();
    reorder_qubits(&mut sv, &[1, 0], &mut ctr).unwrap();
    assert_eq!(sv, StateVector::basis(2, 0b10));
}

#[test]
fn identity_permutation_is_a_no_op() {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
    let sv0 = StateVector::random(5, &mut rng);
    let mut sv = sv0.clone();
    let mut ctr = UpdateCounter::default();
    reorder_qubits(&mut sv, &[0, 1, 2, 3, 4], &mut ctr).unwrap();
    assert_eq!(sv, sv0);
}

#[test]
fn non_bijective_permutation_is_rejected() {
    let mut sv = StateVector::zero(3);
    let mut ctr = UpdateCounter::default();
    assert!(reorder_qubits(&mut sv, &[0, 0, 1], &mut ctr).is_err());
    assert!(reorder_qubits(&mut sv, &[0, 1], &mut ctr).is_err());
    assert!(reorder_qubits(&mut sv, &[0, 1, 3], &mut ctr).is_err());
}

#[test]
fn run_block_single_gate_matches_apply_gate() {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9);
    let sv0 = StateVector::random(6, &mut rng);
    let g = Gate::u3(2, 0.3, 0.2, 0.1);
    let mut a = sv0.clone();
    let mut b = sv0;
    let mut ctr = UpdateCounter::default();
    apply_gate(&mut a, &g, &mut ctr).unwrap();
    run_block(&mut b, std::slice::from_ref(&g), 3, &mut ctr).unwrap();
    assert!(a.max_deviation(&b) < 1e-14);
}

#[test]
fn run_block_rejects_dense_gate_outside_chunk() {
    let mut sv = StateVector::zero(6);
    let mut ctr = UpdateCounter::default();
    let err = run_block(&mut sv, &[Gate::h(4)], 3, &mut ctr).unwrap_err();
    assert!(matches!(err, Error::NotChunkLocal { qubit: 4, position: 4, chunk: 3 }));
    // Diagonal gates are position independent.
    run_block(&mut sv, &[Gate::rzz(4, 5, 0.3)], 3, &mut ctr).unwrap();
}

#[test]
fn plain_block_counts_a_sweep_per_gate() {
    // 21 gates confined to 4 qubits of an 8-qubit register still cost 21 x 2^8.
    let mut sv = StateVector::zero(8);
    let mut ctr = UpdateCounter::default();
    let gates: Vec<Gate> = (0..21)
        .map(|i| match i % 3 {
            0 => Gate::h(i % 4),
            1 => Gate::cx(i % 4, (i + 1) % 4),
            _ => Gate::ry((i + 2) % 4, 0.1 * i as f64),
        })
        .collect();
    run_block(&mut sv, &gates, 4, &mut ctr).unwrap();
    assert_eq!(ctr.sweep_updates, 21 * 256);
}

//! Bit-index helpers for amplitude addressing.

use crate::{Error, Result};

/// Amplitude offset for the given `(qubit, bit)` assignments; unspecified
/// qubits are 0.
pub fn basis_index(bits: &[(usize, u8)], n: usize) -> Result<usize> {
    let mut seen = 0u128;
    let mut index = 0usize;
    for &(qubit, bit) in bits {
        if qubit >= n || qubit >= usize::BITS as usize {
            return Err(Error::QubitOutOfRange { qubit, n });
        }
        if seen & (1 << qubit) != 0 {
            return Err(Error::DuplicateQubit(qubit));
        }
        seen |= 1 << qubit;
        if bit != 0 {
            index |= 1 << qubit;
        }
    }
    Ok(index)
}

/// Spreads the low bits of `value` over the zero positions left by
/// `sorted_positions` (ascending), i.e. inserts a 0 bit at each position.
#[inline]
pub fn insert_zero_bits(mut value: usize, sorted_positions: &[usize]) -> usize {
    for &p in sorted_positions {
        let low = value & ((1 << p) - 1);
        value = ((value >> p) << (p + 1)) | low;
    }
    value
}

/// Collects the bits of `index` at `positions` into a compact integer, bit `j`
/// of the result taken from `positions[j]`.
#[inline]
pub fn gather_bits(index: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &p)| acc | (((index >> p) & 1) << j))
}

/// Inverse of [`gather_bits`]: places bit `j` of `value` at `positions[j]`.
#[inline]
pub fn scatter_bits(value: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &p)| acc | (((value >> j) & 1) << p))
}

/// Bitmask with one bit per listed qubit.
#[inline]
pub fn mask_of(qubits: &[usize]) -> u64 {
    qubits.iter().fold(0, |m, &q| m | (1u64 << q))
}

/// Qubit indices set in `mask`, ascending.
pub fn qubits_of(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let q = mask.trailing_zeros() as usize;
        out.push(q);
        mask &= mask - 1;
    }
    out
}

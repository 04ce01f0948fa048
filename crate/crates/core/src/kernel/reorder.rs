use num_complex::Complex64;
use rayon::prelude::*;

use crate::state::{QubitRegister, StateVector, SubStateVector};
use crate::{Error, Result};

use super::UpdateCounter;

fn check_permutation(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(perm.len()));
        }
    }
    Ok(())
}

/// Moves the bit at position `q` to position `perm[q]` for every amplitude
/// index; out-of-place gather through two half-width lookup tables.
fn permute_amplitudes(amps: &[Complex64], perm: &[usize]) -> Vec<Complex64> {
    let k = perm.len();
    let mut inverse = vec![0; k];
    for (q, &p) in perm.iter().enumerate() {
        inverse[p] = q;
    }
    let lo_bits = k / 2;
    let table = |bits: std::ops::Range<usize>| -> Vec<usize> {
        let width = bits.len();
        (0..1usize << width)
            .map(|v| (0..width).fold(0, |acc, b| acc | (((v >> b) & 1) << inverse[bits.start + b])))
            .collect()
    };
    let lo = table(0..lo_bits);
    let hi = table(lo_bits..k);
    let lo_mask = (1usize << lo_bits) - 1;
    let src = |j: usize| lo[j & lo_mask] | hi[j >> lo_bits];
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    if amps.len() >= 1 << 14 {
        out.par_iter_mut().enumerate().with_min_len(1 << 12).for_each(|(j, o)| *o = amps[src(j)]);
    } else {
        out.iter_mut().enumerate().for_each(|(j, o)| *o = amps[src(j)]);
    }
    out
}

/// Permutes qubit positions of a full state vector: the amplitude whose bit
/// `q` is `b` lands where bit `perm[q]` is `b`.
pub fn reorder_qubits(sv: &mut StateVector, perm: &[usize], counter: &mut UpdateCounter) -> Result<()> {
    if perm.len() != sv.n() {
        return Err(Error::InvalidPermutation(sv.n()));
    }
    check_permutation(perm)?;
    if perm.iter().enumerate().all(|(q, &p)| q == p) {
        return Ok(());
    }
    let out = permute_amplitudes(sv.amplitudes(), perm);
    sv.amplitudes_mut().copy_from_slice(&out);
    counter.reorder_moves += out.len() as u64;
    Ok(())
}

/// Rearranges a sub-state vector so that position `p` holds global qubit
/// `layout[p]`.
pub fn reorder_register(reg: &mut SubStateVector, layout: &[usize], counter: &mut UpdateCounter) -> Result<()> {
    if layout.len() != reg.num_qubits() {
        return Err(Error::InvalidPermutation(reg.num_qubits()));
    }
    let perm = reg
        .qubits()
        .iter()
        .map(|q| layout.iter().position(|x| x == q).ok_or(Error::InvalidPermutation(layout.len())))
        .collect::<Result<Vec<_>>>()?;
    check_permutation(&perm)?;
    if perm.iter().enumerate().all(|(q, &p)| q == p) {
        return Ok(());
    }
    let out = permute_amplitudes(reg.amplitudes(), &perm);
    counter.reorder_moves += out.len() as u64;
    reg.set_layout(layout.to_vec(), out);
    Ok(())
}

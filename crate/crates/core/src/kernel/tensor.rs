use num_complex::Complex64;
use rayon::prelude::*;

use crate::bits::gather_bits;
use crate::state::{QubitRegister, SubStateVector};
use crate::{Error, Result};

use super::UpdateCounter;

/// Merges two disjoint qubit groups into one sub-vector over their union,
/// laid out in ascending global qubit order.
pub fn tensor_product(a: &SubStateVector, b: &SubStateVector, counter: &mut UpdateCounter) -> Result<SubStateVector> {
    if let Some(&q) = a.qubits().iter().find(|q| b.qubits().contains(q)) {
        return Err(Error::OverlappingRegisters(q));
    }
    let mut qubits: Vec<usize> = a.qubits().iter().chain(b.qubits()).copied().collect();
    qubits.sort_unstable();
    let len = 1usize << qubits.len();
    let mut out = vec![Complex64::new(0.0, 0.0); len];

    let concat_in_order =
        |lo: &SubStateVector, hi: &SubStateVector| lo.qubits().iter().chain(hi.qubits()).eq(qubits.iter());
    if concat_in_order(a, b) || concat_in_order(b, a) {
        let (lo, hi) = if concat_in_order(a, b) { (a, b) } else { (b, a) };
        let width = lo.amplitudes().len();
        let fill = |(j, chunk): (usize, &mut [Complex64])| {
            let h = hi.amplitudes()[j];
            for (o, l) in chunk.iter_mut().zip(lo.amplitudes()) {
                *o = l * h;
            }
        };
        if len >= 1 << 14 {
            out.par_chunks_mut(width).enumerate().for_each(fill);
        } else {
            out.chunks_mut(width).enumerate().for_each(fill);
        }
    } else {
        let pos = |r: &SubStateVector| -> Vec<usize> {
            r.qubits().iter().map(|q| qubits.binary_search(q).expect("union member")).collect()
        };
        let (pa, pb) = (pos(a), pos(b));
        out.par_iter_mut().enumerate().with_min_len(1 << 12).for_each(|(i, o)| {
            *o = a.amplitudes()[gather_bits(i, &pa)] * b.amplitudes()[gather_bits(i, &pb)];
        });
    }
    counter.merge_updates += len as u64;
    SubStateVector::new(qubits, out)
}

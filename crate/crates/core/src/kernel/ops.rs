//! Gates lowered to bit positions of a concrete register, with sequential
//! (per-chunk) and parallel (whole-vector) application.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bits::{gather_bits, insert_zero_bits};
use crate::gate::{Gate, GateMatrix};
use crate::{Error, Result};

/// Below this many amplitudes whole-vector passes stay on the calling thread.
const PAR_THRESHOLD: usize = 1 << 13;
/// Sub-slice width used for diagonal phase lookup tables.
const DIAG_TABLE_BITS: usize = 12;

#[derive(Debug, Clone)]
pub(crate) struct DenseOp {
    /// Target positions in matrix-index order.
    targets: Vec<usize>,
    /// Target and control positions, ascending.
    fixed: Vec<usize>,
    ctrl_mask: usize,
    dim: usize,
    matrix: Vec<Complex64>,
    /// `offsets[j]` is the index offset selecting local matrix index `j`.
    offsets: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct DiagOp {
    /// Positions in phase-index order.
    positions: Vec<usize>,
    ctrl_mask: usize,
    phases: Vec<Complex64>,
    table_bits: usize,
    /// Phase-index contribution of the low `table_bits` bits.
    low_table: Vec<u32>,
}

#[derive(Debug, Clone)]
pub(crate) enum LocalOp {
    Dense(DenseOp),
    Diag(DiagOp),
}

#[derive(Clone, Copy)]
struct SharedAmps(*mut Complex64);
// SAFETY: every parallel user writes a disjoint index set (one group of
// amplitudes per task), and the pointer outlives the parallel region.
unsafe impl Send for SharedAmps {}
unsafe impl Sync for SharedAmps {}

impl LocalOp {
    /// Lowers `gate` for a `k`-qubit register using `position` to map global
    /// qubits to bit positions.
    pub(crate) fn lower(gate: &Gate, k: usize, position: impl Fn(usize) -> Result<usize>) -> Result<LocalOp> {
        let targets = gate.targets().iter().map(|&q| position(q)).collect::<Result<Vec<_>>>()?;
        let controls = gate.controls().iter().map(|&q| position(q)).collect::<Result<Vec<_>>>()?;
        let ctrl_mask = controls.iter().fold(0usize, |m, &p| m | (1 << p));
        if let Some(diag) = gate.target_diagonal() {
            let table_bits = DIAG_TABLE_BITS.min(k);
            let low_table = (0..1usize << table_bits).map(|i| gather_bits(i, &targets) as u32).collect();
            return Ok(LocalOp::Diag(DiagOp { positions: targets, ctrl_mask, phases: diag, table_bits, low_table }));
        }
        let m = match gate.matrix() {
            GateMatrix::Dense(m) => m,
            GateMatrix::Diagonal(_) => unreachable!("diagonal matrices belong to diagonal kinds"),
        };
        let mut fixed: Vec<usize> = targets.iter().chain(&controls).copied().collect();
        fixed.sort_unstable();
        let dim = m.dim();
        let offsets = (0..dim)
            .map(|j| targets.iter().enumerate().fold(0, |acc, (b, &p)| acc | (((j >> b) & 1) << p)))
            .collect();
        Ok(LocalOp::Dense(DenseOp { targets, fixed, ctrl_mask, dim, matrix: m.data().to_vec(), offsets }))
    }

    /// Highest bit position a dense op reads or writes.
    pub(crate) fn max_dense_position(&self) -> Option<usize> {
        match self {
            LocalOp::Dense(d) => d.fixed.last().copied(),
            LocalOp::Diag(_) => None,
        }
    }

    pub(crate) fn num_controls(&self) -> usize {
        match self {
            LocalOp::Dense(d) => d.ctrl_mask.count_ones() as usize,
            LocalOp::Diag(d) => d.ctrl_mask.count_ones() as usize,
        }
    }

    /// Applies the op to an aligned slice whose first element has global
    /// index `base`. Dense ops must lie entirely inside the slice.
    pub(crate) fn apply_chunk(&self, chunk: &mut [Complex64], base: usize) {
        match self {
            LocalOp::Dense(d) => d.apply_seq(chunk),
            LocalOp::Diag(d) => d.apply(chunk, base),
        }
    }

    /// Applies the op to a whole register, in parallel when large.
    pub(crate) fn apply_full(&self, amps: &mut [Complex64]) {
        if amps.len() < PAR_THRESHOLD || rayon::current_num_threads() == 1 {
            self.apply_chunk(amps, 0);
            return;
        }
        match self {
            LocalOp::Dense(d) => d.apply_par(amps),
            LocalOp::Diag(d) => {
                let step = 1usize << d.table_bits;
                amps.par_chunks_mut(step).enumerate().for_each(|(i, c)| d.apply(c, i * step));
            }
        }
    }
}

impl DenseOp {
    #[inline]
    fn apply_group(&self, amps: &mut [Complex64], i0: usize, scratch: &mut [Complex64]) {
        for (s, &o) in scratch.iter_mut().zip(&self.offsets) {
            *s = amps[i0 + o];
        }
        for (r, &o) in self.offsets.iter().enumerate() {
            let row = &self.matrix[r * self.dim..(r + 1) * self.dim];
            amps[i0 + o] = row.iter().zip(scratch.iter()).map(|(a, b)| a * b).sum();
        }
    }

    fn apply_seq(&self, amps: &mut [Complex64]) {
        if self.targets.len() == 1 && self.ctrl_mask == 0 {
            let stride = 1usize << self.targets[0];
            let [m00, m01, m10, m11] = [self.matrix[0], self.matrix[1], self.matrix[2], self.matrix[3]];
            for block in amps.chunks_exact_mut(stride << 1) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = m00 * x + m01 * y;
                    *b = m10 * x + m11 * y;
                }
            }
            return;
        }
        let groups = amps.len() >> self.fixed.len();
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.dim];
        for g in 0..groups {
            let i0 = insert_zero_bits(g, &self.fixed) | self.ctrl_mask;
            self.apply_group(amps, i0, &mut scratch);
        }
    }

    fn apply_par(&self, amps: &mut [Complex64]) {
        let groups = amps.len() >> self.fixed.len();
        let len = amps.len();
        let ptr = SharedAmps(amps.as_mut_ptr());
        (0..groups).into_par_iter().with_min_len(1 << 10).for_each_init(
            || vec![Complex64::new(0.0, 0.0); self.dim],
            move |scratch, g| {
                let p = ptr;
                let i0 = insert_zero_bits(g, &self.fixed) | self.ctrl_mask;
                // SAFETY: group `g` owns the indices `i0 + offsets[j]`; groups
                // never share an index, and all indices are < len.
                let amps = unsafe { std::slice::from_raw_parts_mut(p.0, len) };
                self.apply_group(amps, i0, scratch);
            },
        );
    }
}

impl DiagOp {
    fn apply(&self, amps: &mut [Complex64], base: usize) {
        let step = (1usize << self.table_bits).min(amps.len());
        for (s, sub) in amps.chunks_mut(step).enumerate() {
            let sub_base = base + s * step;
            let hi = gather_bits(sub_base, &self.positions);
            let cm = self.ctrl_mask;
            if cm == 0 {
                for (i, a) in sub.iter_mut().enumerate() {
                    *a *= self.phases[hi | self.low_table[i] as usize];
                }
            } else {
                for (i, a) in sub.iter_mut().enumerate() {
                    if (sub_base | i) & cm == cm {
                        *a *= self.phases[hi | self.low_table[i] as usize];
                    }
                }
            }
        }
    }
}

/// Checks that every dense op of a chunked block fits in the low
/// `chunk_bits` positions.
pub(crate) fn check_chunk_local(ops: &[(LocalOp, &Gate)], chunk_bits: usize, position: impl Fn(usize) -> usize) -> Result<()> {
    for (op, gate) in ops {
        if let Some(max) = op.max_dense_position() {
            if max >= chunk_bits {
                let qubit = gate.support().into_iter().find(|&q| position(q) >= chunk_bits).unwrap_or(0);
                return Err(Error::NotChunkLocal { qubit, position: position(qubit), chunk: chunk_bits });
            }
        }
    }
    Ok(())
}

//! Small dense complex matrices for gate definitions and fusion.

use std::ops::Mul;

use num_complex::Complex64;
use rand::Rng;

use crate::{Error, Result, TOLERANCE};

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim.checked_mul(dim) != Some(data.len()) {
            return Err(Error::NotSquare { rows: dim, len: data.len() });
        }
        Ok(Matrix { dim, data })
    }

    /// Builds a matrix from rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare { rows: dim, len: dim * row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let dim = diag.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            data[i * dim + i] = d;
        }
        Matrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits the matrix acts on. Only meaningful for power-of-two sides.
    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(self.get(c, r).conj());
            }
        }
        Matrix { dim: n, data }
    }

    /// `self ⊗ other`, with `other` on the low index bits.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for r1 in 0..a {
            for c1 in 0..a {
                let x = self.get(r1, c1);
                if x == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r2 in 0..b {
                    for c2 in 0..b {
                        data[(r1 * b + r2) * n + c1 * b + c2] = x * other.get(r2, c2);
                    }
                }
            }
        }
        Matrix { dim: n, data }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| self.data[r * self.dim..(r + 1) * self.dim].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.get(r, c) == Complex64::new(0.0, 0.0)))
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        Matrix { dim: n, data }
    }
}

/// True iff `‖M·M† − I‖∞ < 1e-10`.
///
/// Errors if the side is not a power of two.
pub fn unitary_check(m: &Matrix) -> Result<bool> {
    if !m.dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m.dim));
    }
    let product = m * &m.adjoint();
    Ok(product.max_abs_diff(&Matrix::identity(m.dim)) < TOLERANCE)
}

/// Haar-ish random unitary built from a chain of complex Givens rotations and
/// a random diagonal phase.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    use std::f64::consts::PI;
    let mut m = Matrix::from_diagonal(
        &(0..dim).map(|_| Complex64::from_polar(1.0, rng.gen_range(-PI..PI))).collect::<Vec<_>>(),
    );
    // Two sweeps over all index pairs mix every row with every other.
    for _ in 0..2 {
        for i in 0..dim {
            for j in (i + 1)..dim {
                let theta = rng.gen_range(0.0..PI);
                let phi = rng.gen_range(-PI..PI);
                let (s, c) = theta.sin_cos();
                let e = Complex64::from_polar(1.0, phi);
                for col in 0..dim {
                    let a = m.get(i, col);
                    let b = m.get(j, col);
                    m.set(i, col, a * c - e.conj() * b * s);
                    m.set(j, col, e * a * s + b * c);
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_is_unitary() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = Matrix::from_rows(&[vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]).unwrap();
        assert!(unitary_check(&h).unwrap());
    }

    #[test]
    fn all_ones_is_not_unitary() {
        let m = Matrix::from_vec(2, vec![c(1.0, 0.0); 4]).unwrap();
        assert!(!unitary_check(&m).unwrap());
    }

    #[test]
    fn non_square_input_is_rejected() {
        assert!(matches!(Matrix::from_vec(2, vec![c(1.0, 0.0); 3]), Err(Error::NotSquare { .. })));
        assert!(Matrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)]]).is_err());
        let m = Matrix::identity(3);
        assert!(matches!(unitary_check(&m), Err(Error::NotPowerOfTwo(3))));
    }

    #[test]
    fn product_of_random_unitaries_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [2, 4, 8, 16] {
            let a = random_unitary(dim, &mut rng);
            let b = random_unitary(dim, &mut rng);
            assert!(unitary_check(&a).unwrap());
            assert!(unitary_check(&(&a * &b)).unwrap());
        }
    }

    #[test]
    fn kron_places_right_operand_on_low_bits() {
        let x = Matrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let i = Matrix::identity(2);
        // X ⊗ I flips the high bit: |00> -> |10> (index 2).
        let m = x.kron(&i);
        assert_eq!(m.get(2, 0), c(1.0, 0.0));
        assert_eq!(m.get(1, 1), c(0.0, 0.0));
    }
}

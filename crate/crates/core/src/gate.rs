//! Gate kinds, their matrices, and structural queries used by the optimizer.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bits::{gather_bits, mask_of};
use crate::matrix::{unitary_check, Matrix};
use crate::{Error, Result, TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    Rx,
    Ry,
    Rz,
    U1,
    U2,
    U3,
    Cx,
    Cz,
    Cp,
    Rzz,
    Swap,
    /// Fused or user-supplied dense unitary over its targets.
    Unitary,
    /// Fused or user-supplied diagonal over its targets.
    Diagonal,
}

impl GateKind {
    pub const ALL: [GateKind; 19] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::T,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::U1,
        GateKind::U2,
        GateKind::U3,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Cp,
        GateKind::Rzz,
        GateKind::Swap,
        GateKind::Unitary,
        GateKind::Diagonal,
    ];

    /// Lower-case name; the OpenQASM spelling for every kind except the two
    /// generic ones.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::U1 => "u1",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Cp => "cp",
            GateKind::Rzz => "rzz",
            GateKind::Swap => "swap",
            GateKind::Unitary => "unitary",
            GateKind::Diagonal => "diagonal",
        }
    }

    /// Inverse of [`GateKind::name`] restricted to OpenQASM-spellable kinds.
    pub fn from_qasm_name(name: &str) -> Option<GateKind> {
        Self::ALL.iter().copied().find(|k| !k.is_generic() && k.name() == name)
    }

    pub fn is_generic(self) -> bool {
        matches!(self, GateKind::Unitary | GateKind::Diagonal)
    }

    /// Whether the expanded matrix over controls and targets is diagonal.
    /// Decided by kind alone.
    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateKind::Z
                | GateKind::S
                | GateKind::T
                | GateKind::Rz
                | GateKind::U1
                | GateKind::Cz
                | GateKind::Cp
                | GateKind::Rzz
                | GateKind::Diagonal
        )
    }

    /// `(controls, targets, params)` arity of the standard kinds.
    pub fn arity(self) -> Option<(usize, usize, usize)> {
        Some(match self {
            GateKind::H | GateKind::X | GateKind::Y | GateKind::Z | GateKind::S | GateKind::T => (0, 1, 0),
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::U1 => (0, 1, 1),
            GateKind::U2 => (0, 1, 2),
            GateKind::U3 => (0, 1, 3),
            GateKind::Cx | GateKind::Cz => (1, 1, 0),
            GateKind::Cp => (1, 1, 1),
            GateKind::Rzz => (0, 2, 1),
            GateKind::Swap => (0, 2, 0),
            GateKind::Unitary | GateKind::Diagonal => return None,
        })
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Matrix over a gate's target qubits. Controls are never folded in.
#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrix {
    Dense(Matrix),
    /// Diagonal entries only, indexed like the dense form.
    Diagonal(Vec<Complex64>),
}

/// One quantum operation. Matrix index bit `j` corresponds to `targets[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<usize>,
    params: Vec<f64>,
    matrix: GateMatrix,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dense2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> GateMatrix {
    GateMatrix::Dense(Matrix::from_vec(2, vec![a, b, cc, d]).expect("2x2"))
}

fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> GateMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    dense2(
        c(co, 0.0),
        -Complex64::from_polar(s, lambda),
        Complex64::from_polar(s, phi),
        Complex64::from_polar(co, phi + lambda),
    )
}

fn standard_matrix(kind: GateKind, p: &[f64]) -> GateMatrix {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match kind {
        GateKind::H => {
            let s = c(FRAC_1_SQRT_2, 0.0);
            dense2(s, s, s, -s)
        }
        GateKind::X | GateKind::Cx => dense2(zero, one, one, zero),
        GateKind::Y => dense2(zero, c(0.0, -1.0), c(0.0, 1.0), zero),
        GateKind::Z | GateKind::Cz => dense2(one, zero, zero, -one),
        GateKind::S => dense2(one, zero, zero, c(0.0, 1.0)),
        GateKind::T => dense2(one, zero, zero, Complex64::from_polar(1.0, FRAC_PI_4)),
        GateKind::Rx => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            dense2(c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0))
        }
        GateKind::Ry => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            dense2(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
        }
        GateKind::Rz => dense2(
            Complex64::from_polar(1.0, -p[0] / 2.0),
            zero,
            zero,
            Complex64::from_polar(1.0, p[0] / 2.0),
        ),
        GateKind::U1 | GateKind::Cp => dense2(one, zero, zero, Complex64::from_polar(1.0, p[0])),
        GateKind::U2 => u3_matrix(FRAC_PI_2, p[0], p[1]),
        GateKind::U3 => u3_matrix(p[0], p[1], p[2]),
        GateKind::Rzz => {
            let a = Complex64::from_polar(1.0, -p[0] / 2.0);
            let b = Complex64::from_polar(1.0, p[0] / 2.0);
            GateMatrix::Dense(Matrix::from_diagonal(&[a, b, b, a]))
        }
        GateKind::Swap => {
            let mut m = Matrix::identity(4);
            m.set(1, 1, zero);
            m.set(2, 2, zero);
            m.set(1, 2, one);
            m.set(2, 1, one);
            GateMatrix::Dense(m)
        }
        GateKind::Unitary | GateKind::Diagonal => unreachable!("generic kinds carry explicit matrices"),
    }
}

fn check_distinct(qubits: &[usize]) -> Result<()> {
    for (i, q) in qubits.iter().enumerate() {
        if qubits[..i].contains(q) {
            return Err(Error::DuplicateQubit(*q));
        }
        if *q >= 64 {
            return Err(Error::QubitOutOfRange { qubit: *q, n: 64 });
        }
    }
    Ok(())
}

impl Gate {
    /// Builds a standard (non-generic) gate, validating arity and qubit
    /// distinctness.
    pub fn standard(kind: GateKind, controls: Vec<usize>, targets: Vec<usize>, params: Vec<f64>) -> Result<Gate> {
        let (nc, nt, np) = kind
            .arity()
            .ok_or_else(|| Error::InvalidGate(format!("{kind} needs an explicit matrix")))?;
        if controls.len() != nc || targets.len() != nt || params.len() != np {
            return Err(Error::InvalidGate(format!(
                "{kind} takes {nc} control(s), {nt} target(s), {np} parameter(s); got {}, {}, {}",
                controls.len(),
                targets.len(),
                params.len()
            )));
        }
        if let Some(bad) = params.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidGate(format!("non-finite parameter {bad}")));
        }
        let all: Vec<usize> = controls.iter().chain(&targets).copied().collect();
        check_distinct(&all)?;
        let matrix = standard_matrix(kind, &params);
        Ok(Gate { kind, targets, controls, params, matrix })
    }

    /// Dense generic unitary over `targets`; the matrix must be unitary.
    pub fn unitary(targets: Vec<usize>, matrix: Matrix) -> Result<Gate> {
        check_distinct(&targets)?;
        if matrix.dim() != 1 << targets.len() {
            return Err(Error::InvalidGate(format!(
                "{}x{} matrix for {} target(s)",
                matrix.dim(),
                matrix.dim(),
                targets.len()
            )));
        }
        if matrix.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidGate("non-finite matrix entry".into()));
        }
        if !unitary_check(&matrix)? {
            return Err(Error::NotUnitary);
        }
        Ok(Gate { kind: GateKind::Unitary, targets, controls: vec![], params: vec![], matrix: GateMatrix::Dense(matrix) })
    }

    /// Generic diagonal over `targets`; every entry must have modulus 1.
    pub fn diagonal(targets: Vec<usize>, entries: Vec<Complex64>) -> Result<Gate> {
        check_distinct(&targets)?;
        if entries.len() != 1 << targets.len() {
            return Err(Error::InvalidGate(format!("{} entries for {} target(s)", entries.len(), targets.len())));
        }
        check_unit_modulus(&entries)?;
        Ok(Gate { kind: GateKind::Diagonal, targets, controls: vec![], params: vec![], matrix: GateMatrix::Diagonal(entries) })
    }

    pub fn h(q: usize) -> Gate {
        Self::standard(GateKind::H, vec![], vec![q], vec![]).expect("valid gate")
    }
    pub fn x(q: usize) -> Gate {
        Self::standard(GateKind::X, vec![], vec![q], vec![]).expect("valid gate")
    }
    pub fn y(q: usize) -> Gate {
        Self::standard(GateKind::Y, vec![], vec![q], vec![]).expect("valid gate")
    }
    pub fn z(q: usize) -> Gate {
        Self::standard(GateKind::Z, vec![], vec![q], vec![]).expect("valid gate")
    }
    pub fn s(q: usize) -> Gate {
        Self::standard(GateKind::S, vec![], vec![q], vec![]).expect("valid gate")
    }
    pub fn t(q: usize) -> Gate {
        Self::standard(GateKind::T, vec![], vec![q], vec![]).expect("valid gate")
    }
    pub fn rx(q: usize, theta: f64) -> Gate {
        Self::standard(GateKind::Rx, vec![], vec![q], vec![theta]).expect("valid gate")
    }
    pub fn ry(q: usize, theta: f64) -> Gate {
        Self::standard(GateKind::Ry, vec![], vec![q], vec![theta]).expect("valid gate")
    }
    pub fn rz(q: usize, theta: f64) -> Gate {
        Self::standard(GateKind::Rz, vec![], vec![q], vec![theta]).expect("valid gate")
    }
    pub fn u1(q: usize, lambda: f64) -> Gate {
        Self::standard(GateKind::U1, vec![], vec![q], vec![lambda]).expect("valid gate")
    }
    pub fn u2(q: usize, phi: f64, lambda: f64) -> Gate {
        Self::standard(GateKind::U2, vec![], vec![q], vec![phi, lambda]).expect("valid gate")
    }
    pub fn u3(q: usize, theta: f64, phi: f64, lambda: f64) -> Gate {
        Self::standard(GateKind::U3, vec![], vec![q], vec![theta, phi, lambda]).expect("valid gate")
    }
    /// Panics if `control == target`.
    pub fn cx(control: usize, target: usize) -> Gate {
        Self::standard(GateKind::Cx, vec![control], vec![target], vec![]).expect("valid gate")
    }
    pub fn cz(control: usize, target: usize) -> Gate {
        Self::standard(GateKind::Cz, vec![control], vec![target], vec![]).expect("valid gate")
    }
    pub fn cp(control: usize, target: usize, theta: f64) -> Gate {
        Self::standard(GateKind::Cp, vec![control], vec![target], vec![theta]).expect("valid gate")
    }
    pub fn rzz(a: usize, b: usize, theta: f64) -> Gate {
        Self::standard(GateKind::Rzz, vec![], vec![a, b], vec![theta]).expect("valid gate")
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        Self::standard(GateKind::Swap, vec![], vec![a, b], vec![]).expect("valid gate")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }
    pub fn targets(&self) -> &[usize] {
        &self.targets
    }
    pub fn controls(&self) -> &[usize] {
        &self.controls
    }
    pub fn params(&self) -> &[f64] {
        &self.params
    }
    pub fn matrix(&self) -> &GateMatrix {
        &self.matrix
    }

    pub fn is_diagonal(&self) -> bool {
        self.kind.is_diagonal()
    }

    /// Controls followed by targets.
    pub fn support(&self) -> Vec<usize> {
        self.controls.iter().chain(&self.targets).copied().collect()
    }

    pub fn support_mask(&self) -> u64 {
        mask_of(&self.controls) | mask_of(&self.targets)
    }

    pub fn max_qubit(&self) -> usize {
        self.controls.iter().chain(&self.targets).copied().max().unwrap_or(0)
    }

    /// Dense matrix over the targets (expanding a stored diagonal).
    pub fn target_matrix(&self) -> Matrix {
        match &self.matrix {
            GateMatrix::Dense(m) => m.clone(),
            GateMatrix::Diagonal(d) => Matrix::from_diagonal(d),
        }
    }

    /// Diagonal of the target matrix, for diagonal kinds.
    pub fn target_diagonal(&self) -> Option<Vec<Complex64>> {
        if !self.is_diagonal() {
            return None;
        }
        Some(match &self.matrix {
            GateMatrix::Dense(m) => m.diagonal(),
            GateMatrix::Diagonal(d) => d.clone(),
        })
    }

    /// Phase of a diagonal gate for every bit pattern over `qubits` (bit `j`
    /// of the pattern is `qubits[j]`). `qubits` must cover the gate's support.
    pub fn phases_over(&self, qubits: &[usize]) -> Result<Vec<Complex64>> {
        let diag = self.target_diagonal().ok_or_else(|| Error::NotDiagonal(self.kind.name().into()))?;
        let pos = |q: usize| qubits.iter().position(|&x| x == q).ok_or(Error::QubitNotOwned(q));
        let tpos = self.targets.iter().map(|&q| pos(q)).collect::<Result<Vec<_>>>()?;
        let cmask = self.controls.iter().map(|&q| pos(q).map(|p| 1usize << p)).sum::<Result<usize>>()?;
        Ok((0..1usize << qubits.len())
            .map(|p| if p & cmask == cmask { diag[gather_bits(p, &tpos)] } else { Complex64::new(1.0, 0.0) })
            .collect())
    }

    /// Same gate with every qubit index passed through `map`.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            targets: self.targets.iter().map(|&q| map(q)).collect(),
            controls: self.controls.iter().map(|&q| map(q)).collect(),
            params: self.params.clone(),
            matrix: self.matrix.clone(),
        }
    }
}

pub(crate) fn check_unit_modulus(entries: &[Complex64]) -> Result<()> {
    for (index, z) in entries.iter().enumerate() {
        let modulus = z.norm();
        if !modulus.is_finite() || (modulus - 1.0).abs() >= TOLERANCE {
            return Err(Error::NotUnitModulus { index, modulus });
        }
    }
    Ok(())
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.params.is_empty() {
            let p: Vec<String> = self.params.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", p.join(","))?;
        }
        let q: Vec<String> = self.support().iter().map(|q| format!("q{q}")).collect();
        write!(f, " {}", q.join(","))
    }
}

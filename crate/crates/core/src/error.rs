use thiserror::Error;

use crate::qasm::ParseDiagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("qubit {0} is not owned by this register")]
    QubitNotOwned(usize),
    #[error("matrix is not square ({rows} rows, {len} entries)")]
    NotSquare { rows: usize, len: usize },
    #[error("matrix side {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("diagonal entry {index} has modulus {modulus}, expected 1")]
    NotUnitModulus { index: usize, modulus: f64 },
    #[error("gate {0} is not diagonal")]
    NotDiagonal(String),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("registers overlap on qubit {0}")]
    OverlappingRegisters(usize),
    #[error("qubit {qubit} sits at position {position}, outside the low {chunk} chunk positions")]
    NotChunkLocal { qubit: usize, position: usize, chunk: usize },
    #[error("gate touches {needed} qubits but the limit is {limit}")]
    LimitExceeded { needed: usize, limit: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Parse(#[from] ParseDiagnostic),
    #[error("gate kind {0} has no OpenQASM spelling")]
    UnsupportedExport(&'static str),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("no extension registered for block kind `{0}`")]
    UnknownExtension(String),
    #[error("plan error: {0}")]
    Plan(String),
}

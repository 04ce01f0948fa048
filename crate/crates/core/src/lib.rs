//! Full-state quantum circuit simulation with a multi-pass circuit optimizer.
//!
//! The crate is organised as a pipeline:
//!
//! * [`qasm`] turns OpenQASM 2.0 text into a [`Circuit`].
//! * [`optimizer`] rewrites a circuit into a [`Plan`] of gate blocks: cache
//!   blocks with qubit reorders, fused unitaries, fused diagonals and, for
//!   product-state inputs, boosted sub-state phases joined by tensor products.
//! * [`scheduler`] executes a plan on a state vector and reports update
//!   counters and timings. [`scheduler::gate_by_gate_sim`] is the reference
//!   every other execution path is checked against.
//!
//! Qubit 0 is the least-significant bit of an amplitude index.

pub mod bits;
pub mod circuit;
pub mod config;
mod error;
pub mod gate;
pub mod generators;
pub mod kernel;
pub mod matrix;
pub mod optimizer;
pub mod qasm;
pub mod scheduler;
pub mod state;

pub use circuit::Circuit;
pub use config::SimConfig;
pub use error::{Error, Result};
pub use gate::{Gate, GateKind};
pub use kernel::UpdateCounter;
pub use matrix::Matrix;
pub use num_complex::Complex64;
pub use optimizer::{swarm_optimize, BlockKind, BlockOp, GateBlock, OptLevel, Plan, PlanGate};
pub use qasm::{emit_qasm, parse_qasm, ParseDiagnostic};
pub use scheduler::{adaptive_sim, gate_by_gate_sim, InitialState, RunReport};
pub use state::{QubitRegister, StateVector, SubStateVector};

/// Absolute tolerance for unitarity and normalisation checks.
pub const TOLERANCE: f64 = 1e-10;

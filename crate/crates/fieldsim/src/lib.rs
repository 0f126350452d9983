//! Compile bosonic lattice Hamiltonians of the form `½Σp² + V(x)` with
//! quartic `V` into first-order Trotter circuits over {CNOT, RZ, Clifford},
//! count their resources, and check every stage against dense oracles.
//!
//! Pipeline: [`hamiltonian_core`] builds a [`hamiltonian_core::PolyHamiltonian`],
//! [`hamiltonian_core::pauli_encode`] maps it to qubits using a
//! [`boson_encoding::DigitizationConfig`], [`trotter_compiler::trotter_step`]
//! emits a [`circuit_ir::Circuit`], and [`resource_estimator`] counts it.
//! [`simulator`] provides the statevector and dense-matrix references.

pub mod boson_encoding;
pub mod circuit_ir;
pub mod error;
pub mod hamiltonian_core;
pub mod resource_estimator;
pub mod simulator;
pub mod sun_algebra;
pub mod trotter_compiler;

pub use error::{Error, Result};

/// Absolute tolerance below which Pauli and monomial coefficients are dropped.
pub const DROP_TOL: f64 = 1e-12;

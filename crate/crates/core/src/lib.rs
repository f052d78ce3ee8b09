//! Force-driven quantum harmonic oscillator toolkit.
//!
//! The crate builds the driven-oscillator Hamiltonians on one and two qubits,
//! compiles them to gate circuits, runs those circuits on an ideal statevector
//! simulator with seeded shot sampling, and checks the results against an
//! exact time-ordered propagator.
//!
//! Qubit ordering is fixed across every module: for an `n`-qubit register the
//! basis index is `q0·2^(n-1) + q1·2^(n-2) + … + q(n-1)`, i.e. the first listed
//! qubit is the most significant bit. For two qubits that is `|q1 q2⟩` with
//! index `q1·2 + q2`.

pub mod circuit;
pub mod experiment;
pub mod hamiltonian;
pub mod linalg;
pub mod oracle;
pub mod simulator;

pub use circuit::{Circuit, Gate, GateKind};
pub use hamiltonian::{DriveParams, HermitianOperator, OscillatorParams};
pub use simulator::{Distribution, ShotCounts, StateVector};

/// Tolerance on `Σ|amplitude|² = 1`.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance for matrix identities (Hermiticity, unitarity).
pub const MATRIX_TOL: f64 = 1e-12;

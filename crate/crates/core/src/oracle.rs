//! Reference propagators and distance measures.
//!
//! [`exact_propagate`] integrates the Schrödinger equation for a
//! time-dependent Hamiltonian with midpoint piecewise-constant exponentials,
//! `ψ_{k+1} = exp(−i·H(t_k + Δt/2)·Δt)·ψ_k`, each exponential taken through
//! the Hermitian eigendecomposition. The scheme is second order in `Δt` and
//! shares no code with the gate circuits it is used to check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{build_trotter_circuit, CircuitError, FieldSampling};
use crate::hamiltonian::{
    drive_force, single_qubit_hamiltonian, two_qubit_hamiltonian, DriveParams, HamiltonianError,
    HermitianOperator, OscillatorParams,
};
use crate::linalg::{self, CMatrix, I, ONE, ZERO};
use crate::simulator::{self, Distribution, SimulatorError, StateVector};

/// Step count used for ground-truth propagation.
pub const DEFAULT_EXACT_STEPS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("step count must be at least 1")]
    ZeroSteps,
    #[error("time must be finite, got {0}")]
    InvalidTime(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("label mismatch between distributions")]
    LabelMismatch,
    #[error("Hamiltonian at t = {t}: {source}")]
    Hamiltonian { t: f64, source: HamiltonianError },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
}

/// A Hamiltonian sampled at arbitrary times.
pub trait HamiltonianSource {
    fn dim(&self) -> usize;
    fn matrix_at(&self, t: f64) -> CMatrix;
}

/// Adapts a closure `t ↦ H(t)` of fixed dimension.
pub struct FnSource<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(f64) -> CMatrix> HamiltonianSource for FnSource<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn matrix_at(&self, t: f64) -> CMatrix {
        (self.f)(t)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SingleQubitDrive {
    pub osc: OscillatorParams,
    pub drive: DriveParams,
}

impl HamiltonianSource for SingleQubitDrive {
    fn dim(&self) -> usize {
        2
    }

    fn matrix_at(&self, t: f64) -> CMatrix {
        single_qubit_hamiltonian(&self.osc, &self.drive, t).into_matrix()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TwoQubitDrive {
    pub osc: OscillatorParams,
    pub drive: DriveParams,
}

impl HamiltonianSource for TwoQubitDrive {
    fn dim(&self) -> usize {
        4
    }

    fn matrix_at(&self, t: f64) -> CMatrix {
        two_qubit_hamiltonian(&self.osc, &self.drive, t).into_matrix()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Trotter,
    /// The as-published first-order operator; not norm preserving.
    #[serde(rename = "first_order_paper")]
    FirstOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationResult {
    pub final_state: StateVector,
    pub steps: usize,
    pub method: Method,
    /// Norm of the propagated vector before any renormalisation. Equal to 1
    /// up to rounding for the unitary methods.
    pub norm: f64,
}

pub fn exact_propagate(
    h: &dyn HamiltonianSource,
    t_final: f64,
    steps: usize,
    s0: &StateVector,
) -> Result<PropagationResult, OracleError> {
    if steps == 0 {
        return Err(OracleError::ZeroSteps);
    }
    if !t_final.is_finite() {
        return Err(OracleError::InvalidTime(t_final));
    }
    if h.dim() != s0.dim() {
        return Err(OracleError::DimensionMismatch { left: h.dim(), right: s0.dim() });
    }
    let dt = t_final / steps as f64;
    let mut psi = nalgebra::DVector::from_column_slice(s0.amplitudes());
    for k in 0..steps {
        let t_mid = (k as f64 + 0.5) * dt;
        let m = h.matrix_at(t_mid);
        if m.nrows() != h.dim() || m.ncols() != h.dim() {
            return Err(OracleError::DimensionMismatch { left: m.nrows(), right: h.dim() });
        }
        let op = HermitianOperator::new(m)
            .map_err(|source| OracleError::Hamiltonian { t: t_mid, source })?;
        psi = linalg::expm_hermitian(op.matrix(), dt) * psi;
    }
    let norm = psi.norm();
    let final_state = StateVector::from_amplitudes(psi.as_slice().to_vec())?;
    Ok(PropagationResult { final_state, steps, method: Method::Exact, norm })
}

/// First-order Trotter evolution of the single-qubit oscillator with the
/// drive sampled at step midpoints.
pub fn trotterized_propagate(
    osc: &OscillatorParams,
    p: &DriveParams,
    t_final: f64,
    n_steps: usize,
    s0: &StateVector,
) -> Result<PropagationResult, OracleError> {
    trotterized_propagate_with(osc, p, t_final, n_steps, FieldSampling::Midpoint, s0)
}

pub fn trotterized_propagate_with(
    osc: &OscillatorParams,
    p: &DriveParams,
    t_final: f64,
    n_steps: usize,
    sampling: FieldSampling,
    s0: &StateVector,
) -> Result<PropagationResult, OracleError> {
    let c = build_trotter_circuit(osc, p, t_final, n_steps, sampling)?;
    let out = simulator::run(&c, s0)?;
    let norm = out.norm_sqr().sqrt();
    Ok(PropagationResult { final_state: out, steps: n_steps, method: Method::Trotter, norm })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderOperator {
    pub matrix: CMatrix,
    /// Frobenius norm of `U·U† − I`.
    pub unitarity_deviation: f64,
}

/// First-order two-qubit operator with `a = t·F(t)`:
///
/// ```text
/// [ 1    −ia   0   −ia ]
/// [ −ia   1   +ia   0  ]
/// [ 0    −ia   1   −ia ]
/// [ −ia   0   −ia   1  ]
/// ```
///
/// Entry (1, 2) carries `+ia` while the expansion of `exp(−i·a·M)` would give
/// `−ia` there; the sign is kept as published. The operator is not unitary,
/// and its deviation is returned alongside.
pub fn first_order_two_qubit_operator(p: &DriveParams, t: f64) -> FirstOrderOperator {
    let a = t * drive_force(p, t);
    let m = -I * a;
    let matrix = linalg::from_rows(&[
        &[ONE, m, ZERO, m],
        &[m, ONE, -m, ZERO],
        &[ZERO, m, ONE, m],
        &[m, ZERO, m, ONE],
    ]);
    let unitarity_deviation = linalg::unitarity_deviation(&matrix);
    FirstOrderOperator { matrix, unitarity_deviation }
}

/// Applies [`first_order_two_qubit_operator`] to `s0`; the result is
/// renormalised and the pre-normalisation norm recorded.
pub fn first_order_propagate(
    p: &DriveParams,
    t: f64,
    s0: &StateVector,
) -> Result<PropagationResult, OracleError> {
    if s0.dim() != 4 {
        return Err(OracleError::DimensionMismatch { left: 4, right: s0.dim() });
    }
    let op = first_order_two_qubit_operator(p, t);
    let psi = op.matrix * nalgebra::DVector::from_column_slice(s0.amplitudes());
    let norm = psi.norm();
    let final_state = StateVector::normalized(psi.as_slice().to_vec())?;
    Ok(PropagationResult { final_state, steps: 1, method: Method::FirstOrder, norm })
}

/// `1 − |⟨a|b⟩|`; insensitive to global phase.
pub fn state_distance(a: &StateVector, b: &StateVector) -> Result<f64, OracleError> {
    if a.dim() != b.dim() {
        return Err(OracleError::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    let overlap: Complex64 = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok((1.0 - overlap.norm()).max(0.0))
}

/// `1 − √⟨ψ|ρ|ψ⟩` where `ρ` is the reduced state of `full` on
/// `system_qubits` and `ψ` is pure. Reduces to [`state_distance`] when `full`
/// has no other qubits.
pub fn reduced_state_distance(
    full: &StateVector,
    system_qubits: &[usize],
    pure: &StateVector,
) -> Result<f64, OracleError> {
    let n = full.num_qubits();
    let k = system_qubits.len();
    if pure.num_qubits() != k {
        return Err(OracleError::DimensionMismatch { left: 1 << k, right: pure.dim() });
    }
    if system_qubits.iter().any(|&q| q >= n) {
        return Err(SimulatorError::InvalidQubits(format!("{system_qubits:?}")).into());
    }
    let sys_mask: usize = system_qubits.iter().map(|&q| 1usize << (n - 1 - q)).sum();
    let env_count = 1usize << (n - k);
    // Overlap of ψ with each environment branch, keyed by the env bits.
    let mut branch = std::collections::BTreeMap::<usize, Complex64>::new();
    for (idx, amp) in full.amplitudes().iter().enumerate() {
        let sys = system_qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
            acc | (((idx >> (n - 1 - q)) & 1) << (k - 1 - pos))
        });
        *branch.entry(idx & !sys_mask).or_insert(ZERO) += pure.amplitudes()[sys].conj() * amp;
    }
    debug_assert!(branch.len() <= env_count);
    let fidelity: f64 = branch.values().map(|z| z.norm_sqr()).sum();
    Ok((1.0 - fidelity.sqrt()).max(0.0))
}

/// Total variation distance `½·Σ|p_i − q_i|`.
pub fn dist_tv(p: &Distribution, q: &Distribution) -> Result<f64, OracleError> {
    if p.labels() != q.labels() {
        return Err(OracleError::LabelMismatch);
    }
    Ok(0.5
        * p.probabilities()
            .iter()
            .zip(q.probabilities())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

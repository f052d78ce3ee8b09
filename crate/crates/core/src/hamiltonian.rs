//! Drive function and the one- and two-qubit oscillator Hamiltonians (ħ = 1).
//!
//! The single-qubit Hamiltonian is the two-level truncation
//! `H = ω0·I − (ω0/2)·Z + F(t)·X = [[ω0/2, F], [F, 3ω0/2]]`, written with a
//! symmetric off-diagonal so that it is Hermitian. A commonly reproduced matrix
//! form of this model prints the upper off-diagonal as `−F(t)`; that form is
//! not Hermitian and is not used here.
//!
//! The two-qubit Hamiltonian keeps the `t·F(t)` prefactor on the drive term
//! exactly: `H = (3/2)·ω0·I₄ + t·F(t)·M` with `M = a + a†`. The explicit
//! factor of `t` inside the Hamiltonian is unusual physically but is what the
//! two-qubit construction prescribes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{embed_gate, Gate};
use crate::linalg::{self, CMatrix};
use crate::MATRIX_TOL;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("invalid drive parameter `{field}`: {reason}")]
    InvalidDrive { field: &'static str, reason: String },
    #[error("invalid oscillator frequency: {0}")]
    InvalidOscillator(f64),
    #[error("matrix is not square ({rows}×{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |H_ij − conj(H_ji)| = {deviation:e})")]
    NotHermitian { deviation: f64 },
}

/// Parameters of the periodic force `F(t) = A·cos(ωt + φ)/√(2m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    amplitude: f64,
    mass: f64,
    phase: f64,
    drive_freq: f64,
}

impl DriveParams {
    pub fn new(
        amplitude: f64,
        mass: f64,
        phase: f64,
        drive_freq: f64,
    ) -> Result<Self, HamiltonianError> {
        let bad = |field, reason: &str| HamiltonianError::InvalidDrive {
            field,
            reason: reason.to_string(),
        };
        for (field, v) in [
            ("amplitude", amplitude),
            ("mass", mass),
            ("phase", phase),
            ("drive_freq", drive_freq),
        ] {
            if !v.is_finite() {
                return Err(bad(field, &format!("{v} is not finite")));
            }
        }
        if mass <= 0.0 {
            return Err(bad("mass", &format!("must be > 0, got {mass}")));
        }
        if amplitude < 0.0 {
            return Err(bad("amplitude", &format!("must be >= 0, got {amplitude}")));
        }
        Ok(Self { amplitude, mass, phase, drive_freq })
    }

    /// `A = √(2m)`, `m = 1`, `φ = 0`: the force reduces to `cos(ωt)`.
    pub fn unit_cosine(drive_freq: f64) -> Result<Self, HamiltonianError> {
        Self::new(std::f64::consts::SQRT_2, 1.0, 0.0, drive_freq)
    }

    pub fn with_drive_freq(self, drive_freq: f64) -> Result<Self, HamiltonianError> {
        Self::new(self.amplitude, self.mass, self.phase, drive_freq)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn drive_freq(&self) -> f64 {
        self.drive_freq
    }
}

impl Default for DriveParams {
    fn default() -> Self {
        Self {
            amplitude: std::f64::consts::SQRT_2,
            mass: 1.0,
            phase: 0.0,
            drive_freq: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    osc_freq: f64,
}

impl OscillatorParams {
    pub fn new(osc_freq: f64) -> Result<Self, HamiltonianError> {
        if !osc_freq.is_finite() {
            return Err(HamiltonianError::InvalidOscillator(osc_freq));
        }
        Ok(Self { osc_freq })
    }

    pub fn osc_freq(&self) -> f64 {
        self.osc_freq
    }
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self { osc_freq: 1.0 }
    }
}

/// Dense Hermitian matrix. Construction checks `H = H†` to [`MATRIX_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: CMatrix,
}

impl HermitianOperator {
    pub fn new(entries: CMatrix) -> Result<Self, HamiltonianError> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(HamiltonianError::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        let deviation = linalg::hermiticity_error(&entries);
        if deviation > MATRIX_TOL {
            return Err(HamiltonianError::NotHermitian { deviation });
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }
}

/// Two-qubit ladder operators built from CNOT-type permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderPair {
    pub lowering: CMatrix,
    pub raising: CMatrix,
}

pub fn drive_force(p: &DriveParams, t: f64) -> f64 {
    p.amplitude * (p.drive_freq * t + p.phase).cos() / (2.0 * p.mass).sqrt()
}

pub fn single_qubit_hamiltonian(
    osc: &OscillatorParams,
    p: &DriveParams,
    t: f64,
) -> HermitianOperator {
    let w0 = osc.osc_freq;
    let f = drive_force(p, t);
    HermitianOperator {
        entries: linalg::from_real_rows([[0.5 * w0, f], [f, 1.5 * w0]]),
    }
}

/// `a = (I⊗X)·ACNOT₂₁` and `a† = (I⊗X)·CNOT₂₁`, with the controlled gate
/// applied first. Control is the second qubit, target the first.
pub fn ladder_operators() -> LadderPair {
    let flip_second = embed_gate(&Gate::X { target: 1 }, 2);
    let acnot = embed_gate(&Gate::Acnot { control: 1, target: 0 }, 2);
    let cnot = embed_gate(&Gate::Cnot { control: 1, target: 0 }, 2);
    LadderPair {
        lowering: &flip_second * acnot,
        raising: &flip_second * cnot,
    }
}

/// The 0/1 drive coupling `M` of the two-qubit Hamiltonian.
pub fn two_qubit_drive_matrix() -> HermitianOperator {
    HermitianOperator {
        entries: linalg::from_real_rows([
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0, 0.0],
        ]),
    }
}

pub fn two_qubit_hamiltonian(
    osc: &OscillatorParams,
    p: &DriveParams,
    t: f64,
) -> HermitianOperator {
    let coupling = t * drive_force(p, t);
    let m = two_qubit_drive_matrix().entries;
    let diag = 1.5 * osc.osc_freq;
    HermitianOperator {
        entries: CMatrix::from_fn(4, 4, |i, j| {
            let d = if i == j { diag } else { 0.0 };
            linalg::ONE * d + m[(i, j)] * coupling
        }),
    }
}

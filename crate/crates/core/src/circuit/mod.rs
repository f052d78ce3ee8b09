//! Gate set, the oscillator circuits, lowering and OpenQASM 2.0 text.

mod gate;
pub mod qasm;

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::{drive_force, DriveParams, OscillatorParams};
use crate::linalg::{self, CMatrix};

pub use gate::{embed_gate, gate_matrix, ControlledForm, Gate, GateKind, U3Angles};
pub use qasm::{emit_qasm, parse_qasm, QasmError, QasmErrorKind, QasmOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("unknown gate kind `{0}`")]
    UnknownGate(String),
    #[error("{kind} takes {expected} qubit(s), got {got}")]
    Arity { kind: GateKind, expected: usize, got: usize },
    #[error("{kind} takes {expected} angle(s), got {got}")]
    ParamCount { kind: GateKind, expected: usize, got: usize },
    #[error("{kind} uses qubit {qubit} more than once")]
    DuplicateQubit { kind: GateKind, qubit: usize },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("circuit needs at least one qubit")]
    NoQubits,
    #[error("system qubit list is empty")]
    EmptySystem,
    #[error("system qubit {0} listed more than once")]
    DuplicateSystemQubit(usize),
    #[error("time must be finite and non-negative, got {0}")]
    InvalidTime(f64),
    #[error("step count must be at least 1")]
    ZeroSteps,
    #[error("theta {theta} outside [{min}, {max}]")]
    ThetaOutOfBounds { theta: f64, min: f64, max: f64 },
}

/// An ordered gate list over `num_qubits` qubits, measured on `system_qubits`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    system_qubits: Vec<usize>,
}

impl Circuit {
    pub fn new(num_qubits: usize, system_qubits: Vec<usize>) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        if system_qubits.is_empty() {
            return Err(CircuitError::EmptySystem);
        }
        for (i, &q) in system_qubits.iter().enumerate() {
            if q >= num_qubits {
                return Err(CircuitError::QubitOutOfRange { qubit: q, num_qubits });
            }
            if system_qubits[..i].contains(&q) {
                return Err(CircuitError::DuplicateSystemQubit(q));
            }
        }
        Ok(Self { num_qubits, gates: Vec::new(), system_qubits })
    }

    pub fn with_gates(
        num_qubits: usize,
        system_qubits: Vec<usize>,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Self, CircuitError> {
        let mut c = Self::new(num_qubits, system_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.check_distinct()?;
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.num_qubits) {
            return Err(CircuitError::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn system_qubits(&self) -> &[usize] {
        &self.system_qubits
    }

    /// Composite unitary (later gates multiply from the left).
    pub fn unitary(&self) -> CMatrix {
        let dim = 1usize << self.num_qubits;
        self.gates
            .iter()
            .fold(linalg::identity(dim), |acc, g| embed_gate(g, self.num_qubits) * acc)
    }

    /// Rewrites the circuit over the QASM-native gates
    /// (`U1`, `U3`, `X`, `H`, `CNOT`, `CCNOT` and optionally `CH`).
    pub fn lowered(&self, opts: &QasmOptions) -> Circuit {
        let mut out = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            lower_gate(g, opts, &mut out);
        }
        Circuit {
            num_qubits: self.num_qubits,
            gates: out,
            system_qubits: self.system_qubits.clone(),
        }
    }
}

/// Controlled-U3 as
/// `u1((λ+φ)/2) c; u1((λ−φ)/2) t; cx c,t; u3(−θ/2, 0, −(φ+λ)/2) t; cx c,t; u3(θ/2, φ, 0) t`.
/// The first `u1` on the control restores the relative phase so the result
/// equals `|0⟩⟨0|⊗I + |1⟩⟨1|⊗U3(θ,φ,λ)` exactly, not just up to phase.
pub fn controlled_u3_decomposition(control: usize, target: usize, a: U3Angles) -> Vec<Gate> {
    vec![
        Gate::U1 { lambda: (a.lambda + a.phi) / 2.0, target: control },
        Gate::U1 { lambda: (a.lambda - a.phi) / 2.0, target },
        Gate::Cnot { control, target },
        Gate::U3 {
            angles: U3Angles::new(-a.theta / 2.0, 0.0, -(a.phi + a.lambda) / 2.0),
            target,
        },
        Gate::Cnot { control, target },
        Gate::U3 { angles: U3Angles::new(a.theta / 2.0, a.phi, 0.0), target },
    ]
}

/// Controlled-Hadamard as `s t; h t; t t; cx c,t; tdg t; h t; sdg t`,
/// with the phase gates written as `u1`.
pub fn controlled_h_decomposition(control: usize, target: usize) -> Vec<Gate> {
    vec![
        Gate::U1 { lambda: FRAC_PI_2, target },
        Gate::H { target },
        Gate::U1 { lambda: FRAC_PI_4, target },
        Gate::Cnot { control, target },
        Gate::U1 { lambda: -FRAC_PI_4, target },
        Gate::H { target },
        Gate::U1 { lambda: -FRAC_PI_2, target },
    ]
}

fn lower_gate(g: &Gate, opts: &QasmOptions, out: &mut Vec<Gate>) {
    match *g {
        Gate::Acnot { control, target } => {
            out.push(Gate::X { target: control });
            out.push(Gate::Cnot { control, target });
            out.push(Gate::X { target: control });
        }
        Gate::AcU3 { control, target, angles } => {
            out.push(Gate::X { target: control });
            out.extend(controlled_u3_decomposition(control, target, angles));
            out.push(Gate::X { target: control });
        }
        Gate::Ch { control, target } if opts.decompose_ch => {
            out.extend(controlled_h_decomposition(control, target));
        }
        other => out.push(other),
    }
}

fn check_time(t: f64) -> Result<(), CircuitError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(CircuitError::InvalidTime(t))
    }
}

/// Single-qubit oscillator circuit: `U3(2·t·F(t), −π/2, π/2)` followed by
/// `U1(−ω0·t)`, so the composite is `U1·U3`.
pub fn build_single_qubit_circuit(
    osc: &OscillatorParams,
    p: &DriveParams,
    t: f64,
) -> Result<Circuit, CircuitError> {
    check_time(t)?;
    let f = drive_force(p, t);
    Circuit::with_gates(
        1,
        vec![0],
        [
            Gate::U3 { angles: U3Angles::x_rotation(2.0 * t * f), target: 0 },
            Gate::U1 { lambda: -osc.osc_freq() * t, target: 0 },
        ],
    )
}

/// Where the drive is sampled inside each Trotter step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldSampling {
    #[default]
    Midpoint,
    /// End of the step; with one step this is the single-shot circuit.
    StepEnd,
}

/// First-order Trotter circuit: `n_steps` repetitions of
/// `U3(2·Δt·F(t_k), −π/2, π/2)` then `U1(−ω0·Δt)`.
pub fn build_trotter_circuit(
    osc: &OscillatorParams,
    p: &DriveParams,
    t_final: f64,
    n_steps: usize,
    sampling: FieldSampling,
) -> Result<Circuit, CircuitError> {
    check_time(t_final)?;
    if n_steps == 0 {
        return Err(CircuitError::ZeroSteps);
    }
    let dt = t_final / n_steps as f64;
    let mut c = Circuit::new(1, vec![0])?;
    for k in 0..n_steps {
        let t = match sampling {
            FieldSampling::Midpoint => (k as f64 + 0.5) * dt,
            FieldSampling::StepEnd => (k + 1) as f64 * dt,
        };
        let f = drive_force(p, t);
        c.push(Gate::U3 { angles: U3Angles::x_rotation(2.0 * dt * f), target: 0 })?;
        c.push(Gate::U1 { lambda: -osc.osc_freq() * dt, target: 0 })?;
    }
    Ok(c)
}

/// Admissible range for the two-qubit rotation angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaBounds {
    pub min: f64,
    pub max: f64,
}

impl ThetaBounds {
    /// The published sweep range, `[0, 0.5]`.
    pub const SWEEP: ThetaBounds = ThetaBounds { min: 0.0, max: 0.5 };
    /// Range produced by [`bind_theta_from_time`], `[−0.5, 0.5]`.
    pub const BOUND_FROM_TIME: ThetaBounds = ThetaBounds { min: -0.5, max: 0.5 };
    pub const UNBOUNDED: ThetaBounds = ThetaBounds {
        min: f64::NEG_INFINITY,
        max: f64::INFINITY,
    };

    pub fn check(&self, theta: f64) -> Result<(), CircuitError> {
        if theta.is_finite() && theta >= self.min && theta <= self.max {
            Ok(())
        } else {
            Err(CircuitError::ThetaOutOfBounds { theta, min: self.min, max: self.max })
        }
    }
}

impl Default for ThetaBounds {
    fn default() -> Self {
        Self::SWEEP
    }
}

/// Five-qubit circuit for the two-qubit oscillator.
///
/// Qubits 0 and 1 are the system (measured); 2, 3 and 4 are ancillas starting
/// in `|0⟩`. Qubit 4 is allocated but no gate touches it. With 1-based labels
/// the sequence is `CNOT₁₃, AC-U3₃₁, CCNOT₁₃₂, AC-U3₃₂, CNOT₁₂, H₄, CNOT₄₂,
/// CNOT₄₁, H₄, CH₄₁`, both AC-U3 carrying `(θ, −π/2, π/2)`.
pub fn build_two_qubit_circuit(theta: f64, bounds: ThetaBounds) -> Result<Circuit, CircuitError> {
    bounds.check(theta)?;
    let rot = U3Angles::x_rotation(theta);
    Circuit::with_gates(
        5,
        vec![0, 1],
        [
            Gate::Cnot { control: 0, target: 2 },
            Gate::AcU3 { control: 2, target: 0, angles: rot },
            Gate::Ccnot { controls: [0, 2], target: 1 },
            Gate::AcU3 { control: 2, target: 1, angles: rot },
            Gate::Cnot { control: 0, target: 1 },
            Gate::H { target: 3 },
            Gate::Cnot { control: 3, target: 1 },
            Gate::Cnot { control: 3, target: 0 },
            Gate::H { target: 3 },
            Gate::Ch { control: 3, target: 0 },
        ],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaBinding {
    pub theta: f64,
    pub clamped: bool,
}

/// `θ = clamp(t·F(t), −0.5, 0.5)`.
pub fn bind_theta_from_time(p: &DriveParams, t: f64) -> ThetaBinding {
    let raw = t * drive_force(p, t);
    let b = ThetaBounds::BOUND_FROM_TIME;
    let theta = raw.clamp(b.min, b.max);
    ThetaBinding { theta, clamped: theta != raw }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_deviation, I, ONE, ZERO};
    use proptest::prelude::*;
    use std::f64::consts::{PI, SQRT_2};

    fn x_on(q: usize, n: usize) -> CMatrix {
        embed_gate(&Gate::X { target: q }, n)
    }

    #[test]
    fn u1_pi_is_z() {
        let m = gate_matrix(&Gate::U1 { lambda: PI, target: 0 });
        assert!((m[(0, 0)] - ONE).norm() < 1e-15);
        assert!((m[(1, 1)] + ONE).norm() < 1e-15);
        assert_eq!(m[(0, 1)], ZERO);
    }

    #[test]
    fn u3_x_rotation_form() {
        for theta in [0.0, 0.3, 1.0, 2.5, -1.2] {
            let m = gate_matrix(&Gate::U3 { angles: U3Angles::x_rotation(theta), target: 0 });
            let (s, c) = (theta / 2.0).sin_cos();
            let expected = linalg::from_rows(&[&[ONE * c, -I * s], &[-I * s, ONE * c]]);
            assert!(max_abs_diff(&m, &expected) < 1e-15);
        }
    }

    #[test]
    fn cnot_matrix_is_textbook() {
        let m = gate_matrix(&Gate::Cnot { control: 0, target: 1 });
        let expected = linalg::from_real_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(m, expected);
    }

    #[test]
    fn anti_controlled_is_x_conjugated() {
        for (c, t) in [(0, 1), (1, 0)] {
            let acnot = embed_gate(&Gate::Acnot { control: c, target: t }, 2);
            let cnot = embed_gate(&Gate::Cnot { control: c, target: t }, 2);
            assert_eq!(acnot, x_on(c, 2) * cnot * x_on(c, 2));

            let a = U3Angles::new(0.7, -0.4, 1.9);
            let acu3 = embed_gate(&Gate::AcU3 { control: c, target: t, angles: a }, 2);
            let cu3 = controlled(&Gate::U3 { angles: a, target: t }, c, 2);
            assert!(max_abs_diff(&acu3, &(x_on(c, 2) * cu3 * x_on(c, 2))) == 0.0);
        }
        // Local 4x4 form, control |0> on the high bit.
        let m = gate_matrix(&Gate::Acnot { control: 0, target: 1 });
        assert_eq!(
            m,
            linalg::from_real_rows([
                [0.0, 1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ])
        );
    }

    // |0><0|_c ⊗ I + |1><1|_c ⊗ U, built from projectors.
    fn controlled(u: &Gate, control: usize, n: usize) -> CMatrix {
        let dim = 1 << n;
        let u_full = embed_gate(u, n);
        let bit = 1 << (n - 1 - control);
        let p1 = CMatrix::from_fn(dim, dim, |r, c| {
            if r == c && r & bit != 0 { ONE } else { ZERO }
        });
        let p0 = linalg::identity(dim) - &p1;
        p0 + &p1 * u_full * &p1
    }

    #[test]
    fn involutions() {
        let id = |n: usize| linalg::identity(1 << n);
        let cnot = gate_matrix(&Gate::Cnot { control: 0, target: 1 });
        let ccnot = gate_matrix(&Gate::Ccnot { controls: [0, 1], target: 2 });
        let ch = gate_matrix(&Gate::Ch { control: 0, target: 1 });
        assert!(max_abs_diff(&(&cnot * &cnot), &id(2)) < 1e-12);
        assert!(max_abs_diff(&(&ccnot * &ccnot), &id(3)) < 1e-12);
        assert!(max_abs_diff(&(&ch * &ch), &id(2)) < 1e-12);
    }

    #[test]
    fn ccnot_flips_only_on_11() {
        let m = gate_matrix(&Gate::Ccnot { controls: [0, 1], target: 2 });
        for col in 0..8 {
            let row = if col >= 6 { col ^ 1 } else { col };
            assert_eq!(m[(row, col)], ONE);
        }
    }

    #[test]
    fn decompositions_are_exact() {
        let a = U3Angles::new(0.83, -1.1, 0.37);
        for (c, t) in [(0, 1), (1, 0)] {
            let dec = Circuit::with_gates(2, vec![0], controlled_u3_decomposition(c, t, a)).unwrap();
            let reference = controlled(&Gate::U3 { angles: a, target: t }, c, 2);
            assert!(max_abs_diff(&dec.unitary(), &reference) < 1e-14);

            let dec = Circuit::with_gates(2, vec![0], controlled_h_decomposition(c, t)).unwrap();
            let reference = embed_gate(&Gate::Ch { control: c, target: t }, 2);
            assert!(max_abs_diff(&dec.unitary(), &reference) < 1e-14);
        }
    }

    #[test]
    fn lowering_preserves_unitary() {
        let c = build_two_qubit_circuit(0.37, ThetaBounds::SWEEP).unwrap();
        for decompose_ch in [false, true] {
            let low = c.lowered(&QasmOptions { decompose_ch });
            assert!(low.gates().iter().all(|g| !matches!(
                g.kind(),
                GateKind::Acnot | GateKind::AcU3
            )));
            assert_eq!(
                low.gates().iter().any(|g| g.kind() == GateKind::Ch),
                !decompose_ch
            );
            assert!(max_abs_diff(&low.unitary(), &c.unitary()) < 1e-12);
        }
    }

    #[test]
    fn single_qubit_circuit_properties() {
        let osc = OscillatorParams::new(1.0).unwrap();
        let p = DriveParams::unit_cosine(1.0).unwrap();
        let c = build_single_qubit_circuit(&osc, &p, 0.0).unwrap();
        assert!(max_abs_diff(&c.unitary(), &linalg::identity(2)) < 1e-15);

        let t = 1.3;
        let c = build_single_qubit_circuit(&osc, &p, t).unwrap();
        assert_eq!(c.gates().len(), 2);
        let u3 = gate_matrix(&c.gates()[0]);
        let u1 = gate_matrix(&c.gates()[1]);
        assert_eq!(c.gates()[0].kind(), GateKind::U3);
        assert_eq!(c.gates()[1].kind(), GateKind::U1);
        assert!(max_abs_diff(&c.unitary(), &(u1 * u3)) < 1e-15);

        // F·t = π/2 with a constant drive: full population transfer.
        let t = 1.0;
        let p = DriveParams::new(SQRT_2 * PI / 2.0, 1.0, 0.0, 0.0).unwrap();
        let c = build_single_qubit_circuit(&osc, &p, t).unwrap();
        let u = c.unitary();
        assert!((u[(1, 0)].norm_sqr() - 1.0).abs() < 1e-15);

        assert!(matches!(
            build_single_qubit_circuit(&osc, &p, -1.0),
            Err(CircuitError::InvalidTime(_))
        ));
    }

    #[test]
    fn two_qubit_circuit_shape() {
        let c = build_two_qubit_circuit(0.25, ThetaBounds::SWEEP).unwrap();
        let kinds: Vec<GateKind> = c.gates().iter().map(Gate::kind).collect();
        use GateKind::*;
        assert_eq!(kinds, vec![Cnot, AcU3, Ccnot, AcU3, Cnot, H, Cnot, Cnot, H, Ch]);
        let ops: Vec<Vec<usize>> = c.gates().iter().map(Gate::qubits).collect();
        assert_eq!(
            ops,
            vec![
                vec![0, 2],
                vec![2, 0],
                vec![0, 2, 1],
                vec![2, 1],
                vec![0, 1],
                vec![3],
                vec![3, 1],
                vec![3, 0],
                vec![3],
                vec![3, 0]
            ]
        );
        assert_eq!(c.num_qubits(), 5);
        assert_eq!(c.system_qubits(), &[0, 1]);
        assert!(c.gates().iter().all(|g| !g.qubits().contains(&4)));
        match c.gates()[1] {
            Gate::AcU3 { angles, .. } => {
                assert_eq!(angles, U3Angles::new(0.25, -PI / 2.0, PI / 2.0));
            }
            _ => unreachable!(),
        }
        assert!(unitarity_deviation(&c.unitary()) < 1e-10);
    }

    #[test]
    fn two_qubit_theta_zero_payload_is_identity() {
        let m = gate_matrix(&Gate::U3 { angles: U3Angles::x_rotation(0.0), target: 0 });
        assert!(max_abs_diff(&m, &linalg::identity(2)) == 0.0);
        let c = build_two_qubit_circuit(0.0, ThetaBounds::SWEEP).unwrap();
        for g in c.gates().iter().filter(|g| g.kind() == GateKind::AcU3) {
            let m = gate_matrix(g);
            assert!(max_abs_diff(&m, &linalg::identity(4)) < 1e-15);
        }
    }

    #[test]
    fn theta_bounds() {
        assert!(build_two_qubit_circuit(0.6, ThetaBounds::SWEEP).is_err());
        assert!(build_two_qubit_circuit(-0.1, ThetaBounds::SWEEP).is_err());
        assert!(build_two_qubit_circuit(-0.1, ThetaBounds::BOUND_FROM_TIME).is_ok());
        assert!(build_two_qubit_circuit(3.0, ThetaBounds::UNBOUNDED).is_ok());
        assert!(build_two_qubit_circuit(f64::NAN, ThetaBounds::UNBOUNDED).is_err());
    }

    #[test]
    fn theta_binding() {
        let p = DriveParams::unit_cosine(0.0).unwrap();
        assert_eq!(bind_theta_from_time(&p, 0.0), ThetaBinding { theta: 0.0, clamped: false });
        let b = bind_theta_from_time(&p, 0.3);
        assert!((b.theta - 0.3).abs() < 1e-15 && !b.clamped);
        assert_eq!(bind_theta_from_time(&p, 2.0), ThetaBinding { theta: 0.5, clamped: true });
        let neg = DriveParams::new(SQRT_2, 1.0, PI, 0.0).unwrap();
        assert_eq!(bind_theta_from_time(&neg, 2.0), ThetaBinding { theta: -0.5, clamped: true });
    }

    #[test]
    fn trotter_circuit_single_step_step_end_is_single_shot() {
        let osc = OscillatorParams::new(1.3).unwrap();
        let p = DriveParams::unit_cosine(2.0).unwrap();
        let a = build_trotter_circuit(&osc, &p, 0.9, 1, FieldSampling::StepEnd).unwrap();
        let b = build_single_qubit_circuit(&osc, &p, 0.9).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            build_trotter_circuit(&osc, &p, 0.9, 0, FieldSampling::Midpoint),
            Err(CircuitError::ZeroSteps)
        );
    }

    #[test]
    fn circuit_validation() {
        assert_eq!(Circuit::new(0, vec![0]), Err(CircuitError::NoQubits));
        assert_eq!(Circuit::new(2, vec![]), Err(CircuitError::EmptySystem));
        assert!(Circuit::new(2, vec![2]).is_err());
        assert!(Circuit::new(2, vec![1, 1]).is_err());
        let mut c = Circuit::new(2, vec![0]).unwrap();
        assert!(c.push(Gate::Cnot { control: 0, target: 2 }).is_err());
        assert!(c.push(Gate::Cnot { control: 1, target: 1 }).is_err());
        assert!("zz".parse::<GateKind>().is_err());
        assert_eq!("ac-u3".parse::<GateKind>().unwrap(), GateKind::AcU3);
        assert!(Gate::from_parts(GateKind::U3, &[1.0], &[0]).is_err());
        assert!(Gate::from_parts(GateKind::Cnot, &[], &[0]).is_err());
        let g = Gate::from_parts(GateKind::AcU3, &[0.1, 0.2, 0.3], &[1, 0]).unwrap();
        assert_eq!(g.params(), vec![0.1, 0.2, 0.3]);
        assert_eq!(g.qubits(), vec![1, 0]);
    }

    fn any_gate(n: usize) -> impl Strategy<Value = Gate> {
        let angle = -4.0 * PI..4.0 * PI;
        (
            0..GateKind::ALL.len(),
            proptest::collection::vec(angle, 3),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_filter_map("arity exceeds register", move |(k, angles, qs)| {
                let kind = GateKind::ALL[k];
                if kind.arity() > n {
                    return None;
                }
                Gate::from_parts(kind, &angles[..kind.num_params()], &qs[..kind.arity()]).ok()
            })
    }

    proptest! {
        #[test]
        fn gate_matrices_are_unitary(g in any_gate(3)) {
            prop_assert!(unitarity_deviation(&gate_matrix(&g)) < 1e-12);
            prop_assert!(unitarity_deviation(&embed_gate(&g, 3)) < 1e-12);
        }
    }
}

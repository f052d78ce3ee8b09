use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CircuitError;
use crate::linalg::{CMatrix, I, ONE, ZERO};

/// Angles of the generic single-qubit rotation
/// `U3(θ, φ, λ) = [[cos(θ/2), −e^{iλ}·sin(θ/2)], [e^{iφ}·sin(θ/2), e^{i(φ+λ)}·cos(θ/2)]]`.
///
/// This is the qelib1 convention. A variant with `+e^{−iλ}` in the upper
/// right is sometimes quoted; it is not unitary for general angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct U3Angles {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

impl U3Angles {
    pub const fn new(theta: f64, phi: f64, lambda: f64) -> Self {
        Self { theta, phi, lambda }
    }

    /// `(φ, λ) = (−π/2, π/2)`, which turns U3 into `exp(−i·(θ/2)·X)`.
    pub const fn x_rotation(theta: f64) -> Self {
        Self::new(theta, -std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2)
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        [
            [ONE * c, -(I * self.lambda).exp() * s],
            [(I * self.phi).exp() * s, (I * (self.phi + self.lambda)).exp() * c],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    H,
    U1,
    U3,
    Cnot,
    Acnot,
    Ccnot,
    Ch,
    AcU3,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::X,
        GateKind::H,
        GateKind::U1,
        GateKind::U3,
        GateKind::Cnot,
        GateKind::Acnot,
        GateKind::Ccnot,
        GateKind::Ch,
        GateKind::AcU3,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::H | GateKind::U1 | GateKind::U3 => 1,
            GateKind::Cnot | GateKind::Acnot | GateKind::Ch | GateKind::AcU3 => 2,
            GateKind::Ccnot => 3,
        }
    }

    pub fn num_params(self) -> usize {
        match self {
            GateKind::U1 => 1,
            GateKind::U3 | GateKind::AcU3 => 3,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::U1 => "U1",
            GateKind::U3 => "U3",
            GateKind::Cnot => "CNOT",
            GateKind::Acnot => "ACNOT",
            GateKind::Ccnot => "CCNOT",
            GateKind::Ch => "CH",
            GateKind::AcU3 => "AC-U3",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let kind = match s.to_ascii_uppercase().as_str() {
            "X" => GateKind::X,
            "H" => GateKind::H,
            "U1" => GateKind::U1,
            "U3" => GateKind::U3,
            "CNOT" | "CX" => GateKind::Cnot,
            "ACNOT" => GateKind::Acnot,
            "CCNOT" | "CCX" | "TOFFOLI" => GateKind::Ccnot,
            "CH" => GateKind::Ch,
            "AC-U3" | "ACU3" => GateKind::AcU3,
            _ => return Err(CircuitError::UnknownGate(s.to_string())),
        };
        Ok(kind)
    }
}

/// One gate with its qubit operands (controls first, target last).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    X { target: usize },
    H { target: usize },
    /// `diag(1, e^{iλ})`.
    U1 { lambda: f64, target: usize },
    U3 { angles: U3Angles, target: usize },
    Cnot { control: usize, target: usize },
    /// NOT on the target when the control is `|0⟩`.
    Acnot { control: usize, target: usize },
    Ccnot { controls: [usize; 2], target: usize },
    Ch { control: usize, target: usize },
    /// U3 on the target when the control is `|0⟩`.
    AcU3 { control: usize, target: usize, angles: U3Angles },
}

/// A gate viewed as a single-qubit payload conditioned on control values.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledForm {
    /// `(qubit, required value)`.
    pub controls: Vec<(usize, bool)>,
    pub target: usize,
    pub payload: [[Complex64; 2]; 2],
}

impl Gate {
    /// Builds a gate from a kind, angle list and operand list, checking arity.
    pub fn from_parts(kind: GateKind, params: &[f64], qubits: &[usize]) -> Result<Self, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity {
                kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        if params.len() != kind.num_params() {
            return Err(CircuitError::ParamCount {
                kind,
                expected: kind.num_params(),
                got: params.len(),
            });
        }
        let u3 = || U3Angles::new(params[0], params[1], params[2]);
        let gate = match kind {
            GateKind::X => Gate::X { target: qubits[0] },
            GateKind::H => Gate::H { target: qubits[0] },
            GateKind::U1 => Gate::U1 { lambda: params[0], target: qubits[0] },
            GateKind::U3 => Gate::U3 { angles: u3(), target: qubits[0] },
            GateKind::Cnot => Gate::Cnot { control: qubits[0], target: qubits[1] },
            GateKind::Acnot => Gate::Acnot { control: qubits[0], target: qubits[1] },
            GateKind::Ccnot => Gate::Ccnot {
                controls: [qubits[0], qubits[1]],
                target: qubits[2],
            },
            GateKind::Ch => Gate::Ch { control: qubits[0], target: qubits[1] },
            GateKind::AcU3 => Gate::AcU3 {
                control: qubits[0],
                target: qubits[1],
                angles: u3(),
            },
        };
        gate.check_distinct()?;
        Ok(gate)
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X { .. } => GateKind::X,
            Gate::H { .. } => GateKind::H,
            Gate::U1 { .. } => GateKind::U1,
            Gate::U3 { .. } => GateKind::U3,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Acnot { .. } => GateKind::Acnot,
            Gate::Ccnot { .. } => GateKind::Ccnot,
            Gate::Ch { .. } => GateKind::Ch,
            Gate::AcU3 { .. } => GateKind::AcU3,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X { target } | Gate::H { target } => vec![target],
            Gate::U1 { target, .. } | Gate::U3 { target, .. } => vec![target],
            Gate::Cnot { control, target }
            | Gate::Acnot { control, target }
            | Gate::Ch { control, target }
            | Gate::AcU3 { control, target, .. } => vec![control, target],
            Gate::Ccnot { controls, target } => vec![controls[0], controls[1], target],
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::U1 { lambda, .. } => vec![lambda],
            Gate::U3 { angles, .. } | Gate::AcU3 { angles, .. } => {
                vec![angles.theta, angles.phi, angles.lambda]
            }
            _ => Vec::new(),
        }
    }

    pub(crate) fn check_distinct(&self) -> Result<(), CircuitError> {
        let qs = self.qubits();
        for (i, a) in qs.iter().enumerate() {
            if qs[i + 1..].contains(a) {
                return Err(CircuitError::DuplicateQubit { kind: self.kind(), qubit: *a });
            }
        }
        Ok(())
    }

    pub fn controlled_form(&self) -> ControlledForm {
        let x = [[ZERO, ONE], [ONE, ZERO]];
        let h = {
            let s = ONE * std::f64::consts::FRAC_1_SQRT_2;
            [[s, s], [s, -s]]
        };
        let (controls, target, payload) = match *self {
            Gate::X { target } => (vec![], target, x),
            Gate::H { target } => (vec![], target, h),
            Gate::U1 { lambda, target } => (vec![], target, [[ONE, ZERO], [ZERO, (I * lambda).exp()]]),
            Gate::U3 { angles, target } => (vec![], target, angles.matrix()),
            Gate::Cnot { control, target } => (vec![(control, true)], target, x),
            Gate::Acnot { control, target } => (vec![(control, false)], target, x),
            Gate::Ccnot { controls, target } => {
                (vec![(controls[0], true), (controls[1], true)], target, x)
            }
            Gate::Ch { control, target } => (vec![(control, true)], target, h),
            Gate::AcU3 { control, target, angles } => {
                (vec![(control, false)], target, angles.matrix())
            }
        };
        ControlledForm { controls, target, payload }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind())?;
        let params = self.params();
        if !params.is_empty() {
            let p: Vec<String> = params.iter().map(|v| format!("{v}")).collect();
            write!(f, "({})", p.join(", "))?;
        }
        let q: Vec<String> = self.qubits().iter().map(|v| v.to_string()).collect();
        write!(f, " [{}]", q.join(", "))
    }
}

/// Unitary of `g` on its own operands, `2^arity × 2^arity`.
///
/// Local index: the operands in `g.qubits()` order, first operand most
/// significant. For `CNOT(c, t)` this is the textbook
/// `[[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,0]]`.
pub fn gate_matrix(g: &Gate) -> CMatrix {
    let form = g.controlled_form();
    let arity = form.controls.len() + 1;
    let dim = 1usize << arity;
    // The target is the last (least significant) local bit.
    let controls_ok = |idx: usize| {
        form.controls.iter().enumerate().all(|(k, &(_, want))| {
            let bit = (idx >> (arity - 1 - k)) & 1 == 1;
            bit == want
        })
    };
    CMatrix::from_fn(dim, dim, |r, c| {
        if (r >> 1) != (c >> 1) {
            return ZERO;
        }
        if controls_ok(c) {
            form.payload[r & 1][c & 1]
        } else if r == c {
            ONE
        } else {
            ZERO
        }
    })
}

/// Full `2^n × 2^n` matrix of `g` acting on an `n`-qubit register.
///
/// This materialises the operator explicitly and is used as a reference
/// against the simulator's in-place kernel.
pub fn embed_gate(g: &Gate, num_qubits: usize) -> CMatrix {
    let local = gate_matrix(g);
    let qubits = g.qubits();
    let k = qubits.len();
    let dim = 1usize << num_qubits;
    let bit = |q: usize| 1usize << (num_qubits - 1 - q);
    let gate_mask: usize = qubits.iter().map(|&q| bit(q)).sum();
    let local_index = |full: usize| {
        qubits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (pos, &q)| acc | (((full & bit(q) != 0) as usize) << (k - 1 - pos)))
    };
    let scatter = |rest: usize, local: usize| {
        qubits.iter().enumerate().fold(rest, |acc, (pos, &q)| {
            if (local >> (k - 1 - pos)) & 1 == 1 {
                acc | bit(q)
            } else {
                acc
            }
        })
    };
    let mut full = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let rest = col & !gate_mask;
        let lc = local_index(col);
        for lr in 0..(1usize << k) {
            full[(scatter(rest, lr), col)] = local[(lr, lc)];
        }
    }
    full
}

//! C interface to `qho-core`.
//!
//! Circuits and states are opaque heap handles owned by the caller and
//! released with `qho_circuit_free` / `qho_state_free`. Every fallible call
//! returns a `QhoStatus`; on failure `qho_last_error` describes the problem
//! for the calling thread. Strings returned through out-parameters are freed
//! with `qho_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qho_core::circuit::{
    build_single_qubit_circuit, build_two_qubit_circuit, emit_qasm, parse_qasm, QasmOptions, ThetaBounds,
};
use qho_core::hamiltonian::drive_force;
use qho_core::simulator::{init_state, marginal_probabilities, sample_shots};
use qho_core::{Circuit, Distribution, DriveParams, OscillatorParams, StateVector};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QhoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Simulation = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque circuit handle.
pub struct QhoCircuit(Circuit);

/// Opaque state-vector handle.
pub struct QhoState(StateVector);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: QhoStatus, msg: impl Into<String>) -> QhoStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> QhoStatus) -> QhoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(QhoStatus::Panic, "internal panic"),
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(QhoStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qho_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qho_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qho_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn drive(amplitude: f64, mass: f64, phase: f64, omega: f64) -> Result<DriveParams, QhoStatus> {
    DriveParams::new(amplitude, mass, phase, omega).map_err(|e| fail(QhoStatus::InvalidArgument, e.to_string()))
}

/// F(t) = A·cos(ωt + φ)/√(2m).
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qho_drive_force(
    amplitude: f64,
    mass: f64,
    phase: f64,
    omega: f64,
    t: f64,
    out: *mut f64,
) -> QhoStatus {
    guard(|| {
        non_null!(out);
        match drive(amplitude, mass, phase, omega) {
            Ok(p) => {
                *out = drive_force(&p, t);
                QhoStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Single-qubit oscillator circuit at time `t`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qho_circuit_single_qubit(
    omega0: f64,
    amplitude: f64,
    mass: f64,
    phase: f64,
    omega: f64,
    t: f64,
    out: *mut *mut QhoCircuit,
) -> QhoStatus {
    guard(|| {
        non_null!(out);
        let p = match drive(amplitude, mass, phase, omega) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let osc = match OscillatorParams::new(omega0) {
            Ok(o) => o,
            Err(e) => return fail(QhoStatus::InvalidArgument, e.to_string()),
        };
        match build_single_qubit_circuit(&osc, &p, t) {
            Ok(c) => {
                write_out(out, QhoCircuit(c));
                QhoStatus::Ok
            }
            Err(e) => fail(QhoStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Five-qubit circuit for the two-qubit oscillator; `theta` must lie in
/// [0, 0.5].
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qho_circuit_two_qubit(theta: f64, out: *mut *mut QhoCircuit) -> QhoStatus {
    guard(|| {
        non_null!(out);
        match build_two_qubit_circuit(theta, ThetaBounds::SWEEP) {
            Ok(c) => {
                write_out(out, QhoCircuit(c));
                QhoStatus::Ok
            }
            Err(e) => fail(QhoStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Parses an OpenQASM 2.0 program.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qho_circuit_from_qasm(text: *const c_char, out: *mut *mut QhoCircuit) -> QhoStatus {
    guard(|| {
        non_null!(text, out);
        let text = match CStr::from_ptr(text).to_str() {
            Ok(t) => t,
            Err(_) => return fail(QhoStatus::InvalidArgument, "program is not valid UTF-8"),
        };
        match parse_qasm(text) {
            Ok(c) => {
                write_out(out, QhoCircuit(c));
                QhoStatus::Ok
            }
            Err(e) => fail(QhoStatus::Parse, e.to_string()),
        }
    })
}

/// Serialises a circuit to OpenQASM 2.0. Free the result with
/// `qho_string_free`.
///
/// # Safety
/// `c` must be a live circuit handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qho_circuit_to_qasm(
    c: *const QhoCircuit,
    decompose_ch: bool,
    out: *mut *mut c_char,
) -> QhoStatus {
    guard(|| {
        non_null!(c, out);
        let text = emit_qasm(&(*c).0, &QasmOptions { decompose_ch });
        *out = CString::new(text).expect("qasm has no NUL").into_raw();
        QhoStatus::Ok
    })
}

/// # Safety
/// `c` must be a live circuit handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qho_circuit_num_qubits(c: *const QhoCircuit, out: *mut usize) -> QhoStatus {
    guard(|| {
        non_null!(c, out);
        *out = (*c).0.num_qubits();
        QhoStatus::Ok
    })
}

/// # Safety
/// `c` must be a live circuit handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qho_circuit_num_gates(c: *const QhoCircuit, out: *mut usize) -> QhoStatus {
    guard(|| {
        non_null!(c, out);
        *out = (*c).0.gates().len();
        QhoStatus::Ok
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qho_circuit_free(c: *mut QhoCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Computational basis state |basis_index⟩ on `num_qubits` qubits.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qho_state_new(num_qubits: usize, basis_index: usize, out: *mut *mut QhoState) -> QhoStatus {
    guard(|| {
        non_null!(out);
        match init_state(num_qubits, basis_index) {
            Ok(s) => {
                write_out(out, QhoState(s));
                QhoStatus::Ok
            }
            Err(e) => fail(QhoStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Applies every gate of `c` to `s` in place.
///
/// # Safety
/// `s` and `c` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn qho_state_run(s: *mut QhoState, c: *const QhoCircuit) -> QhoStatus {
    guard(|| {
        non_null!(s, c);
        match qho_core::simulator::run(&(*c).0, &(*s).0) {
            Ok(next) => {
                (*s).0 = next;
                QhoStatus::Ok
            }
            Err(e) => fail(QhoStatus::Simulation, e.to_string()),
        }
    })
}

/// Number of amplitudes, 2^n.
///
/// # Safety
/// `s` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qho_state_dim(s: *const QhoState, out: *mut usize) -> QhoStatus {
    guard(|| {
        non_null!(s, out);
        *out = (*s).0.dim();
        QhoStatus::Ok
    })
}

/// Copies amplitudes into `re` and `im`, each of length `len >= dim`.
///
/// # Safety
/// `s` must be a live handle; `re` and `im` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qho_state_amplitudes(
    s: *const QhoState,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QhoStatus {
    guard(|| {
        non_null!(s, re, im);
        let amps = (*s).0.amplitudes();
        if len < amps.len() {
            return fail(QhoStatus::BufferTooSmall, format!("need {} entries, got {len}", amps.len()));
        }
        for (i, a) in amps.iter().enumerate() {
            *re.add(i) = a.re;
            *im.add(i) = a.im;
        }
        QhoStatus::Ok
    })
}

/// Marginal distribution over `qubits` (first listed qubit is the most
/// significant bit of the outcome index). `probs` needs 2^num_qubits entries.
///
/// # Safety
/// `s` must be a live handle; `qubits` must be valid for `num_qubits` reads
/// and `probs` for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qho_state_marginal(
    s: *const QhoState,
    qubits: *const usize,
    num_qubits: usize,
    probs: *mut f64,
    len: usize,
) -> QhoStatus {
    guard(|| {
        non_null!(s, qubits, probs);
        let qs = std::slice::from_raw_parts(qubits, num_qubits);
        let d = match marginal_probabilities(&(*s).0, qs) {
            Ok(d) => d,
            Err(e) => return fail(QhoStatus::InvalidArgument, e.to_string()),
        };
        let p = d.probabilities();
        if len < p.len() {
            return fail(QhoStatus::BufferTooSmall, format!("need {} entries, got {len}", p.len()));
        }
        std::ptr::copy_nonoverlapping(p.as_ptr(), probs, p.len());
        QhoStatus::Ok
    })
}

/// Draws `shots` samples from a distribution over 2^width outcomes with a
/// seeded generator and writes the per-outcome counts.
///
/// # Safety
/// `probs` must be valid for 2^width reads and `counts` for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qho_sample_shots(
    probs: *const f64,
    width: usize,
    shots: u64,
    seed: u64,
    counts: *mut u64,
    len: usize,
) -> QhoStatus {
    guard(|| {
        non_null!(probs, counts);
        if width >= usize::BITS as usize {
            return fail(QhoStatus::InvalidArgument, "width too large");
        }
        let n = 1usize << width;
        if len < n {
            return fail(QhoStatus::BufferTooSmall, format!("need {n} entries, got {len}"));
        }
        let p = std::slice::from_raw_parts(probs, n).to_vec();
        let d = match Distribution::new(width, p) {
            Ok(d) => d,
            Err(e) => return fail(QhoStatus::InvalidArgument, e.to_string()),
        };
        match sample_shots(&d, shots, seed) {
            Ok(c) => {
                std::ptr::copy_nonoverlapping(c.counts.as_ptr(), counts, n);
                QhoStatus::Ok
            }
            Err(e) => fail(QhoStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qho_state_free(s: *mut QhoState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

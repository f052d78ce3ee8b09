use std::ffi::{CStr, CString};
use std::ptr;

use qho_ffi::*;

fn last_error() -> String {
    let p = qho_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn single_qubit_round_trip() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(qho_circuit_single_qubit(1.0, 2f64.sqrt(), 1.0, 0.0, 1.0, 1.0, &mut c), QhoStatus::Ok);
        let mut n = 0;
        assert_eq!(qho_circuit_num_gates(c, &mut n), QhoStatus::Ok);
        assert_eq!(n, 2);
        let mut s = ptr::null_mut();
        assert_eq!(qho_state_new(1, 0, &mut s), QhoStatus::Ok);
        assert_eq!(qho_state_run(s, c), QhoStatus::Ok);
        let (mut re, mut im) = ([0.0; 2], [0.0; 2]);
        assert_eq!(qho_state_amplitudes(s, re.as_mut_ptr(), im.as_mut_ptr(), 2), QhoStatus::Ok);
        let p1 = re[1] * re[1] + im[1] * im[1];
        assert!((p1 - 1f64.cos().sin().powi(2)).abs() < 1e-12);
        assert_eq!(qho_state_amplitudes(s, re.as_mut_ptr(), im.as_mut_ptr(), 1), QhoStatus::BufferTooSmall);
        qho_state_free(s);
        qho_circuit_free(c);
    }
}

#[test]
fn two_qubit_marginal_at_zero_theta() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(qho_circuit_two_qubit(0.0, &mut c), QhoStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(qho_state_new(5, 0, &mut s), QhoStatus::Ok);
        assert_eq!(qho_state_run(s, c), QhoStatus::Ok);
        let mut p = [0.0; 4];
        let sys = [0usize, 1];
        assert_eq!(qho_state_marginal(s, sys.as_ptr(), 2, p.as_mut_ptr(), 4), QhoStatus::Ok);
        for (got, want) in p.iter().zip([0.375, 0.125, 0.125, 0.375]) {
            assert!((got - want).abs() < 1e-12, "{p:?}");
        }
        qho_state_free(s);
        qho_circuit_free(c);
    }
}

#[test]
fn qasm_text_round_trip() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(qho_circuit_two_qubit(0.3, &mut c), QhoStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(qho_circuit_to_qasm(c, true, &mut text), QhoStatus::Ok);
        let owned = CStr::from_ptr(text).to_owned();
        assert!(!owned.to_str().unwrap().contains("ch "));
        let mut back = ptr::null_mut();
        assert_eq!(qho_circuit_from_qasm(owned.as_ptr(), &mut back), QhoStatus::Ok);
        let mut text2 = ptr::null_mut();
        assert_eq!(qho_circuit_to_qasm(back, true, &mut text2), QhoStatus::Ok);
        assert_eq!(CStr::from_ptr(text2), owned.as_c_str());
        qho_string_free(text);
        qho_string_free(text2);
        qho_circuit_free(c);
        qho_circuit_free(back);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(qho_circuit_two_qubit(0.6, &mut c), QhoStatus::InvalidArgument);
        assert!(c.is_null());
        assert!(last_error().contains("0.6"), "{}", last_error());

        let bad = CString::new("OPENQASM 2.0;\nqreg q[1];\nrz(0.1) q[0];\n").unwrap();
        assert_eq!(qho_circuit_from_qasm(bad.as_ptr(), &mut c), QhoStatus::Parse);
        assert!(last_error().contains("line 3"), "{}", last_error());

        assert_eq!(qho_circuit_two_qubit(0.1, ptr::null_mut()), QhoStatus::NullPointer);
        assert_eq!(qho_state_run(ptr::null_mut(), ptr::null()), QhoStatus::NullPointer);

        let mut s = ptr::null_mut();
        assert_eq!(qho_state_new(2, 4, &mut s), QhoStatus::InvalidArgument);
        let mut f = 0.0;
        assert_eq!(qho_drive_force(1.0, -1.0, 0.0, 1.0, 0.0, &mut f), QhoStatus::InvalidArgument);

        // Running a 5-qubit circuit on a 1-qubit state.
        assert_eq!(qho_circuit_two_qubit(0.1, &mut c), QhoStatus::Ok);
        assert_eq!(qho_state_new(1, 0, &mut s), QhoStatus::Ok);
        assert_eq!(qho_state_run(s, c), QhoStatus::Simulation);
        qho_state_free(s);
        qho_circuit_free(c);
        qho_circuit_free(ptr::null_mut());
        qho_string_free(ptr::null_mut());
    }
}

#[test]
fn drive_force_and_sampling() {
    unsafe {
        let mut f = 0.0;
        assert_eq!(qho_drive_force(2f64.sqrt(), 1.0, 0.0, 1.0, 0.7, &mut f), QhoStatus::Ok);
        assert!((f - 0.7f64.cos()).abs() < 1e-15);

        let probs = [0.1, 0.2, 0.3, 0.4];
        let mut a = [0u64; 4];
        let mut b = [0u64; 4];
        assert_eq!(qho_sample_shots(probs.as_ptr(), 2, 1024, 7, a.as_mut_ptr(), 4), QhoStatus::Ok);
        assert_eq!(qho_sample_shots(probs.as_ptr(), 2, 1024, 7, b.as_mut_ptr(), 4), QhoStatus::Ok);
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<u64>(), 1024);
        let bad = [0.5, 0.6];
        assert_eq!(qho_sample_shots(bad.as_ptr(), 1, 10, 0, a.as_mut_ptr(), 4), QhoStatus::InvalidArgument);
        assert_eq!(qho_sample_shots(probs.as_ptr(), 2, 10, 0, a.as_mut_ptr(), 3), QhoStatus::BufferTooSmall);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(qho_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

use std::ffi::{CStr, CString};
use std::ptr;

use cm_certify::chambers::build_partitions;
use cm_certify_ffi::*;

// C, B2, B3, B4, A2, A3
#[rustfmt::skip]
const C11: [i64; 36] = [
    4, 4, 4, 4, 4, 4,
    8, 0, 0, 8, 8, 0,
    0, 8, 0, 8, 0, 8,
    0, 0, 8, 0, 8, 8,
    6, 0, 6, 6, 0, 6,
    6, 6, 0, 0, 6, 6,
];

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { cm_string_free(s) };
    out
}

#[test]
fn evaluates_determinant_at_regular_point() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(cm_poly_cayley_menger(&mut f), CmError::CmOk);
        assert_eq!(cm_poly_nvars(f), 6);
        let mut s = ptr::null_mut();
        let c = [4i64; 6];
        assert_eq!(cm_poly_eval(f, c.as_ptr(), 6, &mut s), CmError::CmOk);
        assert_eq!(take(s), "16384");
        cm_poly_free(f);
    }
}

#[test]
fn certifies_full_k4_pair() {
    unsafe {
        let beta = CString::new("K4").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(cm_poly_combination(beta.as_ptr(), 3, -2, &mut p), CmError::CmOk);
        let mut q = ptr::null_mut();
        assert_eq!(cm_poly_pullback(p, C11.as_ptr(), &mut q), CmError::CmOk);
        assert_eq!(cm_poly_nvars(q), 5);
        let mut cert = ptr::null_mut();
        assert_eq!(cm_certify(q, 100_000, false, &mut cert), CmError::CmOk);
        assert_eq!(cm_certificate_status(cert), CmStatus::CmNonnegative);
        assert_eq!(cm_certificate_steps(cert), 1173);
        let mut r = ptr::null_mut();
        assert_eq!(cm_certificate_report(cert, &mut r), CmError::CmOk);
        assert!(take(r).contains("1173"));
        cm_certificate_free(cert);
        cm_poly_free(q);
        cm_poly_free(p);
    }
}

#[test]
fn reports_negative_witness() {
    unsafe {
        // 1 - 3x on the unit interval, embedded in five variables.
        let text = CString::new("1 0 0 0 0 0\n-3 1 0 0 0 0\n").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(cm_poly_parse(text.as_ptr(), &mut p), CmError::CmOk);
        let mut cert = ptr::null_mut();
        assert_eq!(cm_certify(p, 1000, false, &mut cert), CmError::CmOk);
        assert_eq!(cm_certificate_status(cert), CmStatus::CmNegativeWitness);
        cm_certificate_free(cert);
        cm_poly_free(p);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(cm_poly_parse(ptr::null(), &mut p), CmError::CmNullPointer);
        assert!(!cm_last_error().is_null());

        let bad = CString::new("1 x y\n").unwrap();
        assert_eq!(cm_poly_parse(bad.as_ptr(), &mut p), CmError::CmParse);
        let msg = CStr::from_ptr(cm_last_error()).to_str().unwrap();
        assert!(!msg.is_empty());

        let mut f = ptr::null_mut();
        cm_poly_cayley_menger(&mut f);
        let id = CString::new("Z_99").unwrap();
        let mut q = ptr::null_mut();
        assert_eq!(cm_poly_pullback_named(f, id.as_ptr(), &mut q), CmError::CmUnknownId);
        let mut s = ptr::null_mut();
        let short = [1i64; 3];
        assert_eq!(cm_poly_eval(f, short.as_ptr(), 3, &mut s), CmError::CmArity);
        cm_poly_free(f);

        // Success clears the previous message.
        let mut g = ptr::null_mut();
        assert_eq!(cm_poly_cayley_menger(&mut g), CmError::CmOk);
        assert!(cm_last_error().is_null());
        cm_poly_free(g);
    }
}

#[test]
fn pullback_by_vertices_matches_named() {
    unsafe {
        let beta = CString::new("12").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(cm_poly_combination(beta.as_ptr(), 1, 0, &mut g), CmError::CmOk);
        let named = build_partitions().simplex("C_11").unwrap();
        let verts: Vec<i64> = named.vertices.iter().flatten().copied().collect();
        let mut a = ptr::null_mut();
        assert_eq!(cm_poly_pullback(g, verts.as_ptr(), &mut a), CmError::CmOk);
        let id = CString::new("C_11").unwrap();
        let mut b = ptr::null_mut();
        assert_eq!(cm_poly_pullback_named(g, id.as_ptr(), &mut b), CmError::CmOk);
        let (mut ta, mut tb) = (ptr::null_mut(), ptr::null_mut());
        cm_poly_to_text(a, &mut ta);
        cm_poly_to_text(b, &mut tb);
        assert_eq!(take(ta), take(tb));
        for h in [a, b, g] {
            cm_poly_free(h);
        }
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        cm_poly_free(ptr::null_mut());
        cm_certificate_free(ptr::null_mut());
        cm_string_free(ptr::null_mut());
        assert_eq!(cm_poly_nvars(ptr::null()), 0);
        assert_eq!(cm_certificate_steps(ptr::null()), 0);
    }
}

#[test]
fn header_lists_entry_points() {
    let header = include_str!("../include/cm_certify.h");
    for name in [
        "cm_poly_parse",
        "cm_poly_combination",
        "cm_poly_pullback_named",
        "cm_certify",
        "cm_certificate_status",
        "cm_run_case",
        "cm_last_error",
        "typedef struct CmPolynomial CmPolynomial",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

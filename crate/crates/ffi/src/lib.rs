//! C interface to the certifier.
//!
//! Objects are opaque handles created by `cm_*_new`/`cm_*_parse`-style calls
//! and released with the matching `*_free`. Every fallible call returns a
//! `CmError`; on failure `cm_last_error()` describes the problem until the
//! next call on the same thread. Strings returned by the library are owned by
//! the caller and released with `cm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cm_certify::cases::{run_named, RunOptions};
use cm_certify::cayley_menger::{build_f, combination, directional_derivative, EdgeSubset};
use cm_certify::chambers::{build_partitions, LatticeSimplex6};
use cm_certify::dominance::{certify, certify_parallel, Certificate, Status};
use cm_certify::poly::Polynomial;
use cm_certify::pullback::pullback;
use cm_certify::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmError {
    CmOk = 0,
    CmNullPointer = 1,
    CmInvalidUtf8 = 2,
    CmParse = 3,
    CmInvalidArgument = 4,
    CmUnknownId = 5,
    CmArity = 6,
    CmPanic = 7,
}

/// Outcome of a certification.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmStatus {
    CmNonnegative = 0,
    CmNegativeWitness = 1,
    CmBudgetExhausted = 2,
}

/// Opaque polynomial with integer coefficients.
pub struct CmPolynomial(Polynomial);

/// Opaque certificate.
pub struct CmCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn classify(e: &Error) -> CmError {
    match e {
        Error::Parse { .. } | Error::BadEdgeSpec(_) | Error::EmptyEdgeSubset => CmError::CmParse,
        Error::UnknownId(_) | Error::UnknownCase(_) => CmError::CmUnknownId,
        Error::Arity { .. } | Error::VarMismatch { .. } | Error::TooManyVars(_) => CmError::CmArity,
        _ => CmError::CmInvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into codes.
fn guard<F: FnOnce() -> Result<(), (CmError, String)>>(f: F) -> CmError {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CmError::CmOk,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            CmError::CmPanic
        }
    }
}

fn lib<T>(r: cm_certify::Result<T>) -> Result<T, (CmError, String)> {
    r.map_err(|e| (classify(&e), e.to_string()))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (CmError, String)> {
    if p.is_null() {
        return Err((CmError::CmNullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (CmError::CmInvalidUtf8, format!("{name} is not UTF-8")))
}

fn null(name: &str) -> (CmError, String) {
    (CmError::CmNullPointer, format!("{name} is null"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library.
#[no_mangle]
pub extern "C" fn cm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the text format: one `<coeff> <e1> ... <ek>` line per monomial.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_poly_parse(text: *const c_char, out: *mut *mut CmPolynomial) -> CmError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let t = str_arg(text, "text")?;
        let p = lib(Polynomial::parse(t, None))?;
        put(out, CmPolynomial(p));
        Ok(())
    })
}

/// The Cayley-Menger determinant `f` in the six edge lengths.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_poly_cayley_menger(out: *mut *mut CmPolynomial) -> CmError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, CmPolynomial(build_f()));
        Ok(())
    })
}

/// `a * D_beta f + b * f`; `beta` is an edge list such as `"12,34"` or `"K4"`.
///
/// # Safety
/// `beta` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_poly_combination(
    beta: *const c_char,
    a: i64,
    b: i64,
    out: *mut *mut CmPolynomial,
) -> CmError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let beta: EdgeSubset = lib(str_arg(beta, "beta")?.parse())?;
        let p = if b == 0 && a == 1 {
            directional_derivative(beta)
        } else {
            combination(beta, a, b)
        };
        put(out, CmPolynomial(p));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cm_poly_free(p: *mut CmPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cm_poly_nvars(p: *const CmPolynomial) -> usize {
    p.as_ref().map_or(0, |p| p.0.nvars())
}

/// Canonical text form of the polynomial.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_poly_to_text(p: *const CmPolynomial, out: *mut *mut c_char) -> CmError {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("poly"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(p.0.to_text());
        Ok(())
    })
}

/// Exact value at an integer point, as a decimal string.
///
/// # Safety
/// `point` must hold `len` values; `p` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cm_poly_eval(
    p: *const CmPolynomial,
    point: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> CmError {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("poly"))?;
        if point.is_null() || out.is_null() {
            return Err(null("point or out"));
        }
        let xs = std::slice::from_raw_parts(point, len);
        let v = lib(p.0.evaluate_i64(xs))?;
        *out = into_c_string(v.to_string());
        Ok(())
    })
}

/// Pulls a six-variable polynomial back to the unit 5-cube through the named
/// simplex (`"C_21"`, `"D_3111"`, ...).
///
/// # Safety
/// `p` must be live, `simplex` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cm_poly_pullback_named(
    p: *const CmPolynomial,
    simplex: *const c_char,
    out: *mut *mut CmPolynomial,
) -> CmError {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("poly"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let id = str_arg(simplex, "simplex")?;
        let sigma = lib(build_partitions().simplex(id))?;
        put(out, CmPolynomial(lib(pullback(&p.0, sigma))?));
        Ok(())
    })
}

/// Pull-back through a simplex given as 36 integers, six per vertex, in order.
///
/// # Safety
/// `vertices` must point to 36 values; `p` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cm_poly_pullback(
    p: *const CmPolynomial,
    vertices: *const i64,
    out: *mut *mut CmPolynomial,
) -> CmError {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("poly"))?;
        if vertices.is_null() || out.is_null() {
            return Err(null("vertices or out"));
        }
        let v = std::slice::from_raw_parts(vertices, 36);
        let verts: [[i64; 6]; 6] = std::array::from_fn(|k| v[6 * k..6 * k + 6].try_into().unwrap());
        let sigma = lib(LatticeSimplex6::new("ffi", verts))?;
        put(out, CmPolynomial(lib(pullback(&p.0, &sigma))?));
        Ok(())
    })
}

/// Runs the positive dominance algorithm on a five-variable polynomial.
///
/// # Safety
/// `p` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cm_certify(
    p: *const CmPolynomial,
    budget: u64,
    parallel: bool,
    out: *mut *mut CmCertificate,
) -> CmError {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("poly"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cert = if parallel {
            lib(certify_parallel(&p.0, budget))?
        } else {
            lib(certify(&p.0, budget))?
        };
        put(out, CmCertificate(cert));
        Ok(())
    })
}

/// # Safety
/// `c` must be a live certificate.
#[no_mangle]
pub unsafe extern "C" fn cm_certificate_status(c: *const CmCertificate) -> CmStatus {
    match c.as_ref().map(|c| c.0.status) {
        Some(Status::Nonnegative) => CmStatus::CmNonnegative,
        Some(Status::NegativeWitness) => CmStatus::CmNegativeWitness,
        _ => CmStatus::CmBudgetExhausted,
    }
}

/// Steps taken, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live certificate.
#[no_mangle]
pub unsafe extern "C" fn cm_certificate_steps(c: *const CmCertificate) -> u64 {
    c.as_ref().map_or(0, |c| c.0.steps)
}

/// Text report: status, steps, depth and the witness if any.
///
/// # Safety
/// `c` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cm_certificate_report(c: *const CmCertificate, out: *mut *mut c_char) -> CmError {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("certificate"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(c.0.report());
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a certificate from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cm_certificate_free(c: *mut CmCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Runs a named case; writes its text report and whether it passed.
///
/// # Safety
/// `name` must be NUL-terminated; `report` and `passed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cm_run_case(
    name: *const c_char,
    seed: u64,
    report: *mut *mut c_char,
    passed: *mut bool,
) -> CmError {
    guard(|| {
        let name = str_arg(name, "name")?;
        if report.is_null() || passed.is_null() {
            return Err(null("report or passed"));
        }
        let opts = RunOptions {
            seed,
            ..Default::default()
        };
        let rep = lib(run_named(name, &opts))?;
        *passed = rep.passed;
        *report = into_c_string(rep.render());
        Ok(())
    })
}

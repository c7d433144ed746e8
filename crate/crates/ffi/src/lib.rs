//! C interface to `lehmer-core`.
//!
//! Polynomials are passed as opaque [`LehmerPoly`] handles created by
//! [`lehmer_poly_parse`] or [`lehmer_poly_from_coeffs`] and released with
//! [`lehmer_poly_free`]. Every fallible call returns a [`LehmerStatus`]; on
//! failure the message is available from [`lehmer_last_error`] until the next
//! call on the same thread. Strings returned by the library are released with
//! [`lehmer_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lehmer_core::cli::to_json_string;
use lehmer_core::fields::{classify_Psr, field_summary, Membership};
use lehmer_core::lattice::construct;
use lehmer_core::mahler::{kronecker_test, mahler_measure};
use lehmer_core::roots::exact_counts;
use lehmer_core::{Error, IntPoly};

/// Opaque integer polynomial.
pub struct LehmerPoly {
    inner: IntPoly,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LehmerStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InvalidArgument = 3,
    NotMonic = 4,
    NotMember = 5,
    Certification = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LehmerCounts {
    pub degree: usize,
    pub inside: usize,
    pub on_circle: usize,
    pub outside: usize,
    pub real_outside: usize,
    pub real: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LehmerClass {
    pub member: bool,
    pub s: usize,
    pub r: usize,
    pub satisfies_l: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> LehmerStatus {
    match e {
        Error::Parse(_) => LehmerStatus::Parse,
        Error::NotMonic(_) => LehmerStatus::NotMonic,
        Error::NotMember { .. } | Error::NotPalindromic(_) | Error::OddDegree(_) | Error::NotSalem(_) => {
            LehmerStatus::NotMember
        }
        Error::Certification { .. } => LehmerStatus::Certification,
        Error::Internal(_) => LehmerStatus::Internal,
        _ => LehmerStatus::InvalidArgument,
    }
}

fn guard<F: FnOnce() -> Result<(), (LehmerStatus, String)>>(f: F) -> LehmerStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LehmerStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside lehmer-core");
            LehmerStatus::Internal
        }
    }
}

fn lift(e: Error) -> (LehmerStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (LehmerStatus, String) {
    (LehmerStatus::NullPointer, "null pointer argument".into())
}

/// # Safety
/// `p` must be null or a handle from this library that has not been freed.
unsafe fn poly_ref<'a>(p: *const LehmerPoly) -> Result<&'a IntPoly, (LehmerStatus, String)> {
    p.as_ref().map(|h| &h.inner).ok_or_else(null)
}

/// Parses space-separated coefficients, constant term first, into `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lehmer_poly_parse(text: *const c_char, out: *mut *mut LehmerPoly) -> LehmerStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (LehmerStatus::Parse, "text is not UTF-8".to_string()))?;
        let p = lehmer_core::cli::parse_poly(s).map_err(lift)?;
        *out = Box::into_raw(Box::new(LehmerPoly { inner: p }));
        Ok(())
    })
}

/// Builds a polynomial from `len` coefficients, constant term first. Returns
/// null for a null pointer or an all-zero input.
///
/// # Safety
/// `coeffs` must point to `len` readable values.
#[no_mangle]
pub unsafe extern "C" fn lehmer_poly_from_coeffs(coeffs: *const i64, len: usize) -> *mut LehmerPoly {
    if coeffs.is_null() || len == 0 {
        return ptr::null_mut();
    }
    let p = IntPoly::from_i64s(std::slice::from_raw_parts(coeffs, len));
    if p.is_zero() {
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(LehmerPoly { inner: p }))
}

/// # Safety
/// `p` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn lehmer_poly_free(p: *mut LehmerPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Degree of the polynomial, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lehmer_poly_degree(p: *const LehmerPoly) -> usize {
    p.as_ref().map_or(0, |h| h.inner.deg())
}

/// Certified Mahler measure: value and error radius.
///
/// # Safety
/// `p` must be a live handle; `value` and `radius` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn lehmer_mahler(p: *const LehmerPoly, value: *mut f64, radius: *mut f64) -> LehmerStatus {
    guard(|| {
        let p = poly_ref(p)?;
        if value.is_null() || radius.is_null() {
            return Err(null());
        }
        let c = mahler_measure(p).map_err(lift)?;
        *value = c.value;
        *radius = c.error_radius;
        Ok(())
    })
}

/// Whether every root is zero or a root of unity.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lehmer_kronecker(p: *const LehmerPoly, out: *mut bool) -> LehmerStatus {
    guard(|| {
        let p = poly_ref(p)?;
        if out.is_null() {
            return Err(null());
        }
        *out = kronecker_test(p).map_err(lift)?;
        Ok(())
    })
}

/// Exact root location counts.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lehmer_counts(p: *const LehmerPoly, out: *mut LehmerCounts) -> LehmerStatus {
    guard(|| {
        let p = poly_ref(p)?;
        if out.is_null() {
            return Err(null());
        }
        let c = exact_counts(p).map_err(lift)?;
        *out = LehmerCounts {
            degree: c.degree,
            inside: c.inside,
            on_circle: c.on_circle,
            outside: c.outside,
            real_outside: c.real_outside,
            real: c.real,
        };
        Ok(())
    })
}

/// Membership in a class `P(s, r)`; non-members are reported with
/// `member = false` and the reason in [`lehmer_last_error`].
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lehmer_classify(p: *const LehmerPoly, out: *mut LehmerClass) -> LehmerStatus {
    guard(|| {
        let p = poly_ref(p)?;
        if out.is_null() {
            return Err(null());
        }
        *out = match classify_Psr(p) {
            Membership::Member { s, r, satisfies_l, .. } => LehmerClass {
                member: true,
                s,
                r,
                satisfies_l,
            },
            Membership::NotMember { reason } => {
                set_error(&reason);
                LehmerClass::default()
            }
        };
        Ok(())
    })
}

/// Signature `(r1, r2)` of the trace field of a class member.
///
/// # Safety
/// `p` must be a live handle; `r1` and `r2` writable.
#[no_mangle]
pub unsafe extern "C" fn lehmer_signature(p: *const LehmerPoly, r1: *mut usize, r2: *mut usize) -> LehmerStatus {
    guard(|| {
        let p = poly_ref(p)?;
        if r1.is_null() || r2.is_null() {
            return Err(null());
        }
        let s = field_summary(p).map_err(lift)?;
        *r1 = s.signature_k.0;
        *r2 = s.signature_k.1;
        Ok(())
    })
}

/// JSON report for the power of the diagonal element at level `m` with
/// `n × n` matrices. Free the string with [`lehmer_string_free`].
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lehmer_construct_json(
    p: *const LehmerPoly,
    m: u64,
    n: usize,
    out: *mut *mut c_char,
) -> LehmerStatus {
    guard(|| {
        let p = poly_ref(p)?;
        if out.is_null() {
            return Err(null());
        }
        let report = construct(p, m, n).map_err(lift)?;
        let json = to_json_string(&report).map_err(lift)?;
        let c = CString::new(json).map_err(|e| (LehmerStatus::Internal, e.to_string()))?;
        *out = c.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lehmer_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn lehmer_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

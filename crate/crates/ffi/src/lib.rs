//! C ABI over `epsolve`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json`
//! and released by the matching `*_free`. Every fallible call returns an
//! [`EpStatus`]; on failure [`ep_last_error`] describes the cause. Strings
//! handed out by the library are released with [`ep_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use epsolve::chains::{check_local_determination, is_colimiting, Cocone};
use epsolve::finposet::{canonical_form, FinPoset};
use epsolve::json::{cocone_from_str, cocone_to_string, poset_from_str, poset_to_string};
use epsolve::solver::parse_equation;
use epsolve::{Caps, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Json = 3,
    Syntax = 4,
    /// Input parsed but violates an invariant (order axioms, pair laws, ...).
    Invalid = 5,
    CapExceeded = 6,
    Internal = 7,
    Panic = 8,
}

/// Opaque finite poset.
pub struct EpPoset(FinPoset);

/// Opaque cocone over an ω-chain of ep- or adjoint pairs.
pub struct EpCocone(Cocone);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EpStatus {
    match e {
        Error::Json(_) => EpStatus::Json,
        Error::Syntax { .. } => EpStatus::Syntax,
        Error::CapExceeded { .. } | Error::CanonBudget(_) => EpStatus::CapExceeded,
        Error::AtStage { source, .. } => status_of(source),
        Error::Internal(_) => EpStatus::Internal,
        _ => EpStatus::Invalid,
    }
}

struct Fail(EpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EpStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside epsolve".into());
            EpStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(EpStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(EpStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(EpStatus::NullArgument, format!("{what} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(EpStatus::NullArgument, format!("{what} is null")))
}

fn to_c(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Fail(EpStatus::Internal, e.to_string()))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"elems", "leq", "bottom"}`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ep_poset_from_json(json: *const c_char, out: *mut *mut EpPoset) -> EpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let p = poset_from_str(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(EpPoset(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`ep_poset_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ep_poset_free(p: *mut EpPoset) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ep_poset_len(p: *const EpPoset, out: *mut usize) -> EpStatus {
    guard(|| {
        *out_arg(out, "out")? = ref_arg(p, "poset")?.0.len();
        Ok(())
    })
}

/// Whether element `i` is below element `j`, by index.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ep_poset_leq(p: *const EpPoset, i: usize, j: usize, out: *mut bool) -> EpStatus {
    guard(|| {
        let p = &ref_arg(p, "poset")?.0;
        if i >= p.len() || j >= p.len() {
            return Err(Fail(EpStatus::Invalid, format!("index out of range: {i}, {j} with {} elements", p.len())));
        }
        *out_arg(out, "out")? = p.leq(i, j);
        Ok(())
    })
}

/// Isomorphism-invariant code; equal codes mean isomorphic posets.
///
/// # Safety
/// `p` must be a live handle; `out` receives a string for [`ep_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ep_poset_canonical_form(p: *const EpPoset, out: *mut *mut c_char) -> EpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = to_c(canonical_form(&ref_arg(p, "poset")?.0)?)?;
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle; `out` receives a string for [`ep_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ep_poset_to_json(p: *const EpPoset, out: *mut *mut c_char) -> EpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = to_c(poset_to_string(&ref_arg(p, "poset")?.0)?)?;
        Ok(())
    })
}

/// Parses a cocone document (`posets`, `chain`, `apex`, `legs`).
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ep_cocone_from_json(json: *const c_char, out: *mut *mut EpCocone) -> EpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let k = cocone_from_str(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(EpCocone(k)));
        Ok(())
    })
}

/// # Safety
/// `k` must be null or a handle from [`ep_cocone_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ep_cocone_free(k: *mut EpCocone) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// # Safety
/// `k` must be a live handle; `out` receives a string for [`ep_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ep_cocone_to_json(k: *const EpCocone, out: *mut *mut c_char) -> EpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = to_c(cocone_to_string(&ref_arg(k, "cocone")?.0)?)?;
        Ok(())
    })
}

/// Local-determination report as JSON: `{"kind", "verdict", "defects", "adj_residuals"}`.
///
/// # Safety
/// `k` must be a live handle; `out` receives a string for [`ep_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ep_cocone_check_ld(k: *const EpCocone, out: *mut *mut c_char) -> EpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let r = check_local_determination(&ref_arg(k, "cocone")?.0)?;
        *out = to_c(serde_json::to_string(&r).map_err(Error::from)?)?;
        Ok(())
    })
}

/// Mediator search under the default caps.
///
/// # Safety
/// `k` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ep_cocone_is_colimiting(k: *const EpCocone, out: *mut bool) -> EpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = is_colimiting(&ref_arg(k, "cocone")?.0, &Caps::default())?;
        Ok(())
    })
}

/// Solves `equation` to `depth` and writes the run report as JSON. The
/// report's own checks are in `theorem_suite`; `passed` mirrors them.
///
/// # Safety
/// `equation` must be a nul-terminated string; `out` receives a string for
/// [`ep_string_free`]; `passed` may be null.
#[no_mangle]
pub unsafe extern "C" fn ep_solve(equation: *const c_char, depth: usize, out: *mut *mut c_char, passed: *mut bool) -> EpStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let mut spec = parse_equation(str_arg(equation, "equation")?)?;
        spec.depth = depth;
        let report = epsolve::solver::solve(&spec)?;
        if let Some(p) = passed.as_mut() {
            *p = report.passed();
        }
        *out = to_c(report.to_json()?)?;
        Ok(())
    })
}

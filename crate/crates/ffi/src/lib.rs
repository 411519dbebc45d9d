//! C ABI over the birdtrack engine.
//!
//! Expressions and tableaux are opaque heap handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns a
//! [`BtStatus`]; the message of the last failure on the calling thread is
//! available from [`bt_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use birdtrack::expr::{compare, parse_expr, young, DEFAULT_ORACLE_BOUND};
use birdtrack::rules::{simplify, Policy, SimplifyOptions, TungMode};
use birdtrack::{BirdtrackExpr, Error, Tableau};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    Refused = 5,
    Resource = 6,
    /// A rust panic was caught at the boundary.
    Internal = 7,
}

/// Opaque operator expression.
pub struct BtExpr(BirdtrackExpr);

/// Opaque Young tableau.
pub struct BtTableau(Tableau);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> BtStatus {
    match err {
        Error::Parse { .. } => BtStatus::Parse,
        Error::Invalid(_) => BtStatus::Invalid,
        Error::Refused(_) | Error::Verify(_) => BtStatus::Refused,
        Error::Resource(_) => BtStatus::Resource,
    }
}

fn fail(err: Error) -> BtStatus {
    set_error(err.to_string());
    status_of(&err)
}

fn guard(f: impl FnOnce() -> BtStatus) -> BtStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        BtStatus::Internal
    })
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, BtStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(BtStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        BtStatus::InvalidUtf8
    })
}

fn write_string(s: String, out: *mut *mut c_char) -> BtStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            BtStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            BtStatus::Internal
        }
    }
}

macro_rules! check_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return BtStatus::NullPointer;
        })+
    };
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a tableau such as `[[1,2],[3]]`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_tableau_parse(text: *const c_char, out: *mut *mut BtTableau) -> BtStatus {
    check_null!(out);
    guard(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match text.parse::<Tableau>() {
            Ok(t) => {
                *out = Box::into_raw(Box::new(BtTableau(t)));
                BtStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `t` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bt_tableau_free(t: *mut BtTableau) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Parse an operator in the text syntax, e.g. `S{1 2} A{1 3}`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_expr_parse(text: *const c_char, out: *mut *mut BtExpr) -> BtStatus {
    check_null!(out);
    guard(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_expr(text) {
            Ok(e) => {
                *out = Box::into_raw(Box::new(BtExpr(e)));
                BtStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `e` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bt_expr_free(e: *mut BtExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Print an expression. The string must be released with [`bt_string_free`].
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_expr_print(e: *const BtExpr, out: *mut *mut c_char) -> BtStatus {
    check_null!(e, out);
    guard(|| write_string((*e).0.to_string(), out))
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of symmetrizer and antisymmetrizer sets in the expression.
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_expr_set_count(e: *const BtExpr, out: *mut usize) -> BtStatus {
    check_null!(e, out);
    *out = (*e).0.set_count();
    BtStatus::Ok
}

/// The Young projector of a tableau.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_build_young(t: *const BtTableau, out: *mut *mut BtExpr) -> BtStatus {
    check_null!(t, out);
    guard(|| match young(&(*t).0) {
        Ok(e) => {
            *out = Box::into_raw(Box::new(BtExpr(e)));
            BtStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Simplify with every rule enabled. `exact` nonzero computes Tung constants
/// exactly instead of introducing symbolic ones.
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_expr_simplify(e: *const BtExpr, exact: i32, out: *mut *mut BtExpr) -> BtStatus {
    check_null!(e, out);
    guard(|| {
        let opts = SimplifyOptions {
            policy: Policy::All,
            tung: if exact != 0 { TungMode::Exact } else { TungMode::Structural },
            ..Default::default()
        };
        match simplify(&(*e).0, &opts) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(BtExpr(s.expr)));
                BtStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Compare two expressions by full expansion. `*equal` is 1 when they are the
/// same element of the group algebra and 0 otherwise.
///
/// # Safety
/// `a` and `b` must be live handles and `equal` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_expr_equal(a: *const BtExpr, b: *const BtExpr, equal: *mut i32) -> BtStatus {
    check_null!(a, b, equal);
    guard(|| match compare(&(*a).0, &(*b).0, DEFAULT_ORACLE_BOUND, false) {
        Ok(c) => {
            *equal = c.is_equal() as i32;
            BtStatus::Ok
        }
        Err(e) => fail(e),
    })
}

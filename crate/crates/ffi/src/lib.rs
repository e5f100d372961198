//! C interface to the verification engine.
//!
//! Ledgers are opaque handles released with [`fpc_ledger_free`]. Strings
//! returned by this library are released with [`fpc_string_free`]. Every
//! fallible call returns an [`FpcStatus`]; on failure the message is kept
//! per thread and read with [`fpc_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fpc_core::certificates::FactLedger;
use fpc_core::{containment, corpus, oracle};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpcStatus {
    Ok = 0,
    /// At least one certificate failed to check.
    Falsified = 1,
    /// Unreadable or malformed input.
    Input = 2,
    NullPointer = 3,
    /// The oracle rejected its arguments.
    Oracle = 4,
    Internal = 5,
}

/// Proven facts from a verified corpus.
pub struct FpcLedger {
    inner: FactLedger,
    falsified: Vec<String>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> Result<(), (FpcStatus, String)>) -> FpcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FpcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FpcStatus::Internal
        }
    }
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, (FpcStatus, String)> {
    if p.is_null() {
        return Err((FpcStatus::NullPointer, "path is null".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| (FpcStatus::Input, "path is not UTF-8".into()))
}

unsafe fn ledger_arg<'a>(l: *const FpcLedger) -> Result<&'a FpcLedger, (FpcStatus, String)> {
    l.as_ref().ok_or((FpcStatus::NullPointer, "ledger is null".into()))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, (FpcStatus, String)> {
    p.as_mut().ok_or((FpcStatus::NullPointer, "output pointer is null".into()))
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library and valid until the next call.
#[no_mangle]
pub extern "C" fn fpc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn fpc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Verifies the built-in corpus and stores its ledger in `*out`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fpc_ledger_embedded(out: *mut *mut FpcLedger) -> FpcStatus {
    guard(|| {
        let out = out_arg(out)?;
        let rep = corpus::verify_embedded();
        let falsified = rep.failures().map(|r| r.name.clone()).collect();
        *out = Box::into_raw(Box::new(FpcLedger {
            inner: rep.ledger,
            falsified,
        }));
        Ok(())
    })
}

/// Verifies every `.cert` file under `dir`. A ledger of the facts that
/// checked is stored in `*out` for [`FpcStatus::Ok`] and
/// [`FpcStatus::Falsified`]; otherwise `*out` is set to null.
///
/// # Safety
/// `dir` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fpc_verify_dir(dir: *const c_char, out: *mut *mut FpcLedger) -> FpcStatus {
    let mut falsified = false;
    let status = guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        let dir = path_arg(dir)?;
        let files = corpus::load_dir(dir).map_err(|e| (FpcStatus::Input, format!("{}: {e}", dir.display())))?;
        let rep = corpus::verify_files(&files).map_err(|e| (FpcStatus::Input, e.to_string()))?;
        let names: Vec<String> = rep.failures().map(|r| r.name.clone()).collect();
        falsified = !names.is_empty();
        *out = Box::into_raw(Box::new(FpcLedger {
            inner: rep.ledger,
            falsified: names,
        }));
        Ok(())
    });
    if status == FpcStatus::Ok && falsified {
        set_error("some certificates were falsified");
        FpcStatus::Falsified
    } else {
        status
    }
}

/// # Safety
/// `ledger` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn fpc_ledger_free(ledger: *mut FpcLedger) {
    if !ledger.is_null() {
        drop(Box::from_raw(ledger));
    }
}

/// Number of proven facts.
///
/// # Safety
/// `ledger` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fpc_ledger_len(ledger: *const FpcLedger) -> usize {
    ledger.as_ref().map_or(0, |l| l.inner.len())
}

/// Number of certificates that failed when the ledger was built.
///
/// # Safety
/// `ledger` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fpc_ledger_falsified(ledger: *const FpcLedger) -> usize {
    ledger.as_ref().map_or(0, |l| l.falsified.len())
}

/// Best lower bound on gamma(n) as a string such as `"42/19"`, or null in
/// `*out` when no fact applies.
///
/// # Safety
/// `ledger` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fpc_ledger_gamma(ledger: *const FpcLedger, n: u64, out: *mut *mut c_char) -> FpcStatus {
    guard(|| {
        let l = ledger_arg(ledger)?;
        let out = out_arg(out)?;
        *out = l
            .inner
            .best_gamma(n)
            .map_or(ptr::null_mut(), |g| to_c(g.bound.to_string()));
        Ok(())
    })
}

/// The whole ledger as JSON.
///
/// # Safety
/// `ledger` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fpc_ledger_json(ledger: *const FpcLedger, out: *mut *mut c_char) -> FpcStatus {
    guard(|| {
        let l = ledger_arg(ledger)?;
        let out = out_arg(out)?;
        let text = serde_json::to_string(&l.inner).map_err(|e| (FpcStatus::Internal, e.to_string()))?;
        *out = to_c(text);
        Ok(())
    })
}

/// Containment report for `I^(3r-2) ⊂ M^(2r-2) I^r` as JSON.
///
/// # Safety
/// `ledger` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fpc_containment_json(
    ledger: *const FpcLedger,
    n: u64,
    r: u64,
    out: *mut *mut c_char,
) -> FpcStatus {
    guard(|| {
        let l = ledger_arg(ledger)?;
        let out = out_arg(out)?;
        if n == 0 || r == 0 {
            return Err((FpcStatus::Input, "n and r must be positive".into()));
        }
        let rep = containment::dispatch(n, r, &l.inner);
        let text = serde_json::to_string(&rep).map_err(|e| (FpcStatus::Internal, e.to_string()))?;
        *out = to_c(text);
        Ok(())
    })
}

/// Dimension of degree-`t` forms through general fat points, computed
/// modulo `prime` with points drawn from `seed`.
///
/// # Safety
/// `mults` must point to `len` values (or be null with `len == 0`) and
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fpc_dimension(
    mults: *const i64,
    len: usize,
    t: i64,
    prime: u64,
    seed: u64,
    out: *mut u64,
) -> FpcStatus {
    guard(|| {
        let out = out_arg(out)?;
        let mults: &[i64] = if len == 0 {
            &[]
        } else if mults.is_null() {
            return Err((FpcStatus::NullPointer, "mults is null".into()));
        } else {
            std::slice::from_raw_parts(mults, len)
        };
        let d = oracle::dimension_generic(mults, t, prime, seed).map_err(|e| (FpcStatus::Oracle, e.to_string()))?;
        *out = d.dimension;
        Ok(())
    })
}

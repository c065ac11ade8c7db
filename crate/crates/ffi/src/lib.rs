//! C ABI over the `tableaux` library.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free`. Every fallible call returns a
//! [`TableauxStatus`]; on failure the message is available from
//! [`tableaux_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use tableaux::involutivity::{cartan_test, CartanOptions, EndovolutiveStatus, InvolutivityReport, Variant};
use tableaux::moduli::{export_ideal, format_ideal};
use tableaux::tableau::CartanCharacters;
use tableaux::{Error, Tableau, TableauDocument};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableauxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidDocument = 3,
    InvalidArgument = 4,
    Inconclusive = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Index range of the quadratic criterion.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableauxVariant {
    Theorem = 0,
    Proof = 1,
}

/// Opaque tableau handle.
pub struct TableauxTableau(Tableau);

/// Opaque involutivity report handle.
pub struct TableauxReport(InvolutivityReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: TableauxStatus, msg: impl Into<String>) -> TableauxStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> TableauxStatus {
    match e {
        Error::InvalidDocument(_) | Error::Rational(_) => TableauxStatus::InvalidDocument,
        Error::Inconclusive { .. } => TableauxStatus::Inconclusive,
        _ => TableauxStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> TableauxStatus) -> TableauxStatus {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(TableauxStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TableauxStatus> {
    if s.is_null() {
        return Err(fail(TableauxStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(TableauxStatus::InvalidUtf8, "string is not UTF-8"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul removed").into_raw()
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn tableaux_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a JSON document (basis or coefficient presentation).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tableaux_tableau_from_json(json: *const c_char, out: *mut *mut TableauxTableau) -> TableauxStatus {
    guard(|| {
        if out.is_null() {
            return fail(TableauxStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match TableauDocument::from_json(text) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(TableauxTableau(doc.tableau())));
                TableauxStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `t` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tableaux_tableau_free(t: *mut TableauxTableau) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Writes `r`, `n` and `dim A`. Any output pointer may be null.
///
/// # Safety
/// `t` must be a live handle; non-null outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn tableaux_tableau_shape(
    t: *const TableauxTableau,
    r: *mut usize,
    n: *mut usize,
    dim: *mut usize,
) -> TableauxStatus {
    let Some(t) = t.as_ref() else {
        return fail(TableauxStatus::NullPointer, "null tableau");
    };
    for (p, v) in [(r, t.0.r()), (n, t.0.n()), (dim, t.0.dim())] {
        if !p.is_null() {
            *p = v;
        }
    }
    TableauxStatus::Ok
}

/// Runs the Cartan test. `trials == 0` uses the library default.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tableaux_cartan_test(
    t: *const TableauxTableau,
    seed: u64,
    trials: usize,
    variant: TableauxVariant,
    out: *mut *mut TableauxReport,
) -> TableauxStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return fail(TableauxStatus::NullPointer, "null tableau");
        };
        if out.is_null() {
            return fail(TableauxStatus::NullPointer, "null output pointer");
        }
        let mut opts = CartanOptions { seed, ..CartanOptions::default() };
        if trials > 0 {
            opts.trials = trials;
        }
        opts.variant = match variant {
            TableauxVariant::Theorem => Variant::Theorem,
            TableauxVariant::Proof => Variant::Proof,
        };
        let report = cartan_test(&t.0, &opts);
        if report.endovolutive_status == EndovolutiveStatus::Inconclusive {
            set_error("no endovolutive basis found (inconclusive)");
        }
        *out = Box::into_raw(Box::new(TableauxReport(report)));
        TableauxStatus::Ok
    })
}

/// # Safety
/// `r` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tableaux_report_free(r: *mut TableauxReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Summary numbers of a report. Any output pointer may be null.
/// `criterion` is 1 (holds), 0 (fails) or -1 (not evaluated).
///
/// # Safety
/// `r` must be a live handle; non-null outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn tableaux_report_summary(
    r: *const TableauxReport,
    involutive: *mut bool,
    dim_a1: *mut usize,
    cartan_bound: *mut usize,
    criterion: *mut i32,
    violations: *mut usize,
) -> TableauxStatus {
    let Some(r) = r.as_ref() else {
        return fail(TableauxStatus::NullPointer, "null report");
    };
    let rep = &r.0;
    if !involutive.is_null() {
        *involutive = rep.involutive;
    }
    for (p, v) in [(dim_a1, rep.dim_a1), (cartan_bound, rep.cartan_bound), (violations, rep.violations.len())] {
        if !p.is_null() {
            *p = v;
        }
    }
    if !criterion.is_null() {
        *criterion = rep.criterion_holds.map_or(-1, i32::from);
    }
    TableauxStatus::Ok
}

/// Copies the generic characters into `buf`. `len` holds the capacity on
/// entry and the number of characters on return.
///
/// # Safety
/// `r` must be a live handle, `len` valid, `buf` valid for `*len` entries.
#[no_mangle]
pub unsafe extern "C" fn tableaux_report_characters(
    r: *const TableauxReport,
    buf: *mut usize,
    len: *mut usize,
) -> TableauxStatus {
    let (Some(r), false) = (r.as_ref(), len.is_null()) else {
        return fail(TableauxStatus::NullPointer, "null report or length");
    };
    let s = r.0.characters.as_slice();
    let cap = *len;
    *len = s.len();
    if cap < s.len() {
        return fail(TableauxStatus::BufferTooSmall, format!("need {} entries", s.len()));
    }
    if !s.is_empty() {
        if buf.is_null() {
            return fail(TableauxStatus::NullPointer, "null buffer");
        }
        ptr::copy_nonoverlapping(s.as_ptr(), buf, s.len());
    }
    TableauxStatus::Ok
}

/// Full report as JSON. Free the string with [`tableaux_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tableaux_report_to_json(r: *const TableauxReport, out: *mut *mut c_char) -> TableauxStatus {
    guard(|| {
        let (Some(r), false) = (r.as_ref(), out.is_null()) else {
            return fail(TableauxStatus::NullPointer, "null report or output");
        };
        *out = into_c_string(serde_json::to_string(&r.0).expect("report serializes"));
        TableauxStatus::Ok
    })
}

/// Exported quadratic ideal for the given characters, in the CLI text format.
///
/// # Safety
/// `chars` must be valid for `n` entries and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tableaux_ideal(
    chars: *const usize,
    n: usize,
    variant: TableauxVariant,
    out: *mut *mut c_char,
) -> TableauxStatus {
    guard(|| {
        if out.is_null() || (chars.is_null() && n > 0) {
            return fail(TableauxStatus::NullPointer, "null characters or output");
        }
        let s = if n == 0 { Vec::new() } else { std::slice::from_raw_parts(chars, n).to_vec() };
        let chars = match CartanCharacters::new(s) {
            Ok(c) => c,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let v = match variant {
            TableauxVariant::Theorem => Variant::Theorem,
            TableauxVariant::Proof => Variant::Proof,
        };
        *out = into_c_string(format_ideal(&export_ideal(&chars, v)));
        TableauxStatus::Ok
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tableaux_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

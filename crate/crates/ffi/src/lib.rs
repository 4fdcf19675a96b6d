//! C ABI over coverforge.
//!
//! Objects cross the boundary as opaque handles created by `cf_*_from_json`
//! and released with the matching `cf_*_free`. Every fallible call returns a
//! [`CfStatus`]; on failure [`cf_last_error`] describes the problem for the
//! calling thread. Strings returned by the library must be released with
//! [`cf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use coverforge::cli::{parse_datum_file, parse_group_document};
use coverforge::cover::BranchDatum;
use coverforge::group::{FiniteGroup, DEFAULT_ELEMENT_CAP};
use coverforge::local_system::{chevalley_weil_multiplicity, decompose_direct_image};
use coverforge::rep::{character_table, CharacterTable};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidDatum = 4,
    ComputationError = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// A finite group with its character table.
pub struct CfGroup {
    group: Arc<FiniteGroup>,
    table: CharacterTable,
}

/// A branch datum with the character table of its group.
pub struct CfDatum {
    datum: BranchDatum,
    table: CharacterTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type Failure = (CfStatus, String);

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CfStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CfStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            CfStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (CfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn input_str<'a>(text: *const c_char) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(null("input string"));
    }
    CStr::from_ptr(text).to_str().map_err(|e| (CfStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn computation<E: std::fmt::Display>(e: E) -> Failure {
    (CfStatus::ComputationError, e.to_string())
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a group from a JSON group descriptor (or any document with a `group` field).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_group_from_json(json: *const c_char, out: *mut *mut CfGroup) -> CfStatus {
    guard(|| {
        let text = input_str(json)?;
        let spec = parse_group_document(text).map_err(|e| (CfStatus::ParseError, e.to_string()))?;
        let group = Arc::new(FiniteGroup::from_spec(&spec).map_err(|e| (CfStatus::ParseError, e.to_string()))?);
        let table = character_table(&group).map_err(computation)?;
        write_out(out, Box::into_raw(Box::new(CfGroup { group, table })))
    })
}

/// # Safety
/// `group` must be null or a handle from [`cf_group_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cf_group_free(group: *mut CfGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_group_order(group: *const CfGroup, out: *mut usize) -> CfStatus {
    guard(|| write_out(out, handle(group, "group")?.group.order()))
}

/// Number of conjugacy classes, which equals the number of irreducibles.
///
/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_group_class_count(group: *const CfGroup, out: *mut usize) -> CfStatus {
    guard(|| write_out(out, handle(group, "group")?.table.len()))
}

/// Character table as a JSON string; release it with [`cf_string_free`].
///
/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_group_character_table_json(group: *const CfGroup, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let g = handle(group, "group")?;
        let t = &g.table;
        let classes: Vec<_> = t
            .classes()
            .iter()
            .map(|c| serde_json::json!({ "representative": g.group.label(c.representative), "size": c.size() }))
            .collect();
        let rows: Vec<_> = (0..t.len())
            .map(|i| {
                serde_json::json!({
                    "label": t.irreducibles()[i].label,
                    "degree": t.degree(i),
                    "values": t.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let value = serde_json::json!({ "order": g.group.order(), "classes": classes, "irreducibles": rows });
        write_string(out, serde_json::to_string_pretty(&value).map_err(computation)?)
    })
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    let s = CString::new(text).map_err(computation)?;
    write_out(out, s.into_raw())
}

/// Parses a datum file. Invalid data still yield a handle; check them with
/// [`cf_datum_is_valid`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_datum_from_json(json: *const c_char, out: *mut *mut CfDatum) -> CfStatus {
    guard(|| {
        let text = input_str(json)?;
        let datum = parse_datum_file(text, DEFAULT_ELEMENT_CAP).map_err(|e| (CfStatus::ParseError, e.to_string()))?;
        let table = character_table(datum.group()).map_err(computation)?;
        write_out(out, Box::into_raw(Box::new(CfDatum { datum, table })))
    })
}

/// # Safety
/// `datum` must be null or a handle from [`cf_datum_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cf_datum_free(datum: *mut CfDatum) {
    if !datum.is_null() {
        drop(Box::from_raw(datum));
    }
}

/// Writes whether the datum satisfies the existence conditions; on `false`
/// the reasons are available from [`cf_last_error`].
///
/// # Safety
/// `datum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_datum_is_valid(datum: *const CfDatum, out: *mut bool) -> CfStatus {
    let mut issues = None;
    let status = guard(|| {
        let report = handle(datum, "datum")?.datum.validate();
        if !report.is_valid() {
            issues = Some(report.to_string());
        }
        write_out(out, report.is_valid())
    });
    if let Some(text) = issues {
        set_last_error(text);
    }
    status
}

fn valid(d: &CfDatum) -> Result<(), Failure> {
    let report = d.datum.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err((CfStatus::InvalidDatum, report.to_string()))
    }
}

/// Genus of the covering curve.
///
/// # Safety
/// `datum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_datum_genus(datum: *const CfDatum, out: *mut u64) -> CfStatus {
    guard(|| {
        let d = handle(datum, "datum")?;
        valid(d)?;
        write_out(out, d.datum.riemann_hurwitz_genus().map_err(computation)? as u64)
    })
}

/// Multiplicity of each irreducible in the holomorphic differentials, in
/// character-table order. `written` receives the number of irreducibles; if
/// `capacity` is smaller, nothing is copied and `BufferTooSmall` is returned.
///
/// # Safety
/// `datum` must be a live handle, `out` must hold `capacity` values, and
/// `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_datum_cw_multiplicities(
    datum: *const CfDatum,
    out: *mut u64,
    capacity: usize,
    written: *mut usize,
) -> CfStatus {
    guard(|| {
        let d = handle(datum, "datum")?;
        valid(d)?;
        let count = d.table.len();
        write_out(written, count)?;
        if capacity < count {
            return Err((CfStatus::BufferTooSmall, format!("need room for {count} values, got {capacity}")));
        }
        if out.is_null() {
            return Err(null("output buffer"));
        }
        for irr in 0..count {
            let mu = chevalley_weil_multiplicity(&d.datum, &d.table, irr).map_err(computation)?;
            out.add(irr).write(mu);
        }
        Ok(())
    })
}

/// Genus and per-irreducible summands (rank, support, multiplicity, Hodge
/// type) as JSON; release it with [`cf_string_free`].
///
/// # Safety
/// `datum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_datum_report_json(datum: *const CfDatum, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let d = handle(datum, "datum")?;
        valid(d)?;
        let decomposition = decompose_direct_image(&d.datum, &d.table).map_err(computation)?;
        write_string(out, serde_json::to_string_pretty(&decomposition).map_err(computation)?)
    })
}

//! C ABI over `ocs`.
//!
//! Every fallible function returns an [`OcsStatus`]. On failure the message is
//! kept per thread and read with [`ocs_last_error_message`]. Handles are
//! opaque and released with their `_free` function; strings returned through
//! `out` parameters are released with [`ocs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ocs::dowling::{build_poset, count_elements_species, enumerate_elements, DowlingSpec};
use ocs::homology::{reduced_homology, whitney_homology};
use ocs::io::SpecFile;
use ocs::poset::{Poset, PosetJson};
use ocs::series::{e1_table, euler_series, SpaceInput};
use ocs::stability::{iterate_report, Variant};
use ocs::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OcsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or spec.
    Parse = 3,
    /// Any other domain error.
    Domain = 4,
    /// The request is outside the validity of the method.
    Refused = 5,
    CapExceeded = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// A finite poset.
pub struct OcsPoset {
    inner: Poset,
}

/// A space with its group action and special orbits.
pub struct OcsSpace {
    inner: SpaceInput,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OcsStatus {
    match e {
        Error::Parse(_) | Error::InvalidGroup(_) | Error::InvalidGSet(_) | Error::NotSubgroup(_) => {
            OcsStatus::Parse
        }
        Error::Refused(_) => OcsStatus::Refused,
        Error::CapExceeded { .. } => OcsStatus::CapExceeded,
        _ => OcsStatus::Domain,
    }
}

fn fail(status: OcsStatus, msg: impl Into<String>) -> OcsStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), OcsStatus>) -> OcsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OcsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(OcsStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: ocs::Result<T>) -> Result<T, OcsStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, OcsStatus> {
    if s.is_null() {
        return Err(fail(OcsStatus::NullPointer, "null string argument"));
    }
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| fail(OcsStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), OcsStatus> {
    if out.is_null() {
        return Err(fail(OcsStatus::NullPointer, "null output pointer"));
    }
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn write_json(out: *mut *mut c_char, v: &serde_json::Value) -> Result<(), OcsStatus> {
    let s = CString::new(v.to_string()).map_err(|_| fail(OcsStatus::Domain, "interior NUL in output"))?;
    unsafe { write_out(out, s.into_raw()) }
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, OcsStatus> {
    unsafe { p.as_ref() }.ok_or_else(|| fail(OcsStatus::NullPointer, "null handle"))
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ocs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ocs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Static version string.
#[no_mangle]
pub extern "C" fn ocs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a poset from `{"n", "covers", "rank"?, "elements"?}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ocs_poset_from_json(json: *const c_char, out: *mut *mut OcsPoset) -> OcsStatus {
    guard(|| {
        let text = unsafe { read_str(json)? };
        let pj: PosetJson = lift(serde_json::from_str(text).map_err(Error::from))?;
        let inner = lift(Poset::from_json(&pj))?;
        unsafe { write_out(out, Box::into_raw(Box::new(OcsPoset { inner }))) }
    })
}

/// Enumerates `D_n^T(G,S)` from a G-set or space spec.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ocs_dowling_build(
    spec_json: *const c_char,
    n: usize,
    cap: usize,
    out: *mut *mut OcsPoset,
) -> OcsStatus {
    guard(|| {
        let spec = unsafe { dowling_spec(spec_json, n)? };
        let dp = lift(build_poset(&spec, cap))?;
        unsafe { write_out(out, Box::into_raw(Box::new(OcsPoset { inner: dp.poset }))) }
    })
}

unsafe fn dowling_spec(spec_json: *const c_char, n: usize) -> Result<DowlingSpec, OcsStatus> {
    let text = unsafe { read_str(spec_json)? };
    let gset = lift(SpecFile::parse(text).and_then(|s| s.gset()))?;
    lift(DowlingSpec::new(gset, n))
}

/// Element counts by enumeration and by the species formula.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string; both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ocs_dowling_count(
    spec_json: *const c_char,
    n: usize,
    cap: usize,
    out_enumerated: *mut u64,
    out_species: *mut u64,
) -> OcsStatus {
    guard(|| {
        let spec = unsafe { dowling_spec(spec_json, n)? };
        let enumerated = lift(enumerate_elements(&spec, cap))?.len() as u64;
        let species = lift(count_elements_species(&spec))?;
        let species = u64::try_from(species).map_err(|_| fail(OcsStatus::Domain, "count exceeds u64"))?;
        unsafe {
            write_out(out_enumerated, enumerated)?;
            write_out(out_species, species)
        }
    })
}

/// # Safety
/// `p` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ocs_poset_free(p: *mut OcsPoset) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Number of elements; 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ocs_poset_len(p: *const OcsPoset) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.inner.len())
}

/// `μ(a, b)`.
///
/// # Safety
/// `p` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ocs_poset_mobius(p: *const OcsPoset, a: usize, b: usize, out: *mut i64) -> OcsStatus {
    guard(|| {
        let p = unsafe { handle(p)? };
        if a >= p.inner.len() || b >= p.inner.len() {
            return Err(fail(OcsStatus::OutOfRange, "element index out of range"));
        }
        let mu = lift(p.inner.mobius(a, b))?;
        unsafe { write_out(out, mu) }
    })
}

/// Reduced homology of the order complex as JSON `{"degree": rank}`.
///
/// # Safety
/// `p` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ocs_poset_homology_json(p: *const OcsPoset, out: *mut *mut c_char) -> OcsStatus {
    guard(|| {
        let p = unsafe { handle(p)? };
        let h = lift(reduced_homology(&p.inner))?;
        unsafe { write_json(out, &serde_json::to_value(h).unwrap_or_default()) }
    })
}

/// Whitney homology as a JSON list of `{rank, degree, dim}`.
///
/// # Safety
/// `p` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ocs_poset_whitney_json(p: *const OcsPoset, out: *mut *mut c_char) -> OcsStatus {
    guard(|| {
        let p = unsafe { handle(p)? };
        let w = lift(whitney_homology(&p.inner))?;
        unsafe { write_json(out, &serde_json::to_value(w).unwrap_or_default()) }
    })
}

/// Parses a space spec (JSON with `betti`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ocs_space_from_json(json: *const c_char, out: *mut *mut OcsSpace) -> OcsStatus {
    guard(|| {
        let text = unsafe { read_str(json)? };
        let inner = lift(SpecFile::parse(text).and_then(|s| s.space("space")))?;
        unsafe { write_out(out, Box::into_raw(Box::new(OcsSpace { inner }))) }
    })
}

/// # Safety
/// `s` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ocs_space_free(s: *mut OcsSpace) {
    if !s.is_null() {
        drop(unsafe { Box::from_raw(s) });
    }
}

/// E¹ dimensions for `n ≤ nmax` as a JSON list of `{n, p, q, dim}`.
///
/// # Safety
/// `s` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ocs_space_e1_json(s: *const OcsSpace, nmax: usize, out: *mut *mut c_char) -> OcsStatus {
    guard(|| {
        let s = unsafe { handle(s)? };
        let t = lift(e1_table(&s.inner, nmax))?;
        unsafe { write_json(out, &serde_json::to_value(t).unwrap_or_default()) }
    })
}

/// `χ_c(Confⁿ)` for `n ≤ nmax` as a JSON list of decimal strings.
///
/// # Safety
/// `s` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ocs_space_euler_json(s: *const OcsSpace, nmax: usize, out: *mut *mut c_char) -> OcsStatus {
    guard(|| {
        let s = unsafe { handle(s)? };
        let e = lift(euler_series(&s.inner, nmax))?;
        let v: Vec<String> = e.iter().map(ToString::to_string).collect();
        unsafe { write_json(out, &serde_json::json!(v)) }
    })
}

/// Stability report; `variant` is `left`, `right` or `bottom`.
///
/// # Safety
/// `s` must be a live handle; `variant` a NUL-terminated string; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ocs_space_stability_json(
    s: *const OcsSpace,
    variant: *const c_char,
    steps: usize,
    out: *mut *mut c_char,
) -> OcsStatus {
    guard(|| {
        let s = unsafe { handle(s)? };
        let v: Variant = lift(unsafe { read_str(variant)? }.parse())?;
        let r = lift(iterate_report(&s.inner, v, steps))?;
        unsafe { write_json(out, &r.to_json()) }
    })
}

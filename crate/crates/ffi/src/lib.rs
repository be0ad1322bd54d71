//! C ABI over `abelian-core`.
//!
//! Groups are opaque `AbGroup` handles. Every fallible call returns an
//! `AbStatus` and writes its result through an out-pointer; on failure the
//! message is available from `ab_last_error` on the same thread. Strings
//! returned through `char **` are owned by the caller and released with
//! `ab_string_free`. Elements and moduli are comma-separated decimal lists
//! such as `"2,4,8,8"`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use abelian_core::cli;
use abelian_core::orbits::enumerate_orbits_with_cap;
use abelian_core::{are_automorphic_with, quotient_key, AbelianGroup, Error, Method};

/// Result of every fallible call. Values 2 to 5 match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbStatus {
    Ok = 0,
    Parse = 2,
    Arity = 3,
    Factorization = 4,
    Capacity = 5,
    NullArgument = 6,
    InvalidUtf8 = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbMethod {
    Fast = 0,
    Snf = 1,
}

impl From<AbMethod> for Method {
    fn from(m: AbMethod) -> Self {
        match m {
            AbMethod::Fast => Method::Fast,
            AbMethod::Snf => Method::Snf,
        }
    }
}

/// A finite abelian group `Z/d_1 + ... + Z/d_k`.
pub struct AbGroup {
    inner: AbelianGroup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AbStatus {
    match e {
        Error::Parse(_) | Error::NonPositiveModulus(_) => AbStatus::Parse,
        Error::DimensionMismatch { .. } => AbStatus::Arity,
        Error::FactorizationFailure(_) => AbStatus::Factorization,
        Error::CapacityExceeded { .. } => AbStatus::Capacity,
        Error::InvalidValuation { .. } => AbStatus::Internal,
    }
}

struct Failure(AbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> AbStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AbStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal error: {msg}"));
            AbStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(AbStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(AbStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn group_ref<'a>(g: *const AbGroup) -> Result<&'a AbelianGroup, Failure> {
    g.as_ref()
        .map(|g| &g.inner)
        .ok_or_else(|| Failure(AbStatus::NullArgument, "group is null".into()))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(AbStatus::NullArgument, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).expect("no interior NUL").into_raw();
}

/// Builds a group from comma-separated positive moduli.
///
/// # Safety
/// `moduli` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_group_new(moduli: *const c_char, out: *mut *mut AbGroup) -> AbStatus {
    guard(|| {
        check_out(out)?;
        let g = cli::parse_group(read_str(moduli, "moduli")?)?;
        *out = Box::into_raw(Box::new(AbGroup { inner: g }));
        Ok(())
    })
}

/// Releases a group. Null is ignored.
///
/// # Safety
/// `g` must come from `ab_group_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ab_group_free(g: *mut AbGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// `|G|` in decimal.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_group_order(g: *const AbGroup, out: *mut *mut c_char) -> AbStatus {
    guard(|| {
        check_out(out)?;
        write_string(out, group_ref(g)?.order().to_string());
        Ok(())
    })
}

/// Invariant factors `m_1 | ... | m_k` as a comma-separated list, `"1"` for
/// the trivial group.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_group_invariant_factors(g: *const AbGroup, out: *mut *mut c_char) -> AbStatus {
    guard(|| {
        check_out(out)?;
        let inv = group_ref(g)?.invariant_factors();
        let s = if inv.is_empty() {
            "1".to_string()
        } else {
            cli::format_spec(inv)
        };
        write_string(out, s);
        Ok(())
    })
}

/// Isomorphism class of `G/<x>` in the form `C2 x C8 x C8`.
///
/// # Safety
/// `g` must be a live handle, `x` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_quotient(
    g: *const AbGroup,
    x: *const c_char,
    method: AbMethod,
    out: *mut *mut c_char,
) -> AbStatus {
    guard(|| {
        check_out(out)?;
        let g = group_ref(g)?;
        let x = cli::parse_element(g, read_str(x, "element")?)?;
        write_string(out, quotient_key(g, &x, method.into())?.to_string());
        Ok(())
    })
}

/// `G/<x>` as JSON with `order`, `invariant_factors` and `primary_parts`.
///
/// # Safety
/// `g` must be a live handle, `x` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_quotient_json(
    g: *const AbGroup,
    x: *const c_char,
    method: AbMethod,
    out: *mut *mut c_char,
) -> AbStatus {
    guard(|| {
        check_out(out)?;
        let g = group_ref(g)?;
        let x = cli::parse_element(g, read_str(x, "element")?)?;
        write_string(out, cli::key_json(&quotient_key(g, &x, method.into())?));
        Ok(())
    })
}

/// Writes 1 to `out` when some automorphism maps `x` to `y`, else 0.
///
/// # Safety
/// `g` must be a live handle, `x` and `y` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_are_automorphic(
    g: *const AbGroup,
    x: *const c_char,
    y: *const c_char,
    method: AbMethod,
    out: *mut c_int,
) -> AbStatus {
    guard(|| {
        check_out(out)?;
        let g = group_ref(g)?;
        let x = cli::parse_element(g, read_str(x, "x")?)?;
        let y = cli::parse_element(g, read_str(y, "y")?)?;
        *out = are_automorphic_with(g, &x, &y, method.into())? as c_int;
        Ok(())
    })
}

/// Automorphism orbits as the JSON document printed by
/// `abelian orbits --format json`. Fails with `AB_STATUS_CAPACITY` when more
/// than `cap` reduced forms would be enumerated.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_orbits_json(g: *const AbGroup, cap: u64, out: *mut *mut c_char) -> AbStatus {
    guard(|| {
        check_out(out)?;
        let g = group_ref(g)?;
        let orbits = enumerate_orbits_with_cap(g, cap)?;
        write_string(out, cli::orbits_json(g, &orbits)?);
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

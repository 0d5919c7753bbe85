//! C ABI over the `transcend` library.
//!
//! Sequences live behind an opaque [`TrSeries`] handle. Every fallible call
//! returns a [`TrStatus`]; on failure the message is available from
//! [`tr_last_error`] on the same thread. Structured results are returned as
//! NUL-terminated JSON strings owned by the caller and released with
//! [`tr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use transcend::json::to_canonical_string;
use transcend::{Error, Limits, RationalExponent, SequenceSpec, Series, Window};

/// Result code of every fallible call. `TR_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrStatus {
    TrOk = 0,
    TrNullPointer = 1,
    TrInvalidUtf8 = 2,
    TrParse = 3,
    TrInvalidParameter = 4,
    TrInvalidIndexMap = 5,
    TrIndexOutOfRange = 6,
    TrOverflow = 7,
    TrNoTailGuarantee = 8,
    TrNotFoundInWindow = 9,
    TrAlphaTooSmall = 10,
    TrHypothesisFailed = 11,
    TrWitnessFailed = 12,
    TrNotFoundBelowNMax = 13,
    TrInconclusive = 14,
    TrEnumerationTooLarge = 15,
    TrSpecMismatch = 16,
    TrInternal = 17,
    TrPanic = 18,
}

impl From<&Error> for TrStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::IndexOutOfRange { .. } => TrStatus::TrIndexOutOfRange,
            Error::Overflow { .. } => TrStatus::TrOverflow,
            Error::InvalidParameter(_) => TrStatus::TrInvalidParameter,
            Error::InvalidIndexMap(_) => TrStatus::TrInvalidIndexMap,
            Error::NoTailGuarantee => TrStatus::TrNoTailGuarantee,
            Error::NotFoundInWindow { .. } => TrStatus::TrNotFoundInWindow,
            Error::AlphaTooSmall(_) => TrStatus::TrAlphaTooSmall,
            Error::HypothesisFailed { .. } => TrStatus::TrHypothesisFailed,
            Error::WitnessFailed { .. } => TrStatus::TrWitnessFailed,
            Error::NotFoundBelowNMax { .. } => TrStatus::TrNotFoundBelowNMax,
            Error::Inconclusive { .. } => TrStatus::TrInconclusive,
            Error::EnumerationTooLarge { .. } => TrStatus::TrEnumerationTooLarge,
            Error::SpecMismatch => TrStatus::TrSpecMismatch,
            Error::Parse(_) => TrStatus::TrParse,
            Error::Internal(_) => TrStatus::TrInternal,
        }
    }
}

/// Opaque sequence handle.
pub struct TrSeries {
    inner: Series,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(TrStatus::from(&e), format!("{}: {}", e.kind(), e))
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Outcome<()>) -> TrStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TrStatus::TrOk,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside transcend".into());
            TrStatus::TrPanic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(Failure(TrStatus::TrNullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TrStatus::TrInvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_series<'a>(p: *const TrSeries) -> Outcome<&'a Series> {
    p.as_ref()
        .map(|s| &s.inner)
        .ok_or_else(|| Failure(TrStatus::TrNullPointer, "series handle is null".into()))
}

unsafe fn read_exponent(p: *const c_char, what: &str) -> Outcome<RationalExponent> {
    Ok(read_str(p, what)?.parse()?)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Outcome<()> {
    if out.is_null() {
        return Err(Failure(TrStatus::TrNullPointer, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Failure(TrStatus::TrInternal, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn window(from: u64, to: u64) -> Outcome<Window> {
    Ok(Window::new(from, to)?)
}

/// Message for the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next `tr_*` call on the same thread.
#[no_mangle]
pub extern "C" fn tr_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from a `tr_*` output parameter and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a sequence spec from JSON. `digit_budget` of zero selects the default.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tr_series_new(
    spec_json: *const c_char,
    digit_budget: u64,
    out: *mut *mut TrSeries,
) -> TrStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(TrStatus::TrNullPointer, "output pointer is null".into()));
        }
        let spec: SequenceSpec = serde_json::from_str(read_str(spec_json, "spec")?).map_err(Error::from)?;
        let mut limits = Limits::default();
        if digit_budget > 0 {
            limits.digit_budget = digit_budget;
        }
        *out = Box::into_raw(Box::new(TrSeries { inner: Series::new(spec, limits) }));
        Ok(())
    })
}

/// Destroys a handle. NULL is ignored.
///
/// # Safety
/// `series` must come from `tr_series_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tr_series_free(series: *mut TrSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Canonical JSON of the spec behind the handle.
///
/// # Safety
/// Pointers must be valid as described in the header.
#[no_mangle]
pub unsafe extern "C" fn tr_series_spec_json(series: *const TrSeries, out: *mut *mut c_char) -> TrStatus {
    guard(|| write_string(out, to_canonical_string(read_series(series)?.spec())?))
}

/// Term `a_n` (1-based) in decimal.
///
/// # Safety
/// Pointers must be valid as described in the header.
#[no_mangle]
pub unsafe extern "C" fn tr_series_term(series: *const TrSeries, n: u64, out: *mut *mut c_char) -> TrStatus {
    guard(|| write_string(out, read_series(series)?.term(n)?.to_string()))
}

/// Reduced partial sum through index `m` as `{"m","p","q"}` JSON.
///
/// # Safety
/// Pointers must be valid as described in the header.
#[no_mangle]
pub unsafe extern "C" fn tr_series_partial_sum(series: *const TrSeries, m: u64, out: *mut *mut c_char) -> TrStatus {
    guard(|| {
        let c = transcend::partial_sum(read_series(series)?, m)?;
        write_string(out, to_canonical_string(&c)?)
    })
}

/// Rational enclosure of the series value built from the first `m` terms.
///
/// # Safety
/// Pointers must be valid as described in the header.
#[no_mangle]
pub unsafe extern "C" fn tr_series_enclose(series: *const TrSeries, m: u64, out: *mut *mut c_char) -> TrStatus {
    guard(|| {
        let e = transcend::enclose(read_series(series)?, m)?;
        write_string(out, to_canonical_string(&e)?)
    })
}

/// Per-index growth report for exponent `alpha` (e.g. `"5/2"`) on `from..=to`.
///
/// # Safety
/// Pointers must be valid as described in the header.
#[no_mangle]
pub unsafe extern "C" fn tr_series_check_growth(
    series: *const TrSeries,
    alpha: *const c_char,
    from: u64,
    to: u64,
    out: *mut *mut c_char,
) -> TrStatus {
    guard(|| {
        let s = read_series(series)?;
        let r = transcend::check_growth(s, &read_exponent(alpha, "alpha")?, window(from, to)?)?;
        write_string(out, to_canonical_string(&r)?)
    })
}

/// Approximation certificate for exponent `alpha` over witnesses `from..=to`.
///
/// # Safety
/// Pointers must be valid as described in the header.
#[no_mangle]
pub unsafe extern "C" fn tr_series_certify(
    series: *const TrSeries,
    alpha: *const c_char,
    from: u64,
    to: u64,
    out: *mut *mut c_char,
) -> TrStatus {
    guard(|| {
        let s = read_series(series)?;
        let c = transcend::certify(s, &read_exponent(alpha, "alpha")?, window(from, to)?)?;
        write_string(out, to_canonical_string(&c)?)
    })
}

/// Measure bound for degree `d`, height `height` and exponents `alpha`, `k`.
///
/// # Safety
/// Pointers must be valid as described in the header.
#[no_mangle]
pub unsafe extern "C" fn tr_measure_bound(
    d: u64,
    height: u64,
    alpha: *const c_char,
    k: *const c_char,
    out: *mut *mut c_char,
) -> TrStatus {
    guard(|| {
        let b = transcend::bound(d, &BigUint::from(height), &read_exponent(alpha, "alpha")?, &read_exponent(k, "k")?)?;
        write_string(out, to_canonical_string(&b)?)
    })
}

/// Verifies the measure bound for the polynomial with comma-separated
/// coefficients `coeffs` (constant term first), declared degree `d` and
/// height `height`.
///
/// # Safety
/// Pointers must be valid as described in the header.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn tr_series_verify_measure(
    series: *const TrSeries,
    alpha: *const c_char,
    k: *const c_char,
    coeffs: *const c_char,
    d: u64,
    height: u64,
    max_refinements: u32,
    out: *mut *mut c_char,
) -> TrStatus {
    guard(|| {
        let s = read_series(series)?;
        let poly = transcend::cli::parse_coeffs(read_str(coeffs, "coeffs")?)?;
        let ev = transcend::verify_measure(
            s,
            &read_exponent(alpha, "alpha")?,
            &read_exponent(k, "k")?,
            &poly,
            d,
            &BigUint::from(height),
            max_refinements,
        )?;
        write_string(out, to_canonical_string(&ev)?)
    })
}

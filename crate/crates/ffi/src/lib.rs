//! C ABI over `pairpoly`.
//!
//! Objects are opaque handles created by `*_new` functions and released by the
//! matching `*_free`. Every fallible call returns a [`PairpolyStatus`]; the
//! message of the last failure on the calling thread is available from
//! [`pairpoly_last_error`]. Strings returned as `char *` are owned by the caller
//! and must be released with [`pairpoly_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use pairpoly::assembly::{flip_difference, thaddeus_closed_form, total_generic, BettiTable, ContributionLedger};
use pairpoly::strata::{enumerate_delta, DeltaIndex, ModuliParams};
use pairpoly::{Error, ExactRational, SurfaceParams, TruncSeries};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairpolyStatus {
    Ok = 0,
    /// Parameters outside the domain (genus, degree, window, tau range).
    Domain = 1,
    /// tau lies on a wall.
    NonGeneric = 2,
    /// Truncation buffer too small.
    InsufficientBuffer = 3,
    NotPolynomial = 4,
    Identity = 5,
    /// Index past the end, or a value that does not fit the output type.
    OutOfRange = 6,
    NegativeExponent = 7,
    NullPointer = 8,
    Panic = 9,
}

impl From<&Error> for PairpolyStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => PairpolyStatus::Domain,
            Error::NonGeneric { .. } => PairpolyStatus::NonGeneric,
            Error::InsufficientBuffer { .. } => PairpolyStatus::InsufficientBuffer,
            Error::NotPolynomial { .. } => PairpolyStatus::NotPolynomial,
            Error::Identity(_) => PairpolyStatus::Identity,
            Error::OutOfRange { .. } => PairpolyStatus::OutOfRange,
            Error::NegativeExponent(_) => PairpolyStatus::NegativeExponent,
        }
    }
}

/// Betti numbers of one moduli space together with the ledger that produced them.
pub struct PairpolyBetti {
    table: BettiTable,
    ledger: ContributionLedger,
}

/// A truncated power series with integer coefficients.
pub struct PairpolySeries {
    series: TruncSeries,
}

/// The stratification index at one generic tau.
pub struct PairpolyStrata {
    index: DeltaIndex,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: PairpolyStatus, msg: impl Into<String>) -> PairpolyStatus {
    set_error(msg);
    status
}

fn fail_with(e: Error) -> PairpolyStatus {
    fail(PairpolyStatus::from(&e), e.to_string())
}

/// Runs `f`, turning panics into `PairpolyStatus::Panic`.
fn guard(f: impl FnOnce() -> PairpolyStatus) -> PairpolyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(PairpolyStatus::Panic, "internal panic"),
    }
}

fn order_for(p: SurfaceParams, buffer: u32) -> Result<usize, Error> {
    if buffer == 0 {
        return Err(Error::Domain("truncation buffer must be at least 1".into()));
    }
    Ok(p.top_degree() + buffer as usize)
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> PairpolyStatus {
    *out = Box::into_raw(Box::new(value));
    PairpolyStatus::Ok
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn pairpoly_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code, e.g. `"DOMAIN"`.
#[no_mangle]
pub extern "C" fn pairpoly_status_name(status: PairpolyStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        PairpolyStatus::Ok => b"OK\0",
        PairpolyStatus::Domain => b"DOMAIN\0",
        PairpolyStatus::NonGeneric => b"NON_GENERIC\0",
        PairpolyStatus::InsufficientBuffer => b"INSUFFICIENT_BUFFER\0",
        PairpolyStatus::NotPolynomial => b"NOT_POLYNOMIAL\0",
        PairpolyStatus::Identity => b"IDENTITY\0",
        PairpolyStatus::OutOfRange => b"OUT_OF_RANGE\0",
        PairpolyStatus::NegativeExponent => b"NEGATIVE_EXPONENT\0",
        PairpolyStatus::NullPointer => b"NULL_POINTER\0",
        PairpolyStatus::Panic => b"PANIC\0",
    };
    name.as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from a `pairpoly_*` function returning `char *` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Computes the Betti numbers for genus `g`, degree `d` and window `n`
/// (`tau` in `(max{d/2, n-1}, n)`). `buffer` is the truncation buffer above
/// the top degree; 8 is the usual choice.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_betti_new(
    g: i64,
    d: i64,
    n: i64,
    buffer: u32,
    out: *mut *mut PairpolyBetti,
) -> PairpolyStatus {
    if out.is_null() {
        return fail(PairpolyStatus::NullPointer, "out is null");
    }
    guard(|| {
        let run = || -> Result<PairpolyBetti, Error> {
            let p = SurfaceParams::new(g, d)?;
            let ledger = total_generic(p, n, order_for(p, buffer)?)?;
            let table = BettiTable::from_total(p, n, &ledger.total)?;
            Ok(PairpolyBetti { table, ledger })
        };
        match run() {
            Ok(b) => write_handle(out, b),
            Err(e) => fail_with(e),
        }
    })
}

/// Number of Betti numbers, `2(d + 2g - 2) + 1`.
///
/// # Safety
/// `h` must be a live handle from [`pairpoly_betti_new`].
#[no_mangle]
pub unsafe extern "C" fn pairpoly_betti_len(h: *const PairpolyBetti) -> usize {
    h.as_ref().map_or(0, |b| b.table.betti.len())
}

/// Writes `b_k` to `out`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_betti_get(h: *const PairpolyBetti, k: usize, out: *mut i64) -> PairpolyStatus {
    let (Some(b), false) = (h.as_ref(), out.is_null()) else {
        return fail(PairpolyStatus::NullPointer, "null handle or output");
    };
    match b.table.betti.get(k) {
        None => fail(PairpolyStatus::OutOfRange, format!("b_{k} past the top degree {}", b.table.betti.len() - 1)),
        Some(v) => match v.to_i64() {
            Some(v) => {
                *out = v;
                PairpolyStatus::Ok
            }
            None => fail(PairpolyStatus::OutOfRange, format!("b_{k} = {v} does not fit in 64 bits")),
        },
    }
}

/// True when degree, duality, positivity, divisibility, Euler characteristic,
/// `b_0` and `b_1` all check out.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_betti_checks_pass(h: *const PairpolyBetti) -> bool {
    h.as_ref().is_some_and(|b| b.table.checks.all_pass())
}

/// The Betti table as JSON, with the contribution ledger if `with_ledger`.
///
/// # Safety
/// `h` must be a live handle. Free the result with [`pairpoly_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pairpoly_betti_to_json(h: *const PairpolyBetti, with_ledger: bool) -> *mut c_char {
    match h.as_ref() {
        Some(b) => to_c_string(pairpoly::cli::betti_to_json(&b.table, with_ledger.then_some(&b.ledger))),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `h` must be null or a handle from [`pairpoly_betti_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_betti_free(h: *mut PairpolyBetti) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

unsafe fn series_result(out: *mut *mut PairpolySeries, r: impl FnOnce() -> Result<TruncSeries, Error>) -> PairpolyStatus {
    if out.is_null() {
        return fail(PairpolyStatus::NullPointer, "out is null");
    }
    guard(|| match r() {
        Ok(series) => write_handle(out, PairpolySeries { series }),
        Err(e) => fail_with(e),
    })
}

/// Change of the Poincaré polynomial across the wall `tau = n`
/// (`d/2 < n <= d - 1`), without the Jacobian factor if `fixed_det`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_flip_difference(
    g: i64,
    d: i64,
    n: i64,
    buffer: u32,
    fixed_det: bool,
    out: *mut *mut PairpolySeries,
) -> PairpolyStatus {
    series_result(out, || {
        let p = SurfaceParams::new(g, d)?;
        flip_difference(p, n, order_for(p, buffer)?, fixed_det)
    })
}

/// The Poincaré polynomial for window `n` by coefficient extraction, an
/// independent route to the one used by [`pairpoly_betti_new`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_closed_form(
    g: i64,
    d: i64,
    n: i64,
    buffer: u32,
    out: *mut *mut PairpolySeries,
) -> PairpolyStatus {
    series_result(out, || {
        let p = SurfaceParams::new(g, d)?;
        thaddeus_closed_form(p, n, order_for(p, buffer)?)
    })
}

/// Number of stored coefficients (truncation order + 1).
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_series_len(h: *const PairpolySeries) -> usize {
    h.as_ref().map_or(0, |s| s.series.coeffs().len())
}

/// Writes the coefficient of `t^k` to `out`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_series_get(h: *const PairpolySeries, k: usize, out: *mut i64) -> PairpolyStatus {
    let (Some(s), false) = (h.as_ref(), out.is_null()) else {
        return fail(PairpolyStatus::NullPointer, "null handle or output");
    };
    match s.series.coeffs().get(k).map(|c| c.to_i64()) {
        None => fail(PairpolyStatus::OutOfRange, format!("t^{k} is past the truncation order {}", s.series.order())),
        Some(None) => fail(PairpolyStatus::OutOfRange, format!("coefficient of t^{k} does not fit in 64 bits")),
        Some(Some(v)) => {
            *out = v;
            PairpolyStatus::Ok
        }
    }
}

/// Human-readable form such as `1 + 4t + t^2`.
///
/// # Safety
/// `h` must be a live handle. Free the result with [`pairpoly_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pairpoly_series_to_string(h: *const PairpolySeries) -> *mut c_char {
    h.as_ref().map_or(ptr::null_mut(), |s| to_c_string(s.series.to_string()))
}

/// # Safety
/// `h` must be null or a live series handle.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_series_free(h: *mut PairpolySeries) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Enumerates the strata at `tau = tau_num / tau_den`, listing the `Ib`
/// family up to `j_max` (at least `d`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_strata_new(
    g: i64,
    d: i64,
    tau_num: i64,
    tau_den: i64,
    j_max: i64,
    out: *mut *mut PairpolyStrata,
) -> PairpolyStatus {
    if out.is_null() {
        return fail(PairpolyStatus::NullPointer, "out is null");
    }
    guard(|| {
        let run = || -> Result<DeltaIndex, Error> {
            let mp = ModuliParams::new(g, d, ExactRational::new(tau_num, tau_den)?)?;
            enumerate_delta(&mp, j_max)
        };
        match run() {
            Ok(index) => write_handle(out, PairpolyStrata { index }),
            Err(e) => fail_with(e),
        }
    })
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_strata_len(h: *const PairpolyStrata) -> usize {
    h.as_ref().map_or(0, |s| s.index.len())
}

/// Describes stratum `i` (in increasing `delta`). `class_name` receives a
/// static string (`"OPEN"`, `"Ia_SS"`, `"Ia"`, `"Ib"`, `"IIplus"`, `"IIminus"`);
/// `j` is `INT64_MIN` for strata without an integer slope; `delta` is written
/// as a reduced fraction.
///
/// # Safety
/// `h` must be a live handle; all outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_strata_get(
    h: *const PairpolyStrata,
    i: usize,
    class_name: *mut *const c_char,
    j: *mut i64,
    delta_num: *mut i64,
    delta_den: *mut i64,
) -> PairpolyStatus {
    let Some(s) = h.as_ref() else {
        return fail(PairpolyStatus::NullPointer, "null handle");
    };
    if class_name.is_null() || j.is_null() || delta_num.is_null() || delta_den.is_null() {
        return fail(PairpolyStatus::NullPointer, "null output");
    }
    let Some(st) = s.index.strata.get(i) else {
        return fail(PairpolyStatus::OutOfRange, format!("stratum {i} of {}", s.index.len()));
    };
    let (Some(num), Some(den)) = (st.delta.numer().to_i64(), st.delta.denom().to_i64()) else {
        return fail(PairpolyStatus::OutOfRange, "delta does not fit in 64 bits");
    };
    let name: &'static [u8] = match st.class.as_str() {
        "OPEN" => b"OPEN\0",
        "Ia_SS" => b"Ia_SS\0",
        "Ia" => b"Ia\0",
        "Ib" => b"Ib\0",
        "IIplus" => b"IIplus\0",
        _ => b"IIminus\0",
    };
    *class_name = name.as_ptr().cast();
    *j = st.j.unwrap_or(i64::MIN);
    *delta_num = num;
    *delta_den = den;
    PairpolyStatus::Ok
}

/// # Safety
/// `h` must be null or a live strata handle.
#[no_mangle]
pub unsafe extern "C" fn pairpoly_strata_free(h: *mut PairpolyStrata) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn status_mapping() {
        assert_eq!(PairpolyStatus::from(&Error::NegativeExponent(-2)), PairpolyStatus::NegativeExponent);
        assert_eq!(
            PairpolyStatus::from(&Error::NonGeneric { tau: "9/2".into(), d: 5, rule: "r" }),
            PairpolyStatus::NonGeneric
        );
        assert_eq!(PairpolyStatus::Panic as i32, 9);
    }

    #[test]
    fn panics_become_status_codes() {
        assert_eq!(guard(|| panic!("boom")), PairpolyStatus::Panic);
        assert_eq!(unsafe { CStr::from_ptr(pairpoly_last_error()) }.to_str().unwrap(), "internal panic");
    }
}

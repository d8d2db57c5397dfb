//! C ABI over `qmodular`.
//!
//! Every entry point returns a [`QmStatus`]; on failure the message is
//! available from [`qm_last_error`] on the same thread. Strings handed out by
//! the library are NUL-terminated, owned by the caller and released with
//! [`qm_string_free`]. Series are opaque [`QmSeries`] handles released with
//! [`qm_series_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qmodular::identities;
use qmodular::levels::{self, Registry};
use qmodular::parse::parse_expr;
use qmodular::{Error, QSeries, Rational};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    Syntax = 3,
    /// Unknown level, weight, generator or identity.
    Domain = 4,
    /// Precision too small for the request.
    Precision = 5,
    NotInSpan = 6,
    Pole = 7,
    /// Series operations that have no answer, such as inverting zero.
    Arithmetic = 8,
    Registry = 9,
    /// `qm_verify` ran, and the identity does not hold.
    IdentityFailed = 10,
    /// An index past the end of a series.
    OutOfRange = 11,
    Internal = 12,
}

/// Opaque handle to a truncated q-series.
pub struct QmSeries {
    inner: QSeries,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QmStatus {
    match e {
        Error::Syntax { .. } | Error::WeightMismatch(..) => QmStatus::Syntax,
        Error::UnknownLevel(_)
        | Error::UnsupportedWeight(_)
        | Error::UnknownGenerator { .. }
        | Error::UnknownIdentity(_)
        | Error::EmptySpace { .. } => QmStatus::Domain,
        Error::InvalidPrecision { .. } | Error::InsufficientPrecision { .. } => QmStatus::Precision,
        Error::NotInSpan(_) => QmStatus::NotInSpan,
        Error::PoleAtArgument(_) => QmStatus::Pole,
        Error::NotInvertible | Error::UnsupportedTwist(_) | Error::FractionalExponent(_) => QmStatus::Arithmetic,
        Error::RegistryValidation(_) => QmStatus::Registry,
    }
}

struct Fail(QmStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail(status_of(&e))
    }
}

fn fail<T>(status: QmStatus, msg: &str) -> Result<T, Fail> {
    set_error(msg);
    Err(Fail(status))
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QmStatus::Ok,
        Ok(Err(Fail(s))) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| p.downcast_ref::<&str>().copied())
                .unwrap_or("panic");
            set_error(format!("internal error: {msg}"));
            QmStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return fail(QmStatus::NullArgument, "null string argument");
    }
    match CStr::from_ptr(s).to_str() {
        Ok(s) => Ok(s),
        Err(_) => fail(QmStatus::InvalidUtf8, "string argument is not valid UTF-8"),
    }
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return fail(QmStatus::NullArgument, "null output pointer");
    }
    out.write(v);
    Ok(())
}

unsafe fn series<'a>(s: *const QmSeries) -> Result<&'a QSeries, Fail> {
    match s.as_ref() {
        Some(s) => Ok(&s.inner),
        None => fail(QmStatus::NullArgument, "null series handle"),
    }
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL").into_raw()
}

fn rational_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread; do not free.
#[no_mangle]
pub extern "C" fn qm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Expands `expr` to `O(q^prec)` and stores a new handle in `*out`.
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qm_expand(expr: *const c_char, prec: i64, out: *mut *mut QmSeries) -> QmStatus {
    guard(|| {
        let e = parse_expr(read_str(expr)?)?;
        let s = Registry::global().expand(&e, prec)?;
        write_out(out, Box::into_raw(Box::new(QmSeries { inner: s })))
    })
}

/// Releases a series handle. Null is ignored.
///
/// # Safety
/// `s` must come from [`qm_expand`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qm_series_free(s: *mut QmSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Valuation as the fraction `*num / *den`.
///
/// # Safety
/// `s` must be a live handle; `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn qm_series_valuation(s: *const QmSeries, num: *mut i64, den: *mut i64) -> QmStatus {
    guard(|| {
        let v = series(s)?.valuation();
        write_out(num, *v.numer())?;
        write_out(den, *v.denom())
    })
}

/// Precision: the series is known modulo `q^(*num / *den)`.
///
/// # Safety
/// `s` must be a live handle; `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn qm_series_precision(s: *const QmSeries, num: *mut i64, den: *mut i64) -> QmStatus {
    guard(|| {
        let p = series(s)?.precision();
        write_out(num, *p.numer())?;
        write_out(den, *p.denom())
    })
}

/// Number of stored coefficients. Coefficient `i` belongs to the exponent
/// `valuation + i / grid`, where `grid` comes from [`qm_series_grid`].
///
/// # Safety
/// `s` must be a live handle; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn qm_series_len(s: *const QmSeries, len: *mut usize) -> QmStatus {
    guard(|| write_out(len, series(s)?.relative_len()))
}

/// Denominator of the exponent grid (1 or 2).
///
/// # Safety
/// `s` must be a live handle; `grid` writable.
#[no_mangle]
pub unsafe extern "C" fn qm_series_grid(s: *const QmSeries, grid: *mut u32) -> QmStatus {
    guard(|| write_out(grid, series(s)?.den()))
}

/// Coefficient `index` as a decimal `"p"` or `"p/q"` string.
///
/// # Safety
/// `s` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qm_series_coefficient(s: *const QmSeries, index: usize, out: *mut *mut c_char) -> QmStatus {
    guard(|| {
        let s = series(s)?;
        let Some(c) = s.coefficients().get(index) else {
            return fail(QmStatus::OutOfRange, &format!("index {index} past {} coefficients", s.relative_len()));
        };
        write_out(out, to_c(rational_str(c)))
    })
}

/// Text rendering such as `1 + 240q + O(q^2)`.
///
/// # Safety
/// `s` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qm_series_to_string(s: *const QmSeries, out: *mut *mut c_char) -> QmStatus {
    guard(|| write_out(out, to_c(series(s)?.to_string())))
}

/// `dim M_weight(Gamma0(level))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_dimension(level: i64, weight: i64, out: *mut u32) -> QmStatus {
    guard(|| write_out(out, levels::dimension(level, weight)?))
}

/// Echelon basis as a JSON document. `prec <= 0` selects the dimension.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_basis_json(level: i64, weight: i64, prec: i64, out: *mut *mut c_char) -> QmStatus {
    guard(|| {
        let prec = if prec > 0 { prec } else { levels::dimension(level, weight)? as i64 };
        let b = levels::basis(level, weight, prec)?;
        write_out(out, to_c(b.to_json().to_string()))
    })
}

/// Coordinates of `expr` in the echelon basis, as a JSON array of
/// `["p","q"]` pairs. The expression is expanded to `O(q^(d+5))`.
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qm_reduce_json(
    expr: *const c_char,
    level: i64,
    weight: i64,
    out: *mut *mut c_char,
) -> QmStatus {
    guard(|| {
        let e = parse_expr(read_str(expr)?)?;
        let reg = Registry::global();
        let d = reg.dimension(level, weight)? as i64;
        let f = reg.expand(&e, d + 5)?;
        let coords = levels::reduce_with(reg, &f, level, weight)?;
        let items: Vec<String> = coords.iter().map(|c| format!("[\"{}\",\"{}\"]", c.numer(), c.denom())).collect();
        write_out(out, to_c(format!("[{}]", items.join(","))))
    })
}

/// Checks the built-in identity `name` to `O(q^prec)`; `prec <= 0` uses its
/// default. The JSON report is stored in `*report` whenever the check ran,
/// and the status is [`QmStatus::IdentityFailed`] if the sides differ.
///
/// # Safety
/// `name` must be a NUL-terminated string; `report` writable or null.
#[no_mangle]
pub unsafe extern "C" fn qm_verify(name: *const c_char, prec: i64, report: *mut *mut c_char) -> QmStatus {
    guard(|| {
        let case = identities::find(read_str(name)?)?;
        let prec = if prec > 0 { prec } else { case.default_prec };
        let r = identities::check_case(Registry::global(), case, prec)?;
        if !report.is_null() {
            report.write(to_c(r.to_json().to_string()));
        }
        if r.passed() {
            Ok(())
        } else {
            fail(QmStatus::IdentityFailed, &r.to_string())
        }
    })
}

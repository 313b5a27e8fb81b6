//! C ABI over `ggf`.
//!
//! Objects are opaque handles freed by their `_free` function. Every
//! fallible call returns a [`GgfStatus`]; on failure the message is kept
//! per thread and read with [`ggf_last_error`]. Strings returned through
//! `char **` are owned by the caller and released with [`ggf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ggf::cli::parse_file;
use ggf::families::{family_series, Family, FamilyError, FamilySpec, Mode};
use ggf::gfalg::RationalGF;
use ggf::oracle::count_series;
use ggf::series::{specialize, SpecializationMap, TruncatedSeries};
use ggf::solver::{SolveError, Solver};
use ggf::system::ConstraintSystem;
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    BudgetExhausted = 4,
    SolveError = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// A normalized constraint system.
pub struct GgfSystem {
    inner: ConstraintSystem,
}

/// A generating function as a sum of simple terms.
pub struct GgfGf {
    inner: RationalGF,
}

/// A univariate series truncated at some `q^n`.
pub struct GgfSeries {
    inner: TruncatedSeries,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (GgfStatus, String);

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> GgfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GgfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GgfStatus::Panic
        }
    }
}

fn null() -> Failure {
    (GgfStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (GgfStatus::InvalidUtf8, e.to_string()))
}

unsafe fn obj<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

fn solve_failure(e: SolveError) -> Failure {
    let status = match e {
        SolveError::BudgetExhausted(_) => GgfStatus::BudgetExhausted,
        _ => GgfStatus::SolveError,
    };
    (status, e.to_string())
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ggf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses constraint-file text (`vars:` line, then constraints).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_system_parse(
    text: *const c_char,
    out: *mut *mut GgfSystem,
) -> GgfStatus {
    guard(|| {
        let text = str_arg(text)?;
        let inner = parse_file(text).map_err(|e| (GgfStatus::ParseError, e.to_string()))?;
        put(out, GgfSystem { inner })
    })
}

/// Canonical constraint-file text of a system.
///
/// # Safety
/// `s` must come from `ggf_system_parse`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_system_render(
    s: *const GgfSystem,
    out: *mut *mut c_char,
) -> GgfStatus {
    guard(|| put_string(out, obj(s)?.inner.to_string()))
}

/// # Safety
/// `s` must come from `ggf_system_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ggf_system_free(s: *mut GgfSystem) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Solves a system. A `budget` of 0 uses the default step budget (or
/// `GGF_STEP_BUDGET` when set).
///
/// # Safety
/// `s` must be a live system handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_solve(
    s: *const GgfSystem,
    budget: u64,
    out: *mut *mut GgfGf,
) -> GgfStatus {
    guard(|| {
        let s = obj(s)?;
        let solver = if budget == 0 {
            Solver::from_env()
        } else {
            Solver::with_budget(budget)
        };
        let inner = solver.solve(&s.inner).map_err(solve_failure)?;
        put(out, GgfGf { inner })
    })
}

/// Canonical text of a generating function, one term per line.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_gf_render(f: *const GgfGf, out: *mut *mut c_char) -> GgfStatus {
    guard(|| put_string(out, obj(f)?.inner.to_string()))
}

/// Number of simple terms.
///
/// # Safety
/// `f` must be a live handle or NULL (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn ggf_gf_terms(f: *const GgfGf) -> usize {
    f.as_ref().map_or(0, |f| f.inner.len())
}

/// Expands with every variable sent to `q`, up to `q^weight`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_gf_expand(
    f: *const GgfGf,
    weight: usize,
    out: *mut *mut GgfSeries,
) -> GgfStatus {
    guard(|| {
        let f = &obj(f)?.inner;
        let inner = specialize(f, &SpecializationMap::all_q(f.vars().len()), weight)
            .map_err(|e| (GgfStatus::InvalidArgument, e.to_string()))?;
        put(out, GgfSeries { inner })
    })
}

/// # Safety
/// `f` must be a live handle and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ggf_gf_free(f: *mut GgfGf) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Counts solutions of each weight up to `weight` by enumeration.
///
/// # Safety
/// `s` must be a live system handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_count(
    s: *const GgfSystem,
    weight: usize,
    out: *mut *mut GgfSeries,
) -> GgfStatus {
    guard(|| {
        let inner = count_series(&obj(s)?.inner, weight);
        put(out, GgfSeries { inner })
    })
}

/// Series of a named family. Negative `n` or `k` means "not given";
/// `mode` may be NULL for the recurrence.
///
/// # Safety
/// `name` must be a nul-terminated string, `mode` one or NULL; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_family(
    name: *const c_char,
    n: i64,
    k: i64,
    weight: usize,
    mode: *const c_char,
    out: *mut *mut GgfSeries,
) -> GgfStatus {
    guard(|| {
        let bad = |e: FamilyError| match e {
            FamilyError::Solve(s) => solve_failure(s),
            e => (GgfStatus::InvalidArgument, e.to_string()),
        };
        let family: Family = str_arg(name)?.parse().map_err(bad)?;
        let mode: Mode = if mode.is_null() {
            Mode::Recurrence
        } else {
            str_arg(mode)?.parse().map_err(bad)?
        };
        let opt = |x: i64| usize::try_from(x).ok();
        let inner =
            family_series(&FamilySpec::new(family, opt(n), opt(k)), weight, mode).map_err(bad)?;
        put(out, GgfSeries { inner })
    })
}

/// Number of coefficients (`weight + 1`).
///
/// # Safety
/// `s` must be a live handle or NULL (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn ggf_series_len(s: *const GgfSeries) -> usize {
    s.as_ref().map_or(0, |s| s.inner.q_coeffs().len())
}

/// Coefficient of `q^i`; `GGF_STATUS_INVALID_ARGUMENT` when `i` is out of
/// range or the value does not fit in 64 bits.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_series_coeff_i64(
    s: *const GgfSeries,
    i: usize,
    out: *mut i64,
) -> GgfStatus {
    guard(|| {
        let c = obj(s)?.inner.q_coeffs().get(i).ok_or((
            GgfStatus::InvalidArgument,
            format!("index {i} out of range"),
        ))?;
        let v = c.to_i64().ok_or((
            GgfStatus::InvalidArgument,
            format!("coefficient {c} does not fit in 64 bits"),
        ))?;
        if out.is_null() {
            return Err(null());
        }
        *out = v;
        Ok(())
    })
}

/// Coefficient of `q^i` in decimal.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_series_coeff_string(
    s: *const GgfSeries,
    i: usize,
    out: *mut *mut c_char,
) -> GgfStatus {
    guard(|| {
        let c = obj(s)?.inner.q_coeffs().get(i).ok_or((
            GgfStatus::InvalidArgument,
            format!("index {i} out of range"),
        ))?;
        put_string(out, c.to_string())
    })
}

/// # Safety
/// `s` must be a live handle and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ggf_series_free(s: *mut GgfSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ggf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

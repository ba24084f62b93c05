//! C interface to the `fricke` crate.
//!
//! Polynomials cross the boundary as opaque `FrickePoly` handles. Every
//! fallible call returns a status code; on failure the message is available
//! from `fricke_last_error` until the next failing call on the same thread.

use fricke::atkin::isogenous_from_u;
use fricke::cli::{cmd_compute, JobConfig, Method, Target};
use fricke::fricke_float::FloatParams;
use fricke::fricke_series::DEFAULT_ORDER_GUARD;
use fricke::{Error, Family, TriPoly};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

pub const FRICKE_OK: i32 = 0;
/// bad argument or malformed input
pub const FRICKE_ERR_INPUT: i32 = 2;
/// numerical or rounding failure
pub const FRICKE_ERR_NUMERICAL: i32 = 3;
/// degenerate mathematical case
pub const FRICKE_ERR_DEGENERATE: i32 = 4;
pub const FRICKE_ERR_NULL: i32 = 5;
pub const FRICKE_ERR_PANIC: i32 = 6;
/// output buffer too small; the needed length is still reported
pub const FRICKE_ERR_BUFFER: i32 = 7;

pub const FRICKE_METHOD_SERIES: u32 = 0;
pub const FRICKE_METHOD_FLOAT: u32 = 1;
pub const FRICKE_METHOD_VOLCANO: u32 = 2;

/// Opaque polynomial handle.
pub struct FrickePoly {
    inner: TriPoly,
}

/// One isogenous curve; `status` is nonzero when this root was degenerate.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrickeIsogeny {
    pub kappa: u64,
    pub a_star: u64,
    pub b_star: u64,
    pub kappa1: u64,
    pub status: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> i32 {
    let code = e.exit_code();
    set_error(e.to_string());
    code
}

fn guard(f: impl FnOnce() -> Result<(), i32>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FRICKE_OK,
        Ok(Err(code)) => code,
        Err(_) => {
            set_error("internal panic".into());
            FRICKE_ERR_PANIC
        }
    }
}

fn null_error(what: &str) -> i32 {
    set_error(format!("{what} is null"));
    FRICKE_ERR_NULL
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, i32> {
    if s.is_null() {
        return Err(null_error(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(Error::Input(format!("{what} is not UTF-8"))))
}

unsafe fn poly_arg<'a>(p: *const FrickePoly) -> Result<&'a TriPoly, i32> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null_error("polynomial handle"))
}

unsafe fn emit(out: *mut *mut FrickePoly, poly: TriPoly) -> Result<(), i32> {
    if out.is_null() {
        return Err(null_error("output pointer"));
    }
    *out = Box::into_raw(Box::new(FrickePoly { inner: poly }));
    Ok(())
}

/// Message of the last failure on this thread, or NULL. Owned by the library.
#[no_mangle]
pub extern "C" fn fricke_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Compute U, V, W, A or B for prime `ell` with the given method.
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fricke_poly_compute(ell: u64, family: *const c_char, method: u32, seed: u64, out: *mut *mut FrickePoly) -> i32 {
    guard(|| {
        let fam = Family::parse(str_arg(family, "family")?).map_err(fail)?;
        let method = match method {
            FRICKE_METHOD_SERIES => Method::Series,
            FRICKE_METHOD_FLOAT => Method::Float,
            FRICKE_METHOD_VOLCANO => Method::Volcano,
            m => return Err(fail(Error::Input(format!("unknown method {m}")))),
        };
        if fam == Family::Phi || !fricke::arith::is_prime(ell) {
            return Err(fail(Error::Input(format!("need a prime l and one of U, V, W, A, B (got l = {ell})"))));
        }
        let cfg = JobConfig {
            target: Target::Fricke { ell, family: fam },
            method,
            disc: None,
            prime: None,
            classpoly: None,
            float: FloatParams::default(),
            order_guard: DEFAULT_ORDER_GUARD,
            seed,
        };
        emit(out, cmd_compute(&cfg).map_err(fail)?.poly)
    })
}

/// Parse a polynomial from the JSON file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fricke_poly_from_json(json: *const c_char, out: *mut *mut FrickePoly) -> i32 {
    guard(|| emit(out, TriPoly::from_json(str_arg(json, "json")?).map_err(fail)?))
}

/// Reduce the coefficients modulo a prime into a new handle.
///
/// # Safety
/// `poly` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fricke_poly_reduce_mod(poly: *const FrickePoly, p: u64, out: *mut *mut FrickePoly) -> i32 {
    guard(|| {
        let t = poly_arg(poly)?;
        if !fricke::arith::is_prime(p) {
            return Err(fail(Error::Input(format!("{p} is not prime"))));
        }
        emit(out, t.reduce_mod(p))
    })
}

/// # Safety
/// `poly` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fricke_poly_free(poly: *mut FrickePoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Level, or 0 for NULL.
///
/// # Safety
/// `poly` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn fricke_poly_ell(poly: *const FrickePoly) -> u64 {
    poly.as_ref().map_or(0, |h| h.inner.ell)
}

/// Number of nonzero terms, or 0 for NULL.
///
/// # Safety
/// `poly` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn fricke_poly_num_terms(poly: *const FrickePoly) -> usize {
    poly.as_ref().map_or(0, |h| h.inner.terms.len())
}

/// Modulus, or 0 for integer coefficients or NULL.
///
/// # Safety
/// `poly` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn fricke_poly_modulus(poly: *const FrickePoly) -> u64 {
    poly.as_ref().and_then(|h| h.inner.modulus).unwrap_or(0)
}

/// Relative height in the (X, A, B) form.
///
/// # Safety
/// `poly` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fricke_poly_relative_height(poly: *const FrickePoly, out: *mut f64) -> i32 {
    guard(|| {
        let t = poly_arg(poly)?;
        if out.is_null() {
            return Err(null_error("output pointer"));
        }
        *out = t.to_ab_form().and_then(|a| a.relative_height()).map_err(fail)?;
        Ok(())
    })
}

unsafe fn emit_string(s: String, out: *mut *mut c_char) -> Result<(), i32> {
    if out.is_null() {
        return Err(null_error("output pointer"));
    }
    *out = CString::new(s).map_err(|_| fail(Error::Input("interior NUL".into())))?.into_raw();
    Ok(())
}

/// JSON text of the polynomial; release with `fricke_string_free`.
///
/// # Safety
/// `poly` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fricke_poly_to_json(poly: *const FrickePoly, out: *mut *mut c_char) -> i32 {
    guard(|| emit_string(poly_arg(poly)?.to_json(), out))
}

/// Human-readable polynomial in X, E4, E6, D; release with `fricke_string_free`.
///
/// # Safety
/// `poly` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fricke_poly_to_text(poly: *const FrickePoly, out: *mut *mut c_char) -> i32 {
    guard(|| emit_string(poly_arg(poly)?.to_string(), out))
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fricke_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Isogenous curves of `y^2 = x^3 + a x + b` over F_p from the roots of `u`.
/// Writes at most `cap` rows and always sets `*count` to the number of roots;
/// returns `FRICKE_ERR_BUFFER` when `cap` is too small.
///
/// # Safety
/// `u` must be a live handle; `rows` must hold `cap` entries (may be NULL when
/// `cap` is 0); `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fricke_isogenous(
    u: *const FrickePoly,
    p: u64,
    a: u64,
    b: u64,
    rows: *mut FrickeIsogeny,
    cap: usize,
    count: *mut usize,
) -> i32 {
    guard(|| {
        let t = poly_arg(u)?;
        if count.is_null() {
            return Err(null_error("count pointer"));
        }
        if !fricke::arith::is_prime(p) {
            return Err(fail(Error::Input(format!("{p} is not prime"))));
        }
        let found = isogenous_from_u(t.ell, a, b, t, p).map_err(fail)?;
        *count = found.len();
        if found.len() > cap {
            set_error(format!("{} roots but room for {cap}", found.len()));
            return Err(FRICKE_ERR_BUFFER);
        }
        if found.is_empty() {
            return Ok(());
        }
        if rows.is_null() {
            return Err(null_error("rows"));
        }
        for (i, (k, r)) in found.into_iter().enumerate() {
            *rows.add(i) = match r {
                Ok(c) => FrickeIsogeny { kappa: c.kappa, a_star: c.a_star, b_star: c.b_star, kappa1: c.kappa1, status: FRICKE_OK },
                Err(e) => FrickeIsogeny { kappa: k, status: e.exit_code(), ..Default::default() },
            };
        }
        Ok(())
    })
}

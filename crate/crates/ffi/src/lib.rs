//! C interface to `solidangle`.
//!
//! Polytopes and engines are opaque handles created and destroyed through
//! this API. Every call returns a [`SaStatus`]; on failure the message is
//! available from [`sa_last_error`] on the same thread. Strings returned
//! through out-pointers are owned by the caller and released with
//! [`sa_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use solidangle::angle::{AngleEngine, Policy};
use solidangle::ehrhart::{count, hstar};
use solidangle::io::{polytope_from_json, polytope_to_json};
use solidangle::polytope::Polytope;
use solidangle::solidpoly::{fit_solid_polynomial, SolidAngleSum};
use solidangle::valuation::{builtin, g_numerator};
use solidangle::Error;

/// Status codes. `SA_OK` is zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaStatus {
    SaOk = 0,
    SaNullPointer = 1,
    SaInvalidUtf8 = 2,
    SaParse = 3,
    SaValidation = 4,
    SaShape = 5,
    SaSize = 6,
    SaPrecondition = 7,
    SaAccuracy = 8,
    SaNumeric = 9,
    SaIo = 10,
    SaBufferTooSmall = 11,
    SaPanic = 12,
}

/// Angle engine policy.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaPolicy {
    SaPolicyExact = 0,
    SaPolicyAomoto = 1,
    SaPolicyMonteCarlo = 2,
}

/// Built-in valuation.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaValuation {
    SaValuationSolid = 0,
    SaValuationIndicator = 1,
}

/// Opaque polytope handle.
pub struct SaPolytope {
    inner: Polytope,
}

/// Opaque angle engine handle.
pub struct SaEngine {
    inner: AngleEngine,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> SaStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => SaStatus::SaParse,
        Error::Validation(_) => SaStatus::SaValidation,
        Error::Shape(_) | Error::Dimension { .. } | Error::Lineality(_) | Error::Degenerate => SaStatus::SaShape,
        Error::Size(_) => SaStatus::SaSize,
        Error::Precondition(_) | Error::NotContained => SaStatus::SaPrecondition,
        Error::Accuracy(_) => SaStatus::SaAccuracy,
        Error::Io(_) => SaStatus::SaIo,
        _ => SaStatus::SaNumeric,
    }
}

struct Failure(SaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SaStatus::SaOk
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside solidangle");
            SaStatus::SaPanic
        }
    }
}

fn null() -> Failure {
    Failure(SaStatus::SaNullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(SaStatus::SaInvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

unsafe fn write_slice<T: Copy>(dst: *mut T, len: usize, src: &[T]) -> Result<(), Failure> {
    if src.len() > len {
        return Err(Failure(
            SaStatus::SaBufferTooSmall,
            format!("buffer holds {len} entries, {} needed", src.len()),
        ));
    }
    if dst.is_null() {
        return Err(null());
    }
    ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn sa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"vertices": [["0", "1/2"], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_handle` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_polytope_from_json(json: *const c_char, out_handle: *mut *mut SaPolytope) -> SaStatus {
    guard(|| {
        let slot = out(out_handle)?;
        let p = polytope_from_json(str_arg(json)?)?;
        *slot = Box::into_raw(Box::new(SaPolytope { inner: p }));
        Ok(())
    })
}

/// Canonical JSON of the polytope's vertices.
///
/// # Safety
/// `p` must be a live handle and `json` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_polytope_to_json(p: *const SaPolytope, json: *mut *mut c_char) -> SaStatus {
    guard(|| {
        let slot = out(json)?;
        *slot = into_c_string(polytope_to_json(&handle(p)?.inner));
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle and `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_polytope_dim(p: *const SaPolytope, dim: *mut usize) -> SaStatus {
    guard(|| {
        *out(dim)? = handle(p)?.inner.dim();
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sa_polytope_free(p: *mut SaPolytope) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Creates an angle engine. `mc_samples` and `seed` only matter for the
/// Monte Carlo policy.
///
/// # Safety
/// `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sa_engine_new(
    policy: SaPolicy,
    mc_samples: u64,
    seed: u64,
    out_handle: *mut *mut SaEngine,
) -> SaStatus {
    guard(|| {
        let slot = out(out_handle)?;
        if mc_samples == 0 {
            return Err(Failure(SaStatus::SaValidation, "mc_samples must be positive".into()));
        }
        let policy = match policy {
            SaPolicy::SaPolicyExact => Policy::Exact,
            SaPolicy::SaPolicyAomoto => Policy::Aomoto,
            SaPolicy::SaPolicyMonteCarlo => Policy::MonteCarlo,
        };
        let inner = AngleEngine {
            policy,
            mc_samples,
            seed,
            ..AngleEngine::default()
        };
        *slot = Box::into_raw(Box::new(SaEngine { inner }));
        Ok(())
    })
}

/// # Safety
/// `e` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sa_engine_free(e: *mut SaEngine) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Number of lattice points in `tP`.
///
/// # Safety
/// `p` must be a live handle and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_ehrhart_count(p: *const SaPolytope, t: i64, result: *mut u64) -> SaStatus {
    guard(|| {
        *out(result)? = count(&handle(p)?.inner, t)?;
        Ok(())
    })
}

/// `A_P(t)` with its absolute error bound.
///
/// # Safety
/// Handles must be live and the out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sa_solid_angle_sum(
    p: *const SaPolytope,
    engine: *const SaEngine,
    t: i64,
    value: *mut f64,
    abs_error: *mut f64,
) -> SaStatus {
    guard(|| {
        let (v, e) = (out(value)?, out(abs_error)?);
        let m = solidangle::solidpoly::a_eval(&handle(p)?.inner, t, &handle(engine)?.inner)?;
        *v = m.value;
        *e = m.error;
        Ok(())
    })
}

/// Sum of the solid angles at the vertices.
///
/// # Safety
/// Handles must be live and the out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sa_vertex_sum(
    p: *const SaPolytope,
    engine: *const SaEngine,
    value: *mut f64,
    abs_error: *mut f64,
) -> SaStatus {
    guard(|| {
        let (v, e) = (out(value)?, out(abs_error)?);
        let m = SolidAngleSum::new(&handle(p)?.inner, &handle(engine)?.inner)?.vertex_sum();
        *v = m.value;
        *e = m.error;
        Ok(())
    })
}

/// Coefficients `c_0..c_d` of the solid-angle polynomial of a lattice
/// polytope and their error bounds; both buffers need `d + 1` entries.
///
/// # Safety
/// Handles must be live and the buffers hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sa_solid_polynomial(
    p: *const SaPolytope,
    engine: *const SaEngine,
    coefficients: *mut f64,
    abs_errors: *mut f64,
    len: usize,
) -> SaStatus {
    guard(|| {
        let p = &handle(p)?.inner;
        let sum = SolidAngleSum::new(p, &handle(engine)?.inner)?;
        let fit = fit_solid_polynomial(&sum, true)?;
        let c: Vec<_> = (0..=p.dim()).map(|k| fit.coefficient(k)).collect();
        write_slice(coefficients, len, &c.iter().map(|m| m.value).collect::<Vec<_>>())?;
        write_slice(abs_errors, len, &c.iter().map(|m| m.error).collect::<Vec<_>>())
    })
}

/// h*-vector of a lattice polytope; `out_values` needs `d + 1` entries.
///
/// # Safety
/// `p` must be a live handle and the buffer hold `len` integers.
#[no_mangle]
pub unsafe extern "C" fn sa_hstar(p: *const SaPolytope, out_values: *mut i64, len: usize) -> SaStatus {
    guard(|| {
        let h = hstar(&handle(p)?.inner)?;
        let ints = h
            .integers()
            .ok_or_else(|| Failure(SaStatus::SaNumeric, "non-integral h*-vector".into()))?
            .iter()
            .map(|x| i64::try_from(x).map_err(|_| Failure(SaStatus::SaSize, "entry overflows i64".into())))
            .collect::<Result<Vec<_>, _>>()?;
        write_slice(out_values, len, &ints)
    })
}

/// Numerator `a_0..a_d` of `Σ_t N_P(t) z^t` for a built-in valuation, and
/// whether it passed its nonnegativity checks.
///
/// # Safety
/// Handles must be live, the buffers hold `len` doubles and `ok` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_numerator(
    p: *const SaPolytope,
    engine: *const SaEngine,
    valuation: SaValuation,
    values: *mut f64,
    abs_errors: *mut f64,
    len: usize,
    ok: *mut bool,
) -> SaStatus {
    guard(|| {
        let flag = out(ok)?;
        let name = match valuation {
            SaValuation::SaValuationSolid => "solid",
            SaValuation::SaValuationIndicator => "indicator",
        };
        let v = builtin(name, handle(engine)?.inner.clone())?;
        let r = g_numerator(&handle(p)?.inner, v.as_ref())?;
        write_slice(values, len, &r.numerator.values())?;
        write_slice(abs_errors, len, &r.numerator.entries.iter().map(|m| m.error).collect::<Vec<_>>())?;
        *flag = r.ok();
        Ok(())
    })
}

/// Runs the command line with `argv[0..argc]` (without the program name)
/// and returns its exit code and standard output.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sa_cli_run(
    argc: usize,
    argv: *const *const c_char,
    exit_code: *mut i32,
    stdout_text: *mut *mut c_char,
) -> SaStatus {
    guard(|| {
        let (code, text) = (out(exit_code)?, out(stdout_text)?);
        let mut args = vec!["solidangle".to_string()];
        if argc > 0 {
            if argv.is_null() {
                return Err(null());
            }
            for i in 0..argc {
                args.push(str_arg(*argv.add(i))?.to_string());
            }
        }
        let o = solidangle::cli::run(args);
        *code = o.code;
        *text = into_c_string(if o.stdout.is_empty() { o.stderr } else { o.stdout });
        Ok(())
    })
}

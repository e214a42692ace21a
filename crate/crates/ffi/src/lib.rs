//! C ABI for `qdomain`.
//!
//! Conventions:
//! - Every fallible function returns a [`QdStatus`]; `QD_OK` is success.
//! - On failure the message is available from [`qd_last_error`] on the
//!   same thread until the next call into the library.
//! - Handles are opaque and released with their `_free` function. Strings
//!   returned through `char **` are released with [`qd_string_free`].
//! - Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qdomain::domain::way_below;
use qdomain::order::FiniteQOrder;
use qdomain::scott::{classify_injectivity, verify_certificate, InjectivityVerdict};
use qdomain::tnorm::verify_laws;
use qdomain::{Error, TNorm};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    OutOfRange = 5,
    Unsupported = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque t-norm handle.
pub struct QdTNorm(TNorm);

/// Opaque finite [0,1]-order handle.
pub struct QdOrder(FiniteQOrder);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> QdStatus {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Io(_) => QdStatus::Parse,
        Error::OutOfRange { .. } => QdStatus::OutOfRange,
        Error::ExactUnsupported | Error::Unsupported(_) | Error::TooLarge { .. } => QdStatus::Unsupported,
        _ => QdStatus::InvalidInput,
    }
}

struct Failure(QdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QdStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QdStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QdStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QdStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(QdStatus::InvalidInput, "string contains a nul byte".into()))
}

fn unit(v: f64, what: &str) -> Result<f64, Failure> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Failure(QdStatus::OutOfRange, format!("{what} = {v} is outside [0,1]")))
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn qd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// T-norms

/// Parses a t-norm from its JSON description.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_tnorm_from_json(json: *const c_char, out: *mut *mut QdTNorm) -> QdStatus {
    guard(|| {
        let t = TNorm::from_json(read_str(json, "json")?)?;
        write(out, Box::into_raw(Box::new(QdTNorm(t))), "out")
    })
}

/// One of `godel`, `lukasiewicz`, `product`.
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_tnorm_builtin(name: *const c_char, out: *mut *mut QdTNorm) -> QdStatus {
    guard(|| {
        let t = match read_str(name, "name")? {
            "godel" => TNorm::godel(),
            "lukasiewicz" => TNorm::lukasiewicz(),
            "product" => TNorm::product(),
            other => return Err(Failure(QdStatus::InvalidInput, format!("unknown t-norm `{other}`"))),
        };
        write(out, Box::into_raw(Box::new(QdTNorm(t))), "out")
    })
}

/// # Safety
/// `t` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qd_tnorm_free(t: *mut QdTNorm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_tnorm_conj(t: *const QdTNorm, x: f64, y: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        let t = borrow(t, "t")?;
        let v = t.0.conj(unit(x, "x")?, unit(y, "y")?);
        write(out, v, "out")
    })
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_tnorm_residuum(t: *const QdTNorm, x: f64, y: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        let t = borrow(t, "t")?;
        let v = t.0.residuum(unit(x, "x")?, unit(y, "y")?);
        write(out, v, "out")
    })
}

/// Writes 1 to `out` when the t-norm satisfies condition (S), else 0.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_tnorm_condition_s(t: *const QdTNorm, out: *mut c_int) -> QdStatus {
    guard(|| {
        let t = borrow(t, "t")?;
        write(out, t.0.satisfies_condition_s() as c_int, "out")
    })
}

/// Largest law violation on the grid of pitch `1/grid_n`. A nonzero `exact`
/// selects rational arithmetic, which fails with `Unsupported` on product
/// pieces.
///
/// # Safety
/// `t` must be a live handle and `max_violation` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_tnorm_check_laws(
    t: *const QdTNorm,
    grid_n: usize,
    exact: c_int,
    max_violation: *mut f64,
) -> QdStatus {
    guard(|| {
        let t = borrow(t, "t")?;
        if grid_n == 0 {
            return Err(Failure(QdStatus::InvalidInput, "grid_n must be positive".into()));
        }
        let r = verify_laws(&t.0, grid_n, exact != 0)?;
        write(max_violation, r.max_violation, "max_violation")
    })
}

/// Classifies injectivity and returns the verdict with its certificate as
/// JSON.
///
/// # Safety
/// `t` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_classify_injectivity(
    t: *const QdTNorm,
    grid_n: usize,
    eps: f64,
    out_json: *mut *mut c_char,
) -> QdStatus {
    guard(|| {
        let t = borrow(t, "t")?;
        let v = classify_injectivity(&t.0, grid_n, eps)?;
        let s = serde_json::to_string(&v).map_err(Error::from)?;
        write(out_json, to_c_string(s)?, "out_json")
    })
}

/// Replays a certificate produced by [`qd_classify_injectivity`]. Writes 1 to
/// `valid` when every recorded quantity is reproduced.
///
/// # Safety
/// `json` must be a valid C string and `valid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_verify_certificate(json: *const c_char, eps: f64, valid: *mut c_int) -> QdStatus {
    guard(|| {
        let v: InjectivityVerdict = serde_json::from_str(read_str(json, "json")?).map_err(Error::from)?;
        let check = verify_certificate(&v, eps)?;
        write(valid, check.valid as c_int, "valid")
    })
}

// ---------------------------------------------------------------------------
// Finite orders

/// Parses and validates a finite order file.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_order_from_json(json: *const c_char, out: *mut *mut QdOrder) -> QdStatus {
    guard(|| {
        let x = FiniteQOrder::from_json(read_str(json, "json")?)?;
        write(out, Box::into_raw(Box::new(QdOrder(x))), "out")
    })
}

/// # Safety
/// `x` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qd_order_free(x: *mut QdOrder) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_order_len(x: *const QdOrder, out: *mut usize) -> QdStatus {
    guard(|| {
        let x = borrow(x, "x")?;
        write(out, x.0.len(), "out")
    })
}

/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_order_hom(x: *const QdOrder, a: usize, b: usize, out: *mut f64) -> QdStatus {
    guard(|| {
        let x = borrow(x, "x")?;
        let n = x.0.len();
        if a >= n || b >= n {
            return Err(Failure(QdStatus::OutOfRange, format!("index out of range for {n} elements")));
        }
        write(out, x.0.hom(a, b), "out")
    })
}

/// Fills `buf` with the way-below table in row-major order. `buf_len` must
/// be at least `n * n`.
///
/// # Safety
/// `x` must be a live handle and `buf` must point to `buf_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qd_order_way_below(x: *const QdOrder, buf: *mut f64, buf_len: usize) -> QdStatus {
    guard(|| {
        let x = borrow(x, "x")?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let n = x.0.len();
        if buf_len < n * n {
            return Err(Failure(QdStatus::BufferTooSmall, format!("need {} entries, got {buf_len}", n * n)));
        }
        let w = way_below(&x.0)?;
        let out = std::slice::from_raw_parts_mut(buf, n * n);
        for a in 0..n {
            for b in 0..n {
                out[a * n + b] = w.get(a, b);
            }
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Command line

/// Runs a command line (without the program name) and returns its report
/// and exit code as the `qdomain` binary would.
///
/// # Safety
/// `argv` must point to `argc` valid C strings; `out_report` and
/// `exit_code` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qd_run(
    argv: *const *const c_char,
    argc: usize,
    out_report: *mut *mut c_char,
    exit_code: *mut c_int,
) -> QdStatus {
    guard(|| {
        if argv.is_null() && argc > 0 {
            return Err(null("argv"));
        }
        let mut args = vec!["qdomain".to_string()];
        for i in 0..argc {
            args.push(read_str(*argv.add(i), "argument")?.to_string());
        }
        let run = qdomain::cli::run(args);
        let text = if run.output.is_empty() { run.diagnostics } else { run.output };
        let report = to_c_string(text)?;
        if exit_code.is_null() {
            qd_string_free(report);
            return Err(null("exit_code"));
        }
        exit_code.write(run.code);
        write(out_report, report, "out_report")
    })
}

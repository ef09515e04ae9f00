//! C ABI for the core library: opaque weight handles, status codes, a
//! thread-local last-error message, and caller-buffer string returns.
//!
//! Conventions:
//! * every fallible call returns a [`Dw1Status`]; `DW1_STATUS_OK` is zero,
//! * pointers returned by `dw1_weight_*` constructors are owned by the
//!   caller and released with `dw1_weight_free`,
//! * string-producing calls take a caller-supplied buffer and report the
//!   required length (including the NUL terminator), so a two-call pattern
//!   — query with a null buffer, then fill — always works,
//! * on any non-OK status, `dw1_last_error` yields a human-readable
//!   message for the current thread.

use dw1::selection::{admits_continuous_selection, preset, verify_chebyshev_certificate, PresetId};
use dw1::norms::lorentz_norm;
use dw1::projection::project_exact;
use dw1::weight::{Continuation, Weight};
use dw1::enclosure::rational_to_f64;
use dw1::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes for every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dw1Status {
    Ok = 0,
    /// Null pointer, malformed input, or an invalid configuration.
    InvalidArgument = 1,
    /// The requested tolerance could not be certified.
    ToleranceUnreachable = 2,
    /// The quantity is provably infinite.
    Divergent = 3,
    /// Degenerate instance (zero direction, empty support, …).
    Degenerate = 4,
    /// The provided buffer is too small; the required size was reported.
    BufferTooSmall = 5,
    /// An internal invariant failed.
    Internal = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|c| *c != '\0').collect();
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> Dw1Status {
    match err {
        Error::ToleranceUnreachable(_) => Dw1Status::ToleranceUnreachable,
        Error::DivergentNorm(_) | Error::InfiniteVariation(_) => Dw1Status::Divergent,
        Error::DegenerateSubspace(_) => Dw1Status::Degenerate,
        _ => Dw1Status::InvalidArgument,
    }
}

fn fail(err: Error) -> Dw1Status {
    let code = status_of(&err);
    set_error(&err.to_string());
    code
}

fn guarded<F: FnOnce() -> Dw1Status>(f: F) -> Dw1Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            Dw1Status::Internal
        }
    }
}

/// Copies the current thread's last error message into `buf` and returns
/// the full length of the message including the NUL terminator. With a
/// null or too-small buffer nothing is copied; call again with the
/// returned capacity.
#[no_mangle]
pub extern "C" fn dw1_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap >= bytes.len() {
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
            }
        }
        bytes.len()
    })
}

/// Static version string of the underlying library, NUL-terminated.
#[no_mangle]
pub extern "C" fn dw1_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Opaque weight handle.
pub struct Dw1Weight {
    inner: Weight,
}

/// The harmonic weight `w(n) = 1/n`. Never fails.
#[no_mangle]
pub extern "C" fn dw1_weight_harmonic() -> *mut Dw1Weight {
    Box::into_raw(Box::new(Dw1Weight {
        inner: Weight::harmonic(),
    }))
}

/// Power weight `w(n) = n^{-alpha}`, `0 < alpha ≤ 1`.
#[no_mangle]
pub extern "C" fn dw1_weight_power(alpha: f64, out: *mut *mut Dw1Weight) -> Dw1Status {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Dw1Status::InvalidArgument;
        }
        match Weight::power(alpha) {
            Ok(w) => {
                unsafe { *out = Box::into_raw(Box::new(Dw1Weight { inner: w })) };
                Dw1Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Finite rational weight table `nums[i]/dens[i]` continued harmonically
/// past the table (scaled to match the last entry).
#[no_mangle]
pub extern "C" fn dw1_weight_table(
    nums: *const i64,
    dens: *const i64,
    len: usize,
    out: *mut *mut Dw1Weight,
) -> Dw1Status {
    guarded(|| {
        if nums.is_null() || dens.is_null() || out.is_null() || len == 0 {
            set_error("null or empty weight table");
            return Dw1Status::InvalidArgument;
        }
        let nums = unsafe { std::slice::from_raw_parts(nums, len) };
        let dens = unsafe { std::slice::from_raw_parts(dens, len) };
        if dens.iter().any(|d| *d == 0) {
            set_error("zero denominator in weight table");
            return Dw1Status::InvalidArgument;
        }
        let values: Vec<BigRational> = nums
            .iter()
            .zip(dens)
            .map(|(n, d)| BigRational::new(BigInt::from(*n), BigInt::from(*d)))
            .collect();
        match Weight::table(values, Continuation::Harmonic) {
            Ok(w) => {
                unsafe { *out = Box::into_raw(Box::new(Dw1Weight { inner: w })) };
                Dw1Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a weight handle. Null is a no-op.
#[no_mangle]
pub extern "C" fn dw1_weight_free(w: *mut Dw1Weight) {
    if !w.is_null() {
        drop(unsafe { Box::from_raw(w) });
    }
}

/// Certified norm of the finite sequence `values` in d(w,1): writes an
/// enclosure center and half-width with `*error ≤ tol`.
#[no_mangle]
pub extern "C" fn dw1_lorentz_norm(
    w: *const Dw1Weight,
    values: *const f64,
    len: usize,
    tol: f64,
    value: *mut f64,
    error: *mut f64,
) -> Dw1Status {
    guarded(|| {
        if w.is_null() || (values.is_null() && len > 0) || value.is_null() || error.is_null() {
            set_error("null pointer argument");
            return Dw1Status::InvalidArgument;
        }
        let slice = if len == 0 {
            &[]
        } else {
            unsafe { std::slice::from_raw_parts(values, len) }
        };
        if slice.iter().any(|v| !v.is_finite()) {
            set_error("sequence entries must be finite");
            return Dw1Status::InvalidArgument;
        }
        let rationals: Vec<BigRational> = match slice
            .iter()
            .map(|v| BigRational::from_float(*v))
            .collect::<Option<Vec<_>>>()
        {
            Some(r) => r,
            None => {
                set_error("sequence entries must be finite");
                return Dw1Status::InvalidArgument;
            }
        };
        let seq = dw1::Seq::from_rationals(rationals);
        let weight = unsafe { &(*w).inner };
        match lorentz_norm(&seq, weight, tol) {
            Ok(enc) => {
                unsafe {
                    *value = enc.value;
                    *error = enc.error;
                }
                Dw1Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Closed interval of best-approximation coefficients and the distance,
/// reported as double approximations of exact rationals.
#[repr(C)]
pub struct Dw1Interval {
    pub lo: f64,
    pub hi: f64,
    pub dist: f64,
    /// Nonzero when the minimizer is unique.
    pub singleton: u8,
}

/// Exact interval of minimizers of `‖x − c·y‖` over `c`, for finite
/// rational `x` (`x_num[i]/x_den[i]`) and `y`, with an exact weight.
#[no_mangle]
pub extern "C" fn dw1_projection_interval_exact(
    w: *const Dw1Weight,
    x_num: *const i64,
    x_den: *const i64,
    x_len: usize,
    y_num: *const i64,
    y_den: *const i64,
    y_len: usize,
    out: *mut Dw1Interval,
) -> Dw1Status {
    guarded(|| {
        if w.is_null() || out.is_null() {
            set_error("null pointer argument");
            return Dw1Status::InvalidArgument;
        }
        let read = |nums: *const i64, dens: *const i64, len: usize| -> Option<Vec<BigRational>> {
            if len == 0 {
                return Some(Vec::new());
            }
            if nums.is_null() || dens.is_null() {
                return None;
            }
            let ns = unsafe { std::slice::from_raw_parts(nums, len) };
            let ds = unsafe { std::slice::from_raw_parts(dens, len) };
            if ds.iter().any(|d| *d == 0) {
                return None;
            }
            Some(
                ns.iter()
                    .zip(ds)
                    .map(|(n, d)| BigRational::new(BigInt::from(*n), BigInt::from(*d)))
                    .collect(),
            )
        };
        let (x, y) = match (read(x_num, x_den, x_len), read(y_num, y_den, y_len)) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                set_error("null vector or zero denominator");
                return Dw1Status::InvalidArgument;
            }
        };
        let weight = unsafe { &(*w).inner };
        match project_exact(&x, &y, weight) {
            Ok(p) => {
                unsafe {
                    (*out).lo = rational_to_f64(&p.lo);
                    (*out).hi = rational_to_f64(&p.hi);
                    (*out).dist = rational_to_f64(&p.dist);
                    (*out).singleton = u8::from(p.is_singleton());
                }
                Dw1Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

fn write_string(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Dw1Status {
    let bytes = s.as_bytes();
    let total = bytes.len() + 1;
    if !needed.is_null() {
        unsafe { *needed = total };
    }
    if buf.is_null() || cap < total {
        set_error("buffer too small");
        return Dw1Status::BufferTooSmall;
    }
    unsafe {
        std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
        *buf.add(bytes.len()) = 0;
    }
    Dw1Status::Ok
}

/// Runs the certificate and continuous-selection checks for a named preset
/// (`example1` … `example4`) and writes a JSON report. `needed` receives
/// the required buffer size including the NUL terminator.
#[no_mangle]
pub extern "C" fn dw1_selection_check_preset(
    name: *const c_char,
    tol: f64,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> Dw1Status {
    guarded(|| {
        if name.is_null() {
            set_error("null preset name");
            return Dw1Status::InvalidArgument;
        }
        let name = match unsafe { CStr::from_ptr(name) }.to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("preset name is not valid UTF-8");
                return Dw1Status::InvalidArgument;
            }
        };
        let id = match PresetId::parse(name) {
            Ok(id) => id,
            Err(e) => return fail(e),
        };
        let run = || -> dw1::Result<serde_json::Value> {
            let p = preset(id)?;
            let selection = admits_continuous_selection(&p.y, p.certificate.as_ref())?;
            let certificate = match &p.certificate {
                Some(cert) => verify_chebyshev_certificate(&p.y, &p.weight, cert, tol)?.to_json(),
                None => serde_json::Value::Null,
            };
            Ok(serde_json::json!({
                "preset": id.name(),
                "summary": p.summary,
                "certificate": certificate,
                "selection": selection.to_json(),
            }))
        };
        match run() {
            Ok(json) => write_string(&json.to_string(), buf, cap, needed),
            Err(e) => fail(e),
        }
    })
}

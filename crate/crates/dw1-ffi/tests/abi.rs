//! Drives the C entry points directly through the rlib: handle lifecycle,
//! enclosure outputs, the exact projection interval, the two-call buffer
//! pattern, and error-message retrieval.

use dw1_ffi::*;
use std::ffi::{c_char, CStr};

fn last_error() -> String {
    let needed = dw1_last_error(std::ptr::null_mut(), 0);
    let mut buf = vec![0 as c_char; needed];
    dw1_last_error(buf.as_mut_ptr(), buf.len());
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn version_is_a_nonempty_c_string() {
    let v = unsafe { CStr::from_ptr(dw1_version()) };
    assert!(!v.to_bytes().is_empty());
}

#[test]
fn weight_lifecycle_and_norm_enclosure() {
    let w = dw1_weight_harmonic();
    assert!(!w.is_null());

    // ‖(3,1)‖ = 3·1 + 1·(1/2) = 7/2 under the harmonic weight.
    let values = [3.0f64, 1.0];
    let (mut value, mut error) = (0.0f64, 0.0f64);
    let status = dw1_lorentz_norm(w, values.as_ptr(), values.len(), 1e-9, &mut value, &mut error);
    assert_eq!(status, Dw1Status::Ok);
    assert!((value - 3.5).abs() <= error + 1e-12, "value {value} error {error}");
    assert!(error <= 1e-9);

    dw1_weight_free(w);
    dw1_weight_free(std::ptr::null_mut()); // null is a no-op
}

#[test]
fn power_weight_rejects_bad_exponent() {
    let mut out: *mut Dw1Weight = std::ptr::null_mut();
    assert_eq!(dw1_weight_power(0.5, &mut out), Dw1Status::Ok);
    assert!(!out.is_null());
    dw1_weight_free(out);

    let mut bad: *mut Dw1Weight = std::ptr::null_mut();
    assert_eq!(dw1_weight_power(1.5, &mut bad), Dw1Status::InvalidArgument);
    assert!(bad.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn table_weight_rejects_zero_denominator() {
    let nums = [1i64, 1];
    let dens = [1i64, 0];
    let mut out: *mut Dw1Weight = std::ptr::null_mut();
    let status = dw1_weight_table(nums.as_ptr(), dens.as_ptr(), 2, &mut out);
    assert_eq!(status, Dw1Status::InvalidArgument);
    assert!(last_error().contains("denominator"));
}

#[test]
fn exact_projection_interval_matches_the_known_instance() {
    // x = (3,1), y = (1,−2), harmonic weight: minimizers [−1/2, 2/3], distance 7/2.
    let w = dw1_weight_harmonic();
    let x_num = [3i64, 1];
    let x_den = [1i64, 1];
    let y_num = [1i64, -2];
    let y_den = [1i64, 1];
    let mut out = Dw1Interval {
        lo: 0.0,
        hi: 0.0,
        dist: 0.0,
        singleton: 1,
    };
    let status = dw1_projection_interval_exact(
        w,
        x_num.as_ptr(),
        x_den.as_ptr(),
        2,
        y_num.as_ptr(),
        y_den.as_ptr(),
        2,
        &mut out,
    );
    assert_eq!(status, Dw1Status::Ok);
    assert!((out.lo - (-0.5)).abs() < 1e-15);
    assert!((out.hi - 2.0 / 3.0).abs() < 1e-15);
    assert!((out.dist - 3.5).abs() < 1e-15);
    assert_eq!(out.singleton, 0);
    dw1_weight_free(w);
}

#[test]
fn projection_rejects_zero_direction() {
    let w = dw1_weight_harmonic();
    let x_num = [1i64];
    let x_den = [1i64];
    let y_num = [0i64];
    let y_den = [1i64];
    let mut out = Dw1Interval {
        lo: 0.0,
        hi: 0.0,
        dist: 0.0,
        singleton: 0,
    };
    let status = dw1_projection_interval_exact(
        w,
        x_num.as_ptr(),
        x_den.as_ptr(),
        1,
        y_num.as_ptr(),
        y_den.as_ptr(),
        1,
        &mut out,
    );
    assert_eq!(status, Dw1Status::Degenerate);
    dw1_weight_free(w);
}

#[test]
fn preset_report_uses_the_two_call_buffer_pattern() {
    let name = b"example2\0";
    let mut needed = 0usize;

    // First call with a null buffer: reports the required size.
    let status = dw1_selection_check_preset(
        name.as_ptr() as *const c_char,
        1e-8,
        std::ptr::null_mut(),
        0,
        &mut needed,
    );
    assert_eq!(status, Dw1Status::BufferTooSmall);
    assert!(needed > 2);

    // Second call with exactly the reported capacity succeeds.
    let mut buf = vec![0 as c_char; needed];
    let status = dw1_selection_check_preset(
        name.as_ptr() as *const c_char,
        1e-8,
        buf.as_mut_ptr(),
        buf.len(),
        &mut needed,
    );
    assert_eq!(status, Dw1Status::Ok);
    let json = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned();
    let parsed: serde_json::Value = serde_json::from_str(&json).expect("valid JSON report");
    assert_eq!(parsed["preset"], "example2");
    assert!(parsed["certificate"].is_object());
    assert!(parsed["selection"]["verdict"].is_string() || parsed["selection"]["verdict"].is_object());
}

#[test]
fn unknown_preset_sets_a_readable_error() {
    let name = b"example9\0";
    let mut needed = 0usize;
    let status = dw1_selection_check_preset(
        name.as_ptr() as *const c_char,
        1e-8,
        std::ptr::null_mut(),
        0,
        &mut needed,
    );
    assert_eq!(status, Dw1Status::InvalidArgument);
    assert!(!last_error().is_empty());
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/dw1.h");
    let text = std::fs::read_to_string(&header).expect("generated header");
    for symbol in [
        "DW1_H",
        "dw1_version",
        "dw1_last_error",
        "dw1_weight_harmonic",
        "dw1_weight_power",
        "dw1_weight_table",
        "dw1_weight_free",
        "dw1_lorentz_norm",
        "dw1_projection_interval_exact",
        "dw1_selection_check_preset",
        "Dw1Interval",
        "Dw1Status",
    ] {
        assert!(text.contains(symbol), "header is missing {symbol}");
    }
}

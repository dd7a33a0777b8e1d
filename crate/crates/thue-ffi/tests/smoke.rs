//! Drives the C entry points the way a foreign caller would: strings in,
//! JSON out, explicit frees, status codes checked.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use thue_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { thue_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(thue_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn stender_spec_json() -> CString {
    let p = thue_core::stender::StenderParams::new(2, 1).unwrap();
    let spec = thue_core::fieldspec::stender_spec(&p, 192).unwrap();
    CString::new(spec.to_json()).unwrap()
}

#[test]
fn context_lifecycle_and_field_check() {
    let spec = stender_spec_json();
    let mut ctx: *mut ThueContext = ptr::null_mut();
    let st = unsafe { thue_context_new(spec.as_ptr(), 0, &mut ctx) };
    assert_eq!(st, ThueStatus::Ok);
    assert!(!ctx.is_null());

    let mut out: *mut c_char = ptr::null_mut();
    let st = unsafe { thue_field_check(ctx, &mut out) };
    assert_eq!(st, ThueStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(doc["degree"], 4);
    assert_eq!(doc["signature"], serde_json::json!([0, 2]));
    assert_eq!(doc["units"]["rank"], 1);

    unsafe { thue_context_free(ctx) };
    unsafe { thue_context_free(ptr::null_mut()) };
}

#[test]
fn bounds_and_family_solving_through_the_c_surface() {
    let spec = stender_spec_json();
    let mut ctx: *mut ThueContext = ptr::null_mut();
    assert_eq!(
        unsafe { thue_context_new(spec.as_ptr(), 128, &mut ctx) },
        ThueStatus::Ok
    );

    let m = CString::new("200").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { thue_bounds(ctx, m.as_ptr(), &mut out) },
        ThueStatus::Ok
    );
    let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert!(report["kappa_final"].as_f64().unwrap() > 0.0);
    assert_eq!(report["degree"], 4);

    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { thue_solve_family(ctx, m.as_ptr(), 20, 2, &mut out) },
        ThueStatus::Ok
    );
    let fam: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(fam["completeness"], "capped");
    assert_eq!(fam["skipped"], serde_json::json!([[0]]));
    let with_solutions: Vec<_> = fam["members"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|mem| !mem["solutions"].as_array().unwrap().is_empty())
        .collect();
    assert_eq!(with_solutions.len(), 2);

    // m = 1 under the same context: empty but still well-formed
    let m1 = CString::new("1").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { thue_solve_family(ctx, m1.as_ptr(), 20, 2, &mut out) },
        ThueStatus::Ok
    );
    let fam: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert!(fam["members"]
        .as_array()
        .unwrap()
        .iter()
        .all(|mem| mem["solutions"].as_array().unwrap().is_empty()));

    unsafe { thue_context_free(ctx) };
}

#[test]
fn fixed_form_and_quartic_family_helpers() {
    let form = CString::new(r#"{"coefficients": [1, 0, 0, 0, 1]}"#).unwrap();
    let m = CString::new("16").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    let st = unsafe { thue_solve_fixed(form.as_ptr(), m.as_ptr(), 0, &mut out) };
    assert_eq!(st, ThueStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(doc["count"], 4);

    let mut out: *mut c_char = ptr::null_mut();
    let st = unsafe { thue_stender_coeffs(2, 1, 2, &mut out) };
    assert_eq!(st, ThueStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(doc["a"], "2192");
    assert_eq!(doc["b"], "2297986");

    let m = CString::new("200").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    let st = unsafe { thue_stender_solve(2, 1, m.as_ptr(), 50, 6, 0, &mut out) };
    assert_eq!(st, ThueStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(doc["triples"].as_array().unwrap().len(), 8);
    assert_eq!(doc["skipped_members"], serde_json::json!([-1]));
}

#[test]
fn error_paths_set_status_and_message() {
    // null spec
    let mut ctx: *mut ThueContext = ptr::null_mut();
    assert_eq!(
        unsafe { thue_context_new(ptr::null(), 0, &mut ctx) },
        ThueStatus::NullArgument
    );
    assert!(last_error().contains("spec_json"));

    // malformed spec
    let bad = CString::new("{\"min_poly\": [0]}").unwrap();
    assert_eq!(
        unsafe { thue_context_new(bad.as_ptr(), 0, &mut ctx) },
        ThueStatus::Validation
    );
    assert!(last_error().contains("min_poly"));

    // real-root form is refused with a message
    let form = CString::new(r#"{"coefficients": [1, 0, -2]}"#).unwrap();
    let m = CString::new("5").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    let st = unsafe { thue_solve_fixed(form.as_ptr(), m.as_ptr(), 0, &mut out) };
    assert_eq!(st, ThueStatus::Validation);
    assert!(!last_error().is_empty());

    // a context without units refuses bounds but still board-checks
    let field_only = CString::new(r#"{"min_poly": [1, 0, 0, 0, 68]}"#).unwrap();
    assert_eq!(
        unsafe { thue_context_new(field_only.as_ptr(), 0, &mut ctx) },
        ThueStatus::Ok
    );
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { thue_bounds(ctx, m.as_ptr(), &mut out) },
        ThueStatus::Validation
    );
    assert!(last_error().contains("unit block"));
    unsafe { thue_context_free(ctx) };
}

#[test]
fn header_is_fresh_and_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::path::Path::new(dir).join("include/thue.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "thue_context_new",
        "thue_context_free",
        "thue_field_check",
        "thue_bounds",
        "thue_solve_family",
        "thue_solve_fixed",
        "thue_stender_solve",
        "thue_stender_coeffs",
        "thue_string_free",
        "thue_last_error_message",
    ] {
        assert!(text.contains(name), "header lost {name}");
    }
    let ok = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status()
        .map(|s| s.success())
        .unwrap_or(true); // no cc on this machine: skip quietly
    assert!(ok, "header does not compile as C");
}

//! C interface: opaque handles, integer status codes, JSON strings for
//! everything structured.
//!
//! Conventions:
//! - Every function returns a `ThueStatus`; anything but `Ok` leaves a
//!   message retrievable with `thue_last_error_message` (thread-local,
//!   valid until the next failing call on the same thread).
//! - Strings handed out through `char**` out-parameters are owned by the
//!   caller and must be released with `thue_string_free`.
//! - A `ThueContext` is immutable after construction and may be shared
//!   across threads for concurrent reads; create and free it on one.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};

use thue_core::algnum::NumberField;
use thue_core::cli;
use thue_core::diophantine::{self, MatveevProvider, SolveCaps};
use thue_core::embeddings::{compute_embeddings, EmbeddingSet};
use thue_core::error::Error;
use thue_core::fieldspec::{self, FieldSpecFile};
use thue_core::stender::{self, StenderParams};
use thue_core::units::{self, UnitBasis, UnitData};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThueStatus {
    Ok = 0,
    /// Invalid input: spec, form, parameter, or a degenerate configuration.
    Validation = 2,
    /// Certification failed at the requested precision; retry with more bits.
    Precision = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// An internal invariant failed; the library state is still sound.
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> =
        RefCell::new(CString::new("").expect("empty CString"));
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).expect("sanitized CString");
    });
}

fn status_of(err: &Error) -> ThueStatus {
    match err {
        Error::PrecisionExhausted { .. } => ThueStatus::Precision,
        _ => ThueStatus::Validation,
    }
}

fn fail(err: &Error) -> ThueStatus {
    set_error(&format!("{err}"));
    status_of(err)
}

/// Field plus everything derived from its spec file, built once.
pub struct ThueContext {
    k: NumberField,
    emb: EmbeddingSet,
    basis: Option<UnitBasis>,
    data: Option<UnitData>,
    bits: u32,
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, ThueStatus> {
    if p.is_null() {
        set_error(&format!("{what} is null"));
        return Err(ThueStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        ThueStatus::InvalidUtf8
    })
}

fn write_json(doc: &Value, out: *mut *mut c_char) -> ThueStatus {
    let text = serde_json::to_string(doc).expect("serializable");
    let c = CString::new(text).expect("JSON has no NUL");
    unsafe { *out = c.into_raw() };
    ThueStatus::Ok
}

fn guarded(body: impl FnOnce() -> ThueStatus) -> ThueStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            ThueStatus::Panic
        }
    }
}

fn parse_m(s: &str) -> Result<BigInt, ThueStatus> {
    BigInt::from_str(s.trim()).map_err(|_| {
        set_error("m must be a decimal integer");
        ThueStatus::Validation
    })
}

/// Builds a context from a field spec JSON document. `bits` is the
/// working precision (64..=4096; pass 0 for the default 128).
///
/// # Safety
/// `spec_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thue_context_new(
    spec_json: *const c_char,
    bits: u32,
    out: *mut *mut ThueContext,
) -> ThueStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out is null");
            return ThueStatus::NullArgument;
        }
        let text = match str_arg(spec_json, "spec_json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let bits = if bits == 0 { 128 } else { bits };
        if !(64..=4096).contains(&bits) {
            set_error("bits must lie in 64..=4096 (or be 0 for the default)");
            return ThueStatus::Validation;
        }
        let built = (|| -> Result<ThueContext, Error> {
            let fs = FieldSpecFile::parse(text)?;
            let k = fs.field()?;
            let emb = compute_embeddings(&k, bits)?;
            let basis = fs.unit_basis(&k)?;
            let data = match &basis {
                Some(b) => {
                    let d = units::validate_units(&k, &emb, b)?;
                    if let Some(claim) = fs.regulator_claim()? {
                        units::check_regulator_claim(&d, claim)?;
                    }
                    Some(d)
                }
                None => None,
            };
            Ok(ThueContext {
                k,
                emb,
                basis,
                data,
                bits,
            })
        })();
        match built {
            Ok(ctx) => {
                *out = Box::into_raw(Box::new(ctx));
                ThueStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a context. Null is ignored.
///
/// # Safety
/// `ctx` must be null or a pointer from `thue_context_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn thue_context_free(ctx: *mut ThueContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

unsafe fn ctx_arg<'a>(ctx: *const ThueContext) -> Result<&'a ThueContext, ThueStatus> {
    if ctx.is_null() {
        set_error("ctx is null");
        return Err(ThueStatus::NullArgument);
    }
    Ok(&*ctx)
}

fn units_of(ctx: &ThueContext) -> Result<(&UnitBasis, &UnitData), Error> {
    match (&ctx.basis, &ctx.data) {
        (Some(b), Some(d)) => Ok((b, d)),
        _ => Err(Error::validation("spec file has no unit block")),
    }
}

/// Degree, signature, irreducibility and unit summary as JSON.
///
/// # Safety
/// `ctx` from `thue_context_new`; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thue_field_check(
    ctx: *const ThueContext,
    out_json: *mut *mut c_char,
) -> ThueStatus {
    guarded(|| {
        let ctx = match ctx_arg(ctx) {
            Ok(c) => c,
            Err(s) => return s,
        };
        if out_json.is_null() {
            set_error("out_json is null");
            return ThueStatus::NullArgument;
        }
        let mut doc = json!({
            "degree": ctx.k.degree(),
            "signature": [ctx.emb.r1(), ctx.emb.r2()],
            "bits": ctx.bits,
        });
        if let (Some(basis), Some(data)) = (&ctx.basis, &ctx.data) {
            let (lo, hi) = data.regulator.to_f64_bounds();
            doc["units"] = json!({
                "rank": data.rank,
                "torsion_order": basis.torsion_order,
                "regulator": [lo, hi],
            });
        }
        write_json(&doc, out_json)
    })
}

/// The composed bound chain for `|F_a(x, y)| <= m`; `m_decimal` is a
/// decimal integer string.
///
/// # Safety
/// `ctx` from `thue_context_new`; strings NUL-terminated; `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn thue_bounds(
    ctx: *const ThueContext,
    m_decimal: *const c_char,
    out_json: *mut *mut c_char,
) -> ThueStatus {
    guarded(|| {
        let ctx = match ctx_arg(ctx) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let m = match str_arg(m_decimal, "m_decimal").and_then(parse_m) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if out_json.is_null() {
            set_error("out_json is null");
            return ThueStatus::NullArgument;
        }
        let run = (|| -> Result<Value, Error> {
            let (basis, data) = units_of(ctx)?;
            let alpha = ctx.k.one();
            let report = diophantine::compose_bounds(
                &ctx.k,
                &ctx.emb,
                basis,
                data,
                &alpha,
                &m,
                &MatveevProvider,
            )?;
            Ok(cli::report_value(&report))
        })();
        match run {
            Ok(doc) => write_json(&doc, out_json),
            Err(e) => fail(&e),
        }
    })
}

/// Capped family enumeration; same JSON shape as the CLI `solve-family`.
///
/// # Safety
/// `ctx` from `thue_context_new`; strings NUL-terminated; `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn thue_solve_family(
    ctx: *const ThueContext,
    m_decimal: *const c_char,
    cap_xy: i64,
    cap_a: i64,
    out_json: *mut *mut c_char,
) -> ThueStatus {
    guarded(|| {
        let ctx = match ctx_arg(ctx) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let m = match str_arg(m_decimal, "m_decimal").and_then(parse_m) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if out_json.is_null() {
            set_error("out_json is null");
            return ThueStatus::NullArgument;
        }
        let run = (|| -> Result<Value, Error> {
            let (basis, data) = units_of(ctx)?;
            let alpha = ctx.k.one();
            let fam = diophantine::solve_family(
                &ctx.k,
                &ctx.emb,
                basis,
                data,
                &alpha,
                &m,
                &SolveCaps {
                    max_exponent: cap_a,
                    max_xy: cap_xy,
                },
                &MatveevProvider,
            )?;
            let members: Vec<Value> = fam
                .members
                .iter()
                .map(|mem| {
                    json!({
                        "exponents": mem.exponents,
                        "solutions": cli::pairs_value(&mem.solutions),
                    })
                })
                .collect();
            Ok(json!({
                "members": members,
                "skipped": fam.skipped,
                "completeness": cli::completeness_str(fam.completeness),
                "report": cli::report_value(&fam.report),
            }))
        })();
        match run {
            Ok(doc) => write_json(&doc, out_json),
            Err(e) => fail(&e),
        }
    })
}

/// Solves one totally imaginary form given as `{"coefficients": [...]}`.
///
/// # Safety
/// Strings NUL-terminated; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thue_solve_fixed(
    form_json: *const c_char,
    m_decimal: *const c_char,
    bits: u32,
    out_json: *mut *mut c_char,
) -> ThueStatus {
    guarded(|| {
        let text = match str_arg(form_json, "form_json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let m = match str_arg(m_decimal, "m_decimal").and_then(parse_m) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if out_json.is_null() {
            set_error("out_json is null");
            return ThueStatus::NullArgument;
        }
        let bits = if bits == 0 { 128 } else { bits };
        let run = (|| -> Result<Value, Error> {
            let form = fieldspec::parse_form(text)?;
            let sols = diophantine::solve_fixed_totally_imaginary(&form, &m, false, bits)?;
            Ok(json!({
                "count": sols.len(),
                "solutions": cli::pairs_value(&sols),
            }))
        })();
        match run {
            Ok(doc) => write_json(&doc, out_json),
            Err(e) => fail(&e),
        }
    })
}

/// Solves the quartic family `|F_n(x, y)| <= m` for `|n| <= cap_n`,
/// `|x|, |y| <= cap_xy`.
///
/// # Safety
/// Strings NUL-terminated; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thue_stender_solve(
    d: u32,
    c: i64,
    m_decimal: *const c_char,
    cap_xy: i64,
    cap_n: i64,
    bits: u32,
    out_json: *mut *mut c_char,
) -> ThueStatus {
    guarded(|| {
        let m = match str_arg(m_decimal, "m_decimal").and_then(parse_m) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if out_json.is_null() {
            set_error("out_json is null");
            return ThueStatus::NullArgument;
        }
        let bits = if bits == 0 { 128 } else { bits };
        let run = (|| -> Result<Value, Error> {
            let p = StenderParams::new(d, c)?;
            let sols = stender::solve_family(&p, &m, cap_xy, cap_n, bits)?;
            let triples: Vec<Value> = sols
                .triples
                .iter()
                .map(|t| {
                    json!({
                        "n": t.n,
                        "x": t.x.to_string(),
                        "y": t.y.to_string(),
                    })
                })
                .collect();
            Ok(json!({
                "triples": triples,
                "skipped_members": sols.skipped_members,
                "completeness": cli::completeness_str(sols.completeness),
            }))
        })();
        match run {
            Ok(doc) => write_json(&doc, out_json),
            Err(e) => fail(&e),
        }
    })
}

/// Coefficients (a, b, c) of quartic family member n, exact decimal
/// strings.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thue_stender_coeffs(
    d: u32,
    c: i64,
    n: i64,
    out_json: *mut *mut c_char,
) -> ThueStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("out_json is null");
            return ThueStatus::NullArgument;
        }
        let run = (|| -> Result<Value, Error> {
            let p = StenderParams::new(d, c)?;
            let co = stender::coeffs_by_recurrence(&p, n, n)
                .pop()
                .expect("one member");
            Ok(json!({
                "n": co.n,
                "a": co.a.to_string(),
                "b": co.b.to_string(),
                "c": co.c.to_string(),
            }))
        })();
        match run {
            Ok(doc) => write_json(&doc, out_json),
            Err(e) => fail(&e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer this library handed out, freed once.
#[no_mangle]
pub unsafe extern "C" fn thue_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread; empty if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn thue_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

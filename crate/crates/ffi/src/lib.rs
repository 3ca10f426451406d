//! C ABI for the jetlie engine: opaque handles, integer status codes, and
//! UTF-8 strings owned by the library. The generated header lives in
//! `include/jetlie.h`.
//!
//! Conventions:
//! - Every fallible call returns a `JetlieStatus`; on failure the engine
//!   stores a message retrievable with `jetlie_last_error`.
//! - Strings returned through out-parameters are heap-allocated and must be
//!   released with `jetlie_string_free`.
//! - Handles are not thread-safe; use one engine per thread.

use jetlie::catalog::{Catalog, ParamBinding};
use jetlie::parse::{parse_expr, print_expr};
use jetlie::runner::{self, RunConfig};
use jetlie::scalar::Scalar;
use jetlie::{Error, Expr, ZeroPolicy};
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

/// Status codes mirroring the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum JetlieStatus {
    Ok = 0,
    VerifyFailed = 1,
    Usage = 2,
    ParseError = 3,
    EngineError = 4,
}

pub struct JetlieEngine {
    catalog: Catalog,
    last_error: Option<CString>,
}

pub struct JetlieExpr {
    inner: Expr,
}

fn status_of(err: &Error) -> JetlieStatus {
    match err {
        Error::Parse { .. } => JetlieStatus::ParseError,
        Error::UnknownEntry(_) | Error::Constraint(_) => JetlieStatus::Usage,
        _ => JetlieStatus::EngineError,
    }
}

impl JetlieEngine {
    fn set_error(&mut self, msg: String) {
        self.last_error = CString::new(msg).ok();
    }
}

unsafe fn engine_mut<'a>(engine: *mut JetlieEngine) -> Option<&'a mut JetlieEngine> {
    engine.as_mut()
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn leak_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Version of the underlying engine crate.
#[no_mangle]
pub extern "C" fn jetlie_version() -> *const c_char {
    concat!("jetlie ", env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates an engine with the embedded catalog loaded. Returns null only if
/// the embedded data fails to parse, which would be a packaging defect.
#[no_mangle]
pub extern "C" fn jetlie_engine_new() -> *mut JetlieEngine {
    match Catalog::load() {
        Ok(catalog) => Box::into_raw(Box::new(JetlieEngine { catalog, last_error: None })),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `engine` must come from `jetlie_engine_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jetlie_engine_free(engine: *mut JetlieEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Message describing the most recent failure on this engine, or null.
/// The pointer stays valid until the next failing call.
///
/// # Safety
/// `engine` must be a live engine handle.
#[no_mangle]
pub unsafe extern "C" fn jetlie_last_error(engine: *const JetlieEngine) -> *const c_char {
    engine
        .as_ref()
        .and_then(|e| e.last_error.as_ref())
        .map(|s| s.as_ptr())
        .unwrap_or(ptr::null())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must have been returned through an out-parameter of this library.
#[no_mangle]
pub unsafe extern "C" fn jetlie_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an expression in the engine grammar into a new handle.
///
/// # Safety
/// `engine` must be live; `text` must be a NUL-terminated UTF-8 string;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jetlie_expr_parse(
    engine: *mut JetlieEngine,
    text: *const c_char,
    out: *mut *mut JetlieExpr,
) -> JetlieStatus {
    let Some(eng) = engine_mut(engine) else {
        return JetlieStatus::Usage;
    };
    let (Some(text), false) = (cstr(text), out.is_null()) else {
        eng.set_error("null or non-UTF-8 argument".into());
        return JetlieStatus::Usage;
    };
    match parse_expr(text) {
        Ok(expr) => {
            *out = Box::into_raw(Box::new(JetlieExpr { inner: expr }));
            JetlieStatus::Ok
        }
        Err(e) => {
            let code = status_of(&e);
            eng.set_error(e.to_string());
            code
        }
    }
}

/// # Safety
/// `expr` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jetlie_expr_free(expr: *mut JetlieExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Canonical text form of an expression.
///
/// # Safety
/// All handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jetlie_expr_print(
    engine: *mut JetlieEngine,
    expr: *const JetlieExpr,
    out: *mut *mut c_char,
) -> JetlieStatus {
    let Some(eng) = engine_mut(engine) else {
        return JetlieStatus::Usage;
    };
    let (Some(expr), false) = (expr.as_ref(), out.is_null()) else {
        eng.set_error("null argument".into());
        return JetlieStatus::Usage;
    };
    *out = leak_string(print_expr(&expr.inner));
    JetlieStatus::Ok
}

/// Partial derivative with respect to a variable named in the engine grammar
/// (`x`, `y`, `y'`, `y^(k)`, or a parameter name).
///
/// # Safety
/// All handles must be live; `var` must be NUL-terminated UTF-8; `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jetlie_expr_diff(
    engine: *mut JetlieEngine,
    expr: *const JetlieExpr,
    var: *const c_char,
    out: *mut *mut JetlieExpr,
) -> JetlieStatus {
    let Some(eng) = engine_mut(engine) else {
        return JetlieStatus::Usage;
    };
    let (Some(expr), Some(var), false) = (expr.as_ref(), cstr(var), out.is_null()) else {
        eng.set_error("null or non-UTF-8 argument".into());
        return JetlieStatus::Usage;
    };
    let sym = match parse_expr(var).map(|e| e.symbols().into_iter().next()) {
        Ok(Some(sym)) => sym,
        _ => {
            eng.set_error(format!("`{var}` does not name a variable"));
            return JetlieStatus::Usage;
        }
    };
    *out = Box::into_raw(Box::new(JetlieExpr { inner: expr.inner.diff(&sym) }));
    JetlieStatus::Ok
}

/// Randomized zero test at the given seed; writes 1 into `out` when the
/// expression vanishes identically under the default policy.
///
/// # Safety
/// All handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jetlie_expr_is_zero(
    engine: *mut JetlieEngine,
    expr: *const JetlieExpr,
    seed: u64,
    out: *mut i32,
) -> JetlieStatus {
    let Some(eng) = engine_mut(engine) else {
        return JetlieStatus::Usage;
    };
    let (Some(expr), false) = (expr.as_ref(), out.is_null()) else {
        eng.set_error("null argument".into());
        return JetlieStatus::Usage;
    };
    match jetlie::is_zero(&expr.inner, &ZeroPolicy::with_seed(seed)) {
        Ok(v) => {
            *out = v as i32;
            JetlieStatus::Ok
        }
        Err(e) => {
            eng.set_error(e.to_string());
            JetlieStatus::EngineError
        }
    }
}

/// Runs the full verification pipeline for one catalog entry and returns the
/// JSON report lines. `params` is an optional comma-separated list of
/// `name=p/q` bindings (may be null). Returns `VerifyFailed` when a check
/// fails; the JSON is still written in that case.
///
/// # Safety
/// `engine` must be live; `label` NUL-terminated UTF-8; `params` null or
/// NUL-terminated UTF-8; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jetlie_check_entry(
    engine: *mut JetlieEngine,
    label: *const c_char,
    params: *const c_char,
    seed: u64,
    out_json: *mut *mut c_char,
) -> JetlieStatus {
    let Some(eng) = engine_mut(engine) else {
        return JetlieStatus::Usage;
    };
    let (Some(label), false) = (cstr(label), out_json.is_null()) else {
        eng.set_error("null or non-UTF-8 argument".into());
        return JetlieStatus::Usage;
    };
    let mut bindings: BTreeMap<String, ParamBinding> = BTreeMap::new();
    if !params.is_null() {
        let Some(spec) = cstr(params) else {
            eng.set_error("params must be UTF-8".into());
            return JetlieStatus::Usage;
        };
        for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
            let Some((name, value)) = item.split_once('=') else {
                eng.set_error(format!("bad parameter binding `{item}`"));
                return JetlieStatus::Usage;
            };
            let binding = if value.trim() == "sym" {
                ParamBinding::Symbolic
            } else {
                match jetlie::expr::zero::parse_rational(value) {
                    Ok(r) => ParamBinding::Value(Scalar::from_rational(r)),
                    Err(e) => {
                        eng.set_error(e.to_string());
                        return JetlieStatus::Usage;
                    }
                }
            };
            bindings.insert(name.trim().to_string(), binding);
        }
    }
    let cfg = RunConfig { seed, params: bindings, ..RunConfig::default() };
    match runner::check_entry(&eng.catalog, label, &cfg) {
        Ok(reports) => {
            let passed = runner::all_passed(&reports);
            let mut text = String::new();
            for r in &reports {
                text.push_str(&r.to_json());
                text.push('\n');
            }
            *out_json = leak_string(text);
            if passed {
                JetlieStatus::Ok
            } else {
                JetlieStatus::VerifyFailed
            }
        }
        Err(e) => {
            let code = status_of(&e);
            eng.set_error(e.to_string());
            code
        }
    }
}

/// Number of catalog entries (rows plus variants).
///
/// # Safety
/// `engine` must be a live engine handle.
#[no_mangle]
pub unsafe extern "C" fn jetlie_catalog_len(engine: *const JetlieEngine) -> usize {
    engine.as_ref().map(|e| e.catalog.entries.len()).unwrap_or(0)
}

/// The label of the idx-th catalog entry, or null when out of range.
///
/// # Safety
/// `engine` must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jetlie_catalog_label(
    engine: *const JetlieEngine,
    idx: usize,
    out: *mut *mut c_char,
) -> JetlieStatus {
    let Some(eng) = engine.as_ref() else {
        return JetlieStatus::Usage;
    };
    if out.is_null() {
        return JetlieStatus::Usage;
    }
    match eng.catalog.entries.get(idx) {
        Some(spec) => {
            *out = leak_string(spec.label.clone());
            JetlieStatus::Ok
        }
        None => JetlieStatus::Usage,
    }
}

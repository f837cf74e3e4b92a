//! C ABI over the verification engine.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Every fallible call returns a
//! [`DqStatus`]; on failure `dq_last_error` describes the cause on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use dqred::error::Error;
use dqred::report::{emit_report, Format, Report};
use dqred::scene::{load_scene, Scene};
use dqred::suites::{run_suites, Suite};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DqStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed or invalid scene, unknown suite or format.
    Config = 3,
    /// The computation itself reported an error.
    Compute = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

/// A validated scene.
pub struct DqScene {
    inner: Scene,
}

/// A finished verification report.
pub struct DqReport {
    inner: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DqStatus {
    match e {
        Error::Config(_)
        | Error::Antisymmetry(..)
        | Error::Jacobi(..)
        | Error::PoissonMatrix(..)
        | Error::UnknownCoordinate(_)
        | Error::UnsupportedWeight(_) => DqStatus::Config,
        _ => DqStatus::Compute,
    }
}

fn guard(f: impl FnOnce() -> Result<(), DqStatus>) -> DqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DqStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            DqStatus::Panic
        }
    }
}

fn fail(e: Error) -> DqStatus {
    set_error(&e.to_string());
    status_of(&e)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, DqStatus> {
    if p.is_null() {
        set_error("null argument");
        return Err(DqStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        DqStatus::InvalidUtf8
    })
}

fn out_ptr<T>(out: *mut *mut T) -> Result<(), DqStatus> {
    if out.is_null() {
        set_error("null output pointer");
        Err(DqStatus::NullArgument)
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread; empty if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Loads and validates a scene file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dq_scene_load(path: *const c_char, out: *mut *mut DqScene) -> DqStatus {
    guard(|| {
        out_ptr(out)?;
        let p = text(path)?;
        let s = load_scene(Path::new(p)).map_err(fail)?;
        *out = Box::into_raw(Box::new(DqScene { inner: s }));
        Ok(())
    })
}

/// Validates a scene given as JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dq_scene_from_json(json: *const c_char, out: *mut *mut DqScene) -> DqStatus {
    guard(|| {
        out_ptr(out)?;
        let s = Scene::from_json(text(json)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(DqScene { inner: s }));
        Ok(())
    })
}

/// Truncation order of the scene, or -1 for a null handle.
///
/// # Safety
/// `scene` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dq_scene_order(scene: *const DqScene) -> i64 {
    match scene.as_ref() {
        Some(s) => s.inner.model.order() as i64,
        None => -1,
    }
}

/// # Safety
/// `scene` must be null or a handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn dq_scene_free(scene: *mut DqScene) {
    if !scene.is_null() {
        drop(Box::from_raw(scene));
    }
}

/// Runs a suite (`star`, `koszul`, …, or `all`) on the scene.
///
/// # Safety
/// `scene` must be a live handle, `suite` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dq_run_suite(scene: *const DqScene, suite: *const c_char, out: *mut *mut DqReport) -> DqStatus {
    guard(|| {
        out_ptr(out)?;
        let sc = scene.as_ref().ok_or_else(|| {
            set_error("null scene");
            DqStatus::NullArgument
        })?;
        let suites = Suite::parse(text(suite)?).map_err(fail)?;
        let r = run_suites(&sc.inner, &suites, false);
        *out = Box::into_raw(Box::new(DqReport { inner: r }));
        Ok(())
    })
}

/// Status counts of a report.
///
/// # Safety
/// `report` must be a live handle; the count pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn dq_report_counts(
    report: *const DqReport,
    pass: *mut usize,
    fail: *mut usize,
    skipped: *mut usize,
) -> DqStatus {
    let Some(r) = report.as_ref() else {
        set_error("null report");
        return DqStatus::NullArgument;
    };
    let c = r.inner.counts();
    for (p, v) in [(pass, c.pass), (fail, c.fail), (skipped, c.skipped)] {
        if !p.is_null() {
            *p = v;
        }
    }
    DqStatus::Ok
}

/// Renders a report as `json` or `text`. Free the string with `dq_string_free`.
///
/// # Safety
/// `report` must be a live handle, `format` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dq_report_render(report: *const DqReport, format: *const c_char, out: *mut *mut c_char) -> DqStatus {
    guard(|| {
        out_ptr(out)?;
        let r = report.as_ref().ok_or_else(|| {
            set_error("null report");
            DqStatus::NullArgument
        })?;
        let f = Format::parse(text(format)?).map_err(fail)?;
        let s = CString::new(emit_report(&r.inner, f)).map_err(|_| {
            set_error("report contains NUL");
            DqStatus::Compute
        })?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn dq_report_free(report: *mut DqReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, released once.
#[no_mangle]
pub unsafe extern "C" fn dq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

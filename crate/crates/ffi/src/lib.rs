//! C ABI over the scenario runner and the weight filtration.
//!
//! Every function returns a `PH_*` status code and writes results through
//! out-pointers. Handles are opaque and owned by the caller once returned;
//! release them with the matching `*_free`. After a nonzero code,
//! [`ph_last_error`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use parahiggs::linalg::rational::int;
use parahiggs::linalg::ExactMatrix;
use parahiggs::nilpotent::{weight_filtration, NilpotentEndo};
use parahiggs::scenario::{generate_fixture, run_scenario, Kind, Report, Scenario};
use parahiggs::Error;

pub const PH_OK: i32 = 0;
pub const PH_ERR_NULL: i32 = 1;
pub const PH_ERR_UTF8: i32 = 2;
pub const PH_ERR_PARSE: i32 = 3;
pub const PH_ERR_VALIDATION: i32 = 4;
pub const PH_ERR_COMPUTATION: i32 = 5;
pub const PH_ERR_BUFFER: i32 = 6;
pub const PH_ERR_PANIC: i32 = 7;

/// A parsed and validated scenario.
pub struct PhScenario(Scenario);

/// The report of one scenario run.
pub struct PhReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => PH_ERR_PARSE,
        Error::Validation { .. } | Error::SizeOutOfBounds { .. } | Error::InvalidWindow(_) => PH_ERR_VALIDATION,
        _ => PH_ERR_COMPUTATION,
    }
}

fn guard(f: impl FnOnce() -> Result<(), i32>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PH_OK,
        Ok(Err(code)) => code,
        Err(_) => {
            set_error("internal panic");
            PH_ERR_PANIC
        }
    }
}

fn fail(e: Error) -> i32 {
    let code = code_of(&e);
    set_error(e.to_string());
    code
}

fn null(what: &str) -> i32 {
    set_error(format!("{what} is null"));
    PH_ERR_NULL
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, i32> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not UTF-8"));
        PH_ERR_UTF8
    })
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// Message for the last nonzero code on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ph_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and validates a scenario from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_scenario_parse(json: *const c_char, out: *mut *mut PhScenario) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let s = Scenario::parse(text).map_err(fail)?;
        s.validate().map_err(fail)?;
        put(out, PhScenario(s));
        Ok(())
    })
}

/// Seeded scenario of the given kind, as `parahiggs generate` writes it.
///
/// # Safety
/// `kind` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_scenario_generate(
    kind: *const c_char,
    seed: u64,
    size: usize,
    out: *mut *mut PhScenario,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind: Kind = read_str(kind, "kind")?.parse().map_err(fail)?;
        put(out, PhScenario(generate_fixture(kind, seed, size).map_err(fail)?));
        Ok(())
    })
}

/// Overrides the truncation window. The scenario is left unchanged when the
/// new window is rejected.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ph_scenario_set_window(scenario: *mut PhScenario, d1: i32, d2: i32) -> i32 {
    guard(|| {
        let Some(s) = scenario.as_mut() else { return Err(null("scenario")) };
        let mut next = s.0.clone();
        next.window = Some([d1, d2]);
        next.validate().map_err(fail)?;
        s.0 = next;
        Ok(())
    })
}

/// Overrides the seed.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ph_scenario_set_seed(scenario: *mut PhScenario, seed: u64) -> i32 {
    guard(|| {
        let Some(s) = scenario.as_mut() else { return Err(null("scenario")) };
        s.0.seed = Some(seed);
        Ok(())
    })
}

/// The scenario as JSON, owned by the caller; free with [`ph_string_free`].
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_scenario_to_json(scenario: *const PhScenario, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let Some(s) = scenario.as_ref() else { return Err(null("scenario")) };
        if out.is_null() {
            return Err(null("out"));
        }
        *out = owned_string(s.0.to_json());
        Ok(())
    })
}

/// # Safety
/// `scenario` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ph_scenario_free(scenario: *mut PhScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Runs a scenario. Failing checks are not errors: inspect the report status.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_run(scenario: *const PhScenario, out: *mut *mut PhReport) -> i32 {
    guard(|| {
        let Some(s) = scenario.as_ref() else { return Err(null("scenario")) };
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, PhReport(run_scenario(&s.0)));
        Ok(())
    })
}

/// The report status as the CLI exit code: 0 pass, 1 fail, 2 hypothesis
/// failed.
///
/// # Safety
/// `report` must be a live handle and `status` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_report_status(report: *const PhReport, status: *mut i32) -> i32 {
    guard(|| {
        let Some(r) = report.as_ref() else { return Err(null("report")) };
        if status.is_null() {
            return Err(null("status"));
        }
        *status = r.0.status.exit_code();
        Ok(())
    })
}

/// Number of checks and how many of them passed.
///
/// # Safety
/// `report` must be a live handle; `total` and `passed` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ph_report_checks(report: *const PhReport, total: *mut usize, passed: *mut usize) -> i32 {
    guard(|| {
        let Some(r) = report.as_ref() else { return Err(null("report")) };
        if total.is_null() || passed.is_null() {
            return Err(null("total or passed"));
        }
        *total = r.0.checks.len();
        *passed = r.0.checks.iter().filter(|c| c.status == parahiggs::scenario::Status::Pass).count();
        Ok(())
    })
}

/// The report as JSON, or as text when `text` is set, owned by the caller; free with
/// [`ph_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_report_render(report: *const PhReport, text: bool, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let Some(r) = report.as_ref() else { return Err(null("report")) };
        if out.is_null() {
            return Err(null("out"));
        }
        *out = owned_string(if text { r.0.to_text() } else { r.0.to_json() });
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ph_report_free(report: *mut PhReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ph_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Dimensions of `Gr_l W(N)` for `l = -(n-1) ..= n-1` of an integer
/// nilpotent `n × n` matrix given row-major. `dims` receives `2n - 1`
/// entries; for `n = 0` nothing is written.
///
/// # Safety
/// `entries` must point to `n * n` values and `dims` to `dims_len` writable
/// slots.
#[no_mangle]
pub unsafe extern "C" fn ph_weight_graded_dims(
    n: usize,
    entries: *const i64,
    dims: *mut usize,
    dims_len: usize,
) -> i32 {
    guard(|| {
        if n == 0 {
            return Ok(());
        }
        if entries.is_null() || dims.is_null() {
            return Err(null("entries or dims"));
        }
        let len = 2 * n - 1;
        if dims_len < len {
            set_error(format!("dims needs {len} slots, got {dims_len}"));
            return Err(PH_ERR_BUFFER);
        }
        let values = std::slice::from_raw_parts(entries, n * n);
        let rows = values.chunks(n).map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        let endo = NilpotentEndo::new(ExactMatrix::from_rows(rows)).map_err(fail)?;
        let w = weight_filtration(&endo);
        let out = std::slice::from_raw_parts_mut(dims, len);
        let top = n as i32 - 1;
        for (slot, l) in out.iter_mut().zip(-top..=top) {
            *slot = w.graded_dim(l);
        }
        Ok(())
    })
}

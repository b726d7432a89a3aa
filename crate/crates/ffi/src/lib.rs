//! C ABI for the `cqnc` simulator.
//!
//! Every fallible call returns a [`CqncStatus`] and writes its result through
//! an out-pointer. On failure [`cqnc_last_error_message`] describes the error
//! for the calling thread. Handles and strings returned by the library are
//! owned by the caller and released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cqnc::scenario::{emit, Evaluation, Format};
use cqnc::spectra::{s_cqnc, s_sql};
use cqnc::{parse_config, preset, run_sweep, Error, Scenario, SweepResult};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqncStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or inconsistent configuration, or an unknown preset.
    Config = 3,
    /// The model could not be evaluated (singular system, lost signal, ...).
    Numeric = 4,
    OutOfRange = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

/// Opaque validated scenario.
pub struct CqncScenario(Scenario);

/// Opaque sweep result.
pub struct CqncSweep(SweepResult);

/// One row of a sweep. `g_opt` is NaN when the couplings were fixed.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CqncRow {
    pub omega_over_omega_m: f64,
    pub s_f: f64,
    pub s_sql: f64,
    pub s_cqnc: f64,
    pub ratio: f64,
    pub g_opt: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CqncStatus, message: impl Into<String>) -> CqncStatus {
    set_error(message.into());
    status
}

fn from_error(e: Error) -> CqncStatus {
    let status = if e.is_config() {
        CqncStatus::Config
    } else {
        CqncStatus::Numeric
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting panics to [`CqncStatus::Internal`].
fn guard(f: impl FnOnce() -> CqncStatus) -> CqncStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(CqncStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, CqncStatus> {
    if s.is_null() {
        return Err(fail(CqncStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(CqncStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> CqncStatus {
    if out.is_null() {
        return fail(CqncStatus::NullPointer, "output pointer is null");
    }
    out.write(value);
    CqncStatus::Ok
}

fn into_c_string(text: String) -> Result<*mut c_char, CqncStatus> {
    CString::new(text)
        .map(CString::into_raw)
        .map_err(|_| fail(CqncStatus::Internal, "output contains a NUL byte"))
}

unsafe fn scenario_ref<'a>(s: *const CqncScenario) -> Result<&'a Scenario, CqncStatus> {
    s.as_ref()
        .map(|s| &s.0)
        .ok_or_else(|| fail(CqncStatus::NullPointer, "scenario is null"))
}

unsafe fn sweep_ref<'a>(s: *const CqncSweep) -> Result<&'a SweepResult, CqncStatus> {
    s.as_ref()
        .map(|s| &s.0)
        .ok_or_else(|| fail(CqncStatus::NullPointer, "sweep is null"))
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message for the last failed call on this thread, or null if none failed.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cqnc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cqnc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a JSON scenario.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cqnc_scenario_from_json(json: *const c_char, out: *mut *mut CqncScenario) -> CqncStatus {
    guard(|| {
        let text = try_status!(read_str(json, "json"));
        match parse_config(text) {
            Ok(s) => write_out(out, Box::into_raw(Box::new(CqncScenario(s)))),
            Err(e) => from_error(e),
        }
    })
}

/// Number of curves in a named figure preset.
///
/// # Safety
/// `name` must be null or a NUL-terminated string; `out_len` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cqnc_preset_len(name: *const c_char, out_len: *mut usize) -> CqncStatus {
    guard(|| {
        let name = try_status!(read_str(name, "name"));
        match preset(name) {
            Ok(list) => write_out(out_len, list.len()),
            Err(e) => from_error(e),
        }
    })
}

/// Scenario number `index` of a named figure preset.
///
/// # Safety
/// As for [`cqnc_preset_len`].
#[no_mangle]
pub unsafe extern "C" fn cqnc_scenario_from_preset(
    name: *const c_char,
    index: usize,
    out: *mut *mut CqncScenario,
) -> CqncStatus {
    guard(|| {
        let name = try_status!(read_str(name, "name"));
        let mut list = match preset(name) {
            Ok(list) => list,
            Err(e) => return from_error(e),
        };
        if index >= list.len() {
            return fail(
                CqncStatus::OutOfRange,
                format!("preset {name} has {} curves", list.len()),
            );
        }
        write_out(out, Box::into_raw(Box::new(CqncScenario(list.swap_remove(index)))))
    })
}

/// # Safety
/// `scenario` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cqnc_scenario_free(scenario: *mut CqncScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Writes the scenario label as a new string, to be released with
/// [`cqnc_string_free`].
///
/// # Safety
/// `scenario` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cqnc_scenario_label(scenario: *const CqncScenario, out: *mut *mut c_char) -> CqncStatus {
    guard(|| {
        let s = try_status!(scenario_ref(scenario));
        write_out(out, try_status!(into_c_string(s.label.clone())))
    })
}

/// Quantum limits at `omega_over_omega_m`, in units of `ħ m γ_m ω_m`.
///
/// # Safety
/// `scenario` must be a live handle; out-pointers must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cqnc_scenario_limits(
    scenario: *const CqncScenario,
    omega_over_omega_m: f64,
    out_sql: *mut f64,
    out_cqnc: *mut f64,
) -> CqncStatus {
    guard(|| {
        let s = try_status!(scenario_ref(scenario));
        let omega = omega_over_omega_m * s.oms.omega_m;
        let status = write_out(out_sql, s_sql(omega, &s.oms));
        if status != CqncStatus::Ok {
            return status;
        }
        write_out(out_cqnc, s_cqnc(omega, &s.oms))
    })
}

/// Dimensionless added force noise at `omega_over_omega_m` with the
/// configured couplings.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cqnc_scenario_added_noise(
    scenario: *const CqncScenario,
    omega_over_omega_m: f64,
    out: *mut f64,
) -> CqncStatus {
    guard(|| {
        let s = try_status!(scenario_ref(scenario));
        match s.added_noise(omega_over_omega_m * s.oms.omega_m, 1.0, Evaluation::Auto) {
            Ok(v) => write_out(out, v),
            Err(e) => from_error(e),
        }
    })
}

/// Minimum added noise over the measurement strength at `omega_over_omega_m`.
/// `out_g_opt` receives the optimal strength in units of `ω_m`.
///
/// # Safety
/// `scenario` must be a live handle; out-pointers must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cqnc_scenario_optimize(
    scenario: *const CqncScenario,
    omega_over_omega_m: f64,
    out_s_min: *mut f64,
    out_g_opt: *mut f64,
) -> CqncStatus {
    guard(|| {
        let s = try_status!(scenario_ref(scenario));
        match s.optimize_g(omega_over_omega_m * s.oms.omega_m, Evaluation::Auto) {
            Ok(opt) => {
                let status = write_out(out_s_min, opt.s_min);
                if status != CqncStatus::Ok {
                    return status;
                }
                write_out(out_g_opt, opt.g_opt / s.oms.omega_m)
            }
            Err(e) => from_error(e),
        }
    })
}

/// Evaluates the scenario over its grid.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cqnc_sweep_run(scenario: *const CqncScenario, out: *mut *mut CqncSweep) -> CqncStatus {
    guard(|| {
        let s = try_status!(scenario_ref(scenario));
        match run_sweep(s) {
            Ok(r) => write_out(out, Box::into_raw(Box::new(CqncSweep(r)))),
            Err(e) => from_error(e),
        }
    })
}

/// Number of rows, or 0 for a null handle.
///
/// # Safety
/// `sweep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cqnc_sweep_len(sweep: *const CqncSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.0.rows.len())
}

/// # Safety
/// `sweep` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cqnc_sweep_row(sweep: *const CqncSweep, index: usize, out: *mut CqncRow) -> CqncStatus {
    guard(|| {
        let r = try_status!(sweep_ref(sweep));
        let Some(row) = r.rows.get(index) else {
            return fail(CqncStatus::OutOfRange, format!("sweep has {} rows", r.rows.len()));
        };
        write_out(
            out,
            CqncRow {
                omega_over_omega_m: row.omega_over_omega_m,
                s_f: row.s_f,
                s_sql: row.s_sql,
                s_cqnc: row.s_cqnc,
                ratio: row.ratio,
                g_opt: row.g_opt.unwrap_or(f64::NAN),
            },
        )
    })
}

unsafe fn emit_to(sweep: *const CqncSweep, format: Format, out: *mut *mut c_char) -> CqncStatus {
    guard(|| {
        let r = try_status!(sweep_ref(sweep));
        match emit(r, format) {
            Ok(text) => write_out(out, try_status!(into_c_string(text))),
            Err(e) => from_error(e),
        }
    })
}

/// Renders the sweep as CSV into a new string, to be released with
/// [`cqnc_string_free`].
///
/// # Safety
/// `sweep` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cqnc_sweep_to_csv(sweep: *const CqncSweep, out: *mut *mut c_char) -> CqncStatus {
    emit_to(sweep, Format::Csv, out)
}

/// Renders the sweep as JSON into a new string, to be released with
/// [`cqnc_string_free`].
///
/// # Safety
/// As for [`cqnc_sweep_to_csv`].
#[no_mangle]
pub unsafe extern "C" fn cqnc_sweep_to_json(sweep: *const CqncSweep, out: *mut *mut c_char) -> CqncStatus {
    emit_to(sweep, Format::Json, out)
}

/// # Safety
/// `sweep` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cqnc_sweep_free(sweep: *mut CqncSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cqnc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

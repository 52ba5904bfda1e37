//! C ABI over `qha-core`.
//!
//! Scenarios and suite results cross the boundary as opaque handles. Every fallible call
//! returns a [`QhaStatus`]; on failure the message is kept per thread and can be read with
//! [`qha_last_error`]. Strings returned as `char *` are owned by the caller and released
//! with [`qha_string_free`]; `const char *` results stay valid until the next call on the
//! same thread (last error) or until the owning handle is freed (check names).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use qha_core::duflo::estimate_duflo;
use qha_core::random;
use qha_core::scenarios::{builtin, load_scenario, Instance, ScenarioSpec};
use qha_core::suite::{run_suite, SuiteResult};
use qha_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QhaStatus {
    Ok = 0,
    /// The suite ran and at least one check failed.
    CheckFailed = 1,
    /// Unknown scenario, unreadable or invalid file.
    Config = 2,
    NullPointer = 3,
    InvalidArgument = 4,
    /// The Duflo–Moore estimate is not positive definite.
    Estimator = 5,
    /// Numerical or structural error inside the core library.
    Numerical = 6,
    Panic = 7,
}

/// Opaque scenario handle.
pub struct QhaScenario {
    spec: ScenarioSpec,
}

/// Opaque suite result handle.
pub struct QhaReport {
    result: SuiteResult,
    names: Vec<CString>,
}

/// One check of a suite result.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QhaCheck {
    pub pass: bool,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

/// Scalar summary of a Duflo–Moore estimate. `d` is NaN when `D` is not scalar.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QhaDuflo {
    pub d: f64,
    pub d_inverse: f64,
    pub is_scalar: bool,
    pub off_scalar_residual: f64,
    pub cross_check_residual: f64,
    pub min_eigenvalue: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn status_of(e: &Error) -> QhaStatus {
    match e {
        Error::Config(_) | Error::Io(_) => QhaStatus::Config,
        Error::Estimator(_) => QhaStatus::Estimator,
        Error::Parameter(_) | Error::Unsupported(_) => QhaStatus::InvalidArgument,
        _ => QhaStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<QhaStatus, (QhaStatus, String)>) -> QhaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside qha");
            QhaStatus::Panic
        }
    }
}

fn core_err(e: Error) -> (QhaStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QhaStatus, String) {
    (QhaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (QhaStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (QhaStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message of the last failed call on this thread; empty if none.
#[no_mangle]
pub extern "C" fn qha_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static string.
#[no_mangle]
pub extern "C" fn qha_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builtin scenario by id, e.g. `"wh:4"`.
///
/// # Safety
/// `id` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qha_scenario_builtin(id: *const c_char, out: *mut *mut QhaScenario) -> QhaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = builtin(read_str(id, "id")?).map_err(core_err)?;
        put(out, QhaScenario { spec });
        Ok(QhaStatus::Ok)
    })
}

/// Scenario from a TOML file.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qha_scenario_load(path: *const c_char, out: *mut *mut QhaScenario) -> QhaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = load_scenario(Path::new(read_str(path, "path")?)).map_err(core_err)?;
        put(out, QhaScenario { spec });
        Ok(QhaStatus::Ok)
    })
}

/// Scenario from TOML text.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qha_scenario_parse(text: *const c_char, out: *mut *mut QhaScenario) -> QhaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = ScenarioSpec::from_toml(read_str(text, "text")?).map_err(core_err)?;
        put(out, QhaScenario { spec });
        Ok(QhaStatus::Ok)
    })
}

/// # Safety
/// `scenario` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn qha_scenario_free(scenario: *mut QhaScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qha_scenario_set_seed(scenario: *mut QhaScenario, seed: u64) -> QhaStatus {
    guard(|| {
        let s = scenario.as_mut().ok_or_else(|| null("scenario"))?;
        s.spec.seed = seed;
        Ok(QhaStatus::Ok)
    })
}

/// Overrides the relative and absolute tolerances; both must be finite, `rel > 0`, `abs ≥ 0`.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qha_scenario_set_tolerances(scenario: *mut QhaScenario, rel: f64, abs: f64) -> QhaStatus {
    guard(|| {
        let s = scenario.as_mut().ok_or_else(|| null("scenario"))?;
        let mut spec = s.spec.clone();
        spec.tolerances.rel = rel;
        spec.tolerances.abs = abs;
        spec.validate().map_err(|e| (QhaStatus::InvalidArgument, e.to_string()))?;
        s.spec = spec;
        Ok(QhaStatus::Ok)
    })
}

/// Seeded trials per inequality check and pairs for the orthogonality relation.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qha_scenario_set_trials(scenario: *mut QhaScenario, trials: usize, pairs: usize) -> QhaStatus {
    guard(|| {
        let s = scenario.as_mut().ok_or_else(|| null("scenario"))?;
        s.spec.tolerances.trials = trials;
        s.spec.tolerances.pairs = pairs;
        Ok(QhaStatus::Ok)
    })
}

/// The scenario as TOML. Free with [`qha_string_free`].
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qha_scenario_to_toml(scenario: *const QhaScenario, out: *mut *mut c_char) -> QhaStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = s.spec.to_toml().map_err(core_err)?;
        *out = CString::new(text).map_err(|e| (QhaStatus::Numerical, e.to_string()))?.into_raw();
        Ok(QhaStatus::Ok)
    })
}

/// Runs the full suite. Returns `QHA_STATUS_OK` when every check passes and
/// `QHA_STATUS_CHECK_FAILED` otherwise; in both cases `*out` receives the result.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qha_run_suite(scenario: *const QhaScenario, out: *mut *mut QhaReport) -> QhaStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let result = run_suite(&s.spec).map_err(core_err)?;
        let names = result
            .reports
            .iter()
            .map(|r| CString::new(r.name.replace('\0', " ")).expect("nul bytes removed"))
            .collect();
        let passed = result.passed();
        put(out, QhaReport { result, names });
        Ok(if passed { QhaStatus::Ok } else { QhaStatus::CheckFailed })
    })
}

/// Estimates `D` for a finite-group scenario.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qha_estimate_duflo(scenario: *const QhaScenario, out: *mut QhaDuflo) -> QhaStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let Instance::Finite(f) = s.spec.build().map_err(core_err)? else {
            return Err((QhaStatus::InvalidArgument, "quadrature scenarios have no matrix D".into()));
        };
        let mut rng = random::rng(s.spec.seed);
        let a = random::random_density(&mut rng, f.action.shape());
        let b = random::random_density(&mut rng, f.action.shape());
        let est = estimate_duflo(&f.action, &f.haar, &a, &b).map_err(core_err)?;
        let summary = est.summary();
        *out = QhaDuflo {
            d: summary.scalar.unwrap_or(f64::NAN),
            d_inverse: summary.scalar_inverse.unwrap_or(f64::NAN),
            is_scalar: summary.scalar.is_some(),
            off_scalar_residual: summary.off_scalar_residual,
            cross_check_residual: summary.cross_check_residual,
            min_eigenvalue: summary.min_eigenvalue,
        };
        Ok(QhaStatus::Ok)
    })
}

/// # Safety
/// `report` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn qha_report_free(report: *mut QhaReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of checks; 0 for a null handle.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qha_report_len(report: *const QhaReport) -> usize {
    report.as_ref().map_or(0, |r| r.result.reports.len())
}

/// Whether every check passed; false for a null handle.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qha_report_passed(report: *const QhaReport) -> bool {
    report.as_ref().is_some_and(|r| r.result.passed())
}

/// Numbers of check `index`.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qha_report_check(report: *const QhaReport, index: usize, out: *mut QhaCheck) -> QhaStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = r
            .result
            .reports
            .get(index)
            .ok_or_else(|| (QhaStatus::InvalidArgument, format!("check index {index} out of range")))?;
        *out = QhaCheck {
            pass: c.pass,
            lhs_re: c.lhs.re,
            lhs_im: c.lhs.im,
            rhs_re: c.rhs.re,
            rhs_im: c.rhs.im,
            abs_err: c.abs_err,
            rel_err: c.rel_err,
            tol_abs: c.tol_abs,
            tol_rel: c.tol_rel,
        };
        Ok(QhaStatus::Ok)
    })
}

/// Name of check `index`, owned by the report; null when out of range.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qha_report_check_name(report: *const QhaReport, index: usize) -> *const c_char {
    report
        .as_ref()
        .and_then(|r| r.names.get(index))
        .map_or(ptr::null(), |n| n.as_ptr())
}

/// The full result as JSON. Free with [`qha_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qha_report_to_json(report: *const QhaReport, out: *mut *mut c_char) -> QhaStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = serde_json::to_string(&r.result).map_err(|e| (QhaStatus::Numerical, e.to_string()))?;
        *out = CString::new(text).map_err(|e| (QhaStatus::Numerical, e.to_string()))?.into_raw();
        Ok(QhaStatus::Ok)
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn qha_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

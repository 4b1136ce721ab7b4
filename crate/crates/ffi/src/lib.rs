//! C interface to `fueterfrac`.
//!
//! Objects are opaque handles created by `ff_*_new` and released by the
//! matching `ff_*_free`. Every fallible call returns an [`FfStatus`]; on
//! failure `ff_last_error()` describes the error until the next call on the
//! same thread. Quaternions cross the boundary as `double[4]` in the
//! standard basis `1, e1, e2, e3`; points are `double[4]` coordinates.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fueterfrac::cli::verify_scenario;
use fueterfrac::field::QuaternionField;
use fueterfrac::fueter::{d_trunc, fueter, prop_fractal_fueter, OperatorParams, Side};
use fueterfrac::integration::cauchy_kernel;
use fueterfrac::report::VerificationReport;
use fueterfrac::scenario::{OperatorBlock, Scenario};
use fueterfrac::{Error, Quaternion, StructuralSet};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParameter = 4,
    Domain = 5,
    Hypothesis = 6,
    NonFinite = 7,
    Config = 8,
    Panic = 9,
}

/// Operator side: `ψD` or `D_ψ`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfSide {
    Left = 0,
    Right = 1,
}

impl From<FfSide> for Side {
    fn from(s: FfSide) -> Side {
        match s {
            FfSide::Left => Side::Left,
            FfSide::Right => Side::Right,
        }
    }
}

/// An orthonormal structural set `ψ = (ψ0, ψ1, ψ2, ψ3)`.
pub struct FfFrame(StructuralSet);

/// A quaternion-valued field with DSL components.
pub struct FfField(QuaternionField);

/// Parameters of a proportional β-fractal Fueter operator.
pub struct FfOperator(OperatorParams);

/// The rows of a verified scenario.
pub struct FfReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> FfStatus {
    use Error::*;
    match e {
        Parse(_) => FfStatus::Parse,
        InvalidStructuralSet(_) | DegenerateFrame { .. } | InvalidParameter(_) | ZeroSigma { .. } => {
            FfStatus::InvalidParameter
        }
        HypothesisViolated(_) => FfStatus::Hypothesis,
        NonFinite(_) => FfStatus::NonFinite,
        Config(_) => FfStatus::Config,
        DivisionByZero
        | Domain(_)
        | SingularMeasure { .. }
        | NegativeBase { .. }
        | ZeroBase { .. }
        | IntegrandSingular(_)
        | ZeroLambda { .. }
        | ZeroChi0 { .. }
        | ZeroDenominator(_)
        | SingularPoint { .. } => FfStatus::Domain,
    }
}

struct Failure(FfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FfStatus::NullPointer, format!("{what} is null"))
}

/// Run `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            FfStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn read4(p: *const f64, what: &str) -> Result<[f64; 4], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::array::from_fn(|i| *p.add(i)))
}

unsafe fn write4(p: *mut f64, q: Quaternion) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null("out"));
    }
    for (i, v) in q.0.iter().enumerate() {
        *p.add(i) = *v;
    }
    Ok(())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(FfStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn ff_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by the library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ff_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The standard frame `(1, e1, e2, e3)`.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn ff_frame_standard(out: *mut *mut FfFrame) -> FfStatus {
    guard(|| put(out, FfFrame(StructuralSet::standard())))
}

/// A frame from `psi[4*k + j]`, component `j` of `ψ_k`.
///
/// # Safety
/// `psi` must point to 16 doubles; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ff_frame_new(psi: *const f64, out: *mut *mut FfFrame) -> FfStatus {
    guard(|| {
        if psi.is_null() {
            return Err(null("psi"));
        }
        let q = std::array::from_fn(|k| Quaternion(std::array::from_fn(|j| *psi.add(4 * k + j))));
        put(out, FfFrame(StructuralSet::new(q)?))
    })
}

/// # Safety
/// `frame` must come from `ff_frame_*` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ff_frame_free(frame: *mut FfFrame) {
    free(frame)
}

/// Orientation sign `±1` of the frame.
///
/// # Safety
/// `frame` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ff_frame_sign(frame: *const FfFrame, out: *mut c_int) -> FfStatus {
    guard(|| {
        let f = deref(frame, "frame")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = f.0.sign() as c_int;
        Ok(())
    })
}

/// A field `Σ ψ_m f_m(x)` from four DSL expressions in `x0..x3`.
///
/// # Safety
/// `frame` must be a live handle, `components` must point to four
/// nul-terminated strings, `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ff_field_new(
    frame: *const FfFrame,
    components: *const *const c_char,
    out: *mut *mut FfField,
) -> FfStatus {
    guard(|| {
        let fr = deref(frame, "frame")?;
        if components.is_null() {
            return Err(null("components"));
        }
        let mut src = [""; 4];
        for (m, s) in src.iter_mut().enumerate() {
            *s = read_str(*components.add(m), "component")?;
        }
        put(out, FfField(QuaternionField::parse(src, fr.0.clone())?))
    })
}

/// # Safety
/// `field` must come from `ff_field_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ff_field_free(field: *mut FfField) {
    free(field)
}

/// # Safety
/// `field` must be a live handle; `x` and `out` must hold four doubles.
#[no_mangle]
pub unsafe extern "C" fn ff_field_eval(field: *const FfField, x: *const f64, out: *mut f64) -> FfStatus {
    guard(|| {
        let f = deref(field, "field")?;
        write4(out, f.0.eval(&read4(x, "x")?)?)
    })
}

/// The classical operator `ψD f` or `f D_ψ` at `x`.
///
/// # Safety
/// `field` must be a live handle; `x` and `out` must hold four doubles.
#[no_mangle]
pub unsafe extern "C" fn ff_fueter(field: *const FfField, side: FfSide, x: *const f64, out: *mut f64) -> FfStatus {
    guard(|| {
        let f = deref(field, "field")?;
        write4(out, fueter(&f.0, side.into(), &read4(x, "x")?)?)
    })
}

/// Operator parameters from a JSON object with keys `sigma`, `beta`,
/// `measure` or `measures`, `pair` or `pairs`, `diff_mode`, as in scenario
/// files. An empty object gives the classical operator.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ff_operator_new(side: FfSide, json: *const c_char, out: *mut *mut FfOperator) -> FfStatus {
    guard(|| {
        let block = OperatorBlock::from_json(read_str(json, "json")?)?;
        put(out, FfOperator(block.build(side.into())?))
    })
}

/// # Safety
/// `op` must come from `ff_operator_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ff_operator_free(op: *mut FfOperator) {
    free(op)
}

/// The proportional fractal operator `ψD^{σ,β}_ν f` at `x`.
///
/// # Safety
/// Handles must be live; `x` and `out` must hold four doubles.
#[no_mangle]
pub unsafe extern "C" fn ff_prop_fractal_fueter(
    field: *const FfField,
    op: *const FfOperator,
    x: *const f64,
    out: *mut f64,
) -> FfStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let p = deref(op, "op")?;
        write4(out, prop_fractal_fueter(&f.0, &p.0, &read4(x, "x")?)?)
    })
}

/// The truncated-exponential operator at `x`; the operator must use
/// truncated-exponential measures on every axis.
///
/// # Safety
/// Handles must be live; `x` and `out` must hold four doubles.
#[no_mangle]
pub unsafe extern "C" fn ff_truncated_fueter(
    field: *const FfField,
    op: *const FfOperator,
    x: *const f64,
    out: *mut f64,
) -> FfStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let p = deref(op, "op")?;
        write4(out, d_trunc(&f.0, &p.0, &read4(x, "x")?)?)
    })
}

/// The Cauchy kernel `K_ψ(q)`.
///
/// # Safety
/// `frame` must be a live handle; `q` and `out` must hold four doubles.
#[no_mangle]
pub unsafe extern "C" fn ff_cauchy_kernel(frame: *const FfFrame, q: *const f64, out: *mut f64) -> FfStatus {
    guard(|| {
        let fr = deref(frame, "frame")?;
        write4(out, cauchy_kernel(&read4(q, "q")?, &fr.0)?)
    })
}

/// Evaluate every identity of a scenario given as JSON text.
///
/// # Safety
/// `config_json` must be a nul-terminated string; `out` must be valid for
/// writing.
#[no_mangle]
pub unsafe extern "C" fn ff_verify_scenario(config_json: *const c_char, out: *mut *mut FfReport) -> FfStatus {
    guard(|| {
        let resolved = Scenario::from_json(read_str(config_json, "config_json")?)?.resolve()?;
        put(out, FfReport(verify_scenario(&resolved)?))
    })
}

/// # Safety
/// `report` must come from `ff_verify_scenario` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ff_report_free(report: *mut FfReport) {
    free(report)
}

/// Row count, 1 if every row passed (else 0), and the largest residual.
///
/// # Safety
/// `report` must be a live handle; non-null out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ff_report_summary(
    report: *const FfReport,
    rows: *mut usize,
    passed: *mut c_int,
    max_residual: *mut f64,
) -> FfStatus {
    guard(|| {
        let r = deref(report, "report")?;
        if !rows.is_null() {
            *rows = r.0.rows.len();
        }
        if !passed.is_null() {
            *passed = r.0.passed() as c_int;
        }
        if !max_residual.is_null() {
            *max_residual = r.0.max_residual();
        }
        Ok(())
    })
}

/// The report as CSV text; release with `ff_string_free`.
///
/// # Safety
/// `report` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ff_report_csv(report: *const FfReport, out: *mut *mut c_char) -> FfStatus {
    guard(|| {
        let r = deref(report, "report")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = CString::new(r.0.to_csv()).expect("csv has no nul").into_raw();
        Ok(())
    })
}

//! C ABI for `bellrelax`.
//!
//! Every function returns a [`BrStatus`] and writes results through out
//! pointers. On failure a message is kept per thread and can be read with
//! [`br_last_error_message`]. Models cross the boundary as opaque
//! [`BrModel`] handles released with [`br_model_free`]; strings returned by
//! the library are released with [`br_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bellrelax::{Error, HiddenVariableModel, Regime};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrStatus {
    Ok = 0,
    NullPointer = 1,
    /// A numeric argument is outside its documented range.
    InvalidArgument = 2,
    /// The requested violation cannot be reached; not an error.
    Infeasible = 3,
    /// A model violates a probability or normalisation constraint.
    Validation = 4,
    /// Arguments are in range but the operation is undefined for them.
    Domain = 5,
    /// Malformed JSON or a non-UTF-8 string.
    Parse = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrRegime {
    SubGap = 0,
    CrossGap = 1,
    Saturated = 2,
}

impl From<Regime> for BrRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::SubGap => BrRegime::SubGap,
            Regime::CrossGap => BrRegime::CrossGap,
            Regime::Saturated => BrRegime::Saturated,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BrProfile {
    pub i1: f64,
    pub i2: f64,
    pub i: f64,
    pub s12: f64,
    pub s21: f64,
    pub s: f64,
    pub m1: f64,
    pub m2: f64,
    pub m: f64,
    pub f: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BrTightness {
    pub bound: f64,
    pub attainable: f64,
    pub searched: f64,
    pub gap: f64,
    pub attainable_gap: f64,
    pub sound: bool,
    pub tight: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BrSampleReport {
    pub estimate: f64,
    /// Runs per context in the order `xy`, `xy'`, `x'y`, `x'y'`.
    pub counts: [u64; 4],
    pub correlators: [f64; 4],
}

/// Opaque hidden-variable model.
pub struct BrModel {
    inner: HiddenVariableModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> BrStatus {
    match e {
        Error::OutOfRange { .. } => BrStatus::InvalidArgument,
        Error::Domain(_) => BrStatus::Domain,
        Error::Validation(_) => BrStatus::Validation,
        Error::Format(_) => BrStatus::Parse,
    }
}

struct Fail(BrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Fail {
    Fail(BrStatus::NullPointer, format!("{name} is null"))
}

fn guard(body: impl FnOnce() -> Result<BrStatus, Fail>) -> BrStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            BrStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn model_ref<'a>(model: *const BrModel) -> Result<&'a HiddenVariableModel, Fail> {
    model.as_ref().map(|m| &m.inner).ok_or_else(|| null("model"))
}

unsafe fn emit_model(out: *mut *mut BrModel, model: HiddenVariableModel) -> Result<BrStatus, Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(BrModel { inner: model })));
    Ok(BrStatus::Ok)
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn br_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Closed-form bound on the CHSH value for Bob's degrees `(i2, s12, m2)`.
///
/// # Safety
/// `value` and `regime` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_chsh_bound(i2: f64, s12: f64, m2: f64, value: *mut f64, regime: *mut BrRegime) -> BrStatus {
    guard(|| {
        let b = bellrelax::chsh_bound(i2, s12, m2)?;
        write(value, "value", b.value)?;
        write(regime, "regime", b.regime.into())?;
        Ok(BrStatus::Ok)
    })
}

/// The bound evaluated at the usable signaling shift.
///
/// # Safety
/// `value` and `regime` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_attainable_bound(i2: f64, s12: f64, m2: f64, value: *mut f64, regime: *mut BrRegime) -> BrStatus {
    guard(|| {
        let b = bellrelax::attainable_bound(i2, s12, m2)?;
        write(value, "value", b.value)?;
        write(regime, "regime", b.regime.into())?;
        Ok(BrStatus::Ok)
    })
}

/// `Ok` if violation `v` is reachable under the caps, `Infeasible` otherwise.
#[no_mangle]
pub extern "C" fn br_feasible(i2: f64, s12: f64, m2: f64, v: f64) -> BrStatus {
    guard(|| Ok(if bellrelax::feasible(i2, s12, m2, v)? { BrStatus::Ok } else { BrStatus::Infeasible }))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_min_signaling_for_violation(v: f64, m2: f64, out: *mut f64) -> BrStatus {
    guard(|| {
        write(out, "out", bellrelax::min_signaling_for_violation(v, m2)?)?;
        Ok(BrStatus::Ok)
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_min_md_for_violation(v: f64, i2: f64, s12: f64, out: *mut f64) -> BrStatus {
    guard(|| {
        write(out, "out", bellrelax::min_md_for_violation(v, i2, s12)?)?;
        Ok(BrStatus::Ok)
    })
}

/// # Safety
/// `i2_min` and `s12_min` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_min_indeterminism_for_violation(v: f64, i2_min: *mut f64, s12_min: *mut f64) -> BrStatus {
    guard(|| {
        let (i2, s12) = bellrelax::min_indeterminism_for_violation(v)?;
        write(i2_min, "i2_min", i2)?;
        write(s12_min, "s12_min", s12)?;
        Ok(BrStatus::Ok)
    })
}

/// Parse a model from a nul-terminated UTF-8 JSON string.
///
/// # Safety
/// `json` must be a valid C string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_model_from_json(json: *const c_char, out: *mut *mut BrModel) -> BrStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail(BrStatus::Parse, format!("model text is not UTF-8: {e}")))?;
        emit_model(out, HiddenVariableModel::from_json(text)?)
    })
}

/// Serialise a model; free the result with [`br_string_free`].
///
/// # Safety
/// `model` must come from this library and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_model_to_json(model: *const BrModel, out: *mut *mut c_char) -> BrStatus {
    guard(|| {
        let text = CString::new(model_ref(model)?.to_json()).expect("JSON has no nul bytes");
        write(out, "out", text.into_raw())?;
        Ok(BrStatus::Ok)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn br_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `model` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn br_model_free(model: *mut BrModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_model_chsh(model: *const BrModel, out: *mut f64) -> BrStatus {
    guard(|| {
        write(out, "out", model_ref(model)?.chsh())?;
        Ok(BrStatus::Ok)
    })
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_model_lambda_count(model: *const BrModel, out: *mut usize) -> BrStatus {
    guard(|| {
        write(out, "out", model_ref(model)?.lambda_count())?;
        Ok(BrStatus::Ok)
    })
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_model_profile(model: *const BrModel, out: *mut BrProfile) -> BrStatus {
    guard(|| {
        let p = bellrelax::profile(model_ref(model)?);
        let profile = BrProfile {
            i1: p.i1,
            i2: p.i2,
            i: p.i,
            s12: p.s12,
            s21: p.s21,
            s: p.s,
            m1: p.m1,
            m2: p.m2,
            m: p.m,
            f: p.f,
        };
        write(out, "out", profile)?;
        Ok(BrStatus::Ok)
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_mi_saturating_model(i2: f64, s12: f64, out: *mut *mut BrModel) -> BrStatus {
    guard(|| emit_model(out, bellrelax::mi_saturating_model(i2, s12)?))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_table1_model(p: f64, out: *mut *mut BrModel) -> BrStatus {
    guard(|| emit_model(out, bellrelax::table1_model(p)?))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_combined_saturating_model(i2: f64, s12: f64, m2: f64, out: *mut *mut BrModel) -> BrStatus {
    guard(|| emit_model(out, bellrelax::combined_saturating_model(i2, s12, m2)?))
}

/// Exhaustive search; `argmax` may be null when the model is not wanted.
///
/// # Safety
/// `best_chsh` must be valid for writes; `argmax` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_max_chsh_search(
    i2: f64,
    s12: f64,
    m2: f64,
    resolution: usize,
    best_chsh: *mut f64,
    argmax: *mut *mut BrModel,
) -> BrStatus {
    guard(|| {
        if best_chsh.is_null() {
            return Err(null("best_chsh"));
        }
        let report = bellrelax::max_chsh_search(i2, s12, m2, resolution)?;
        best_chsh.write(report.best_chsh);
        if !argmax.is_null() {
            emit_model(argmax, report.argmax_model)?;
        }
        Ok(BrStatus::Ok)
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_check_tightness(i2: f64, s12: f64, m2: f64, resolution: usize, out: *mut BrTightness) -> BrStatus {
    guard(|| {
        let r = bellrelax::check_tightness(i2, s12, m2, resolution)?;
        let t = BrTightness {
            bound: r.bound,
            attainable: r.attainable,
            searched: r.searched,
            gap: r.gap,
            attainable_gap: r.attainable_gap,
            sound: r.sound,
            tight: r.tight,
        };
        write(out, "out", t)?;
        Ok(BrStatus::Ok)
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_random_constrained_model(
    i2_cap: f64,
    s12_cap: f64,
    m2_cap: f64,
    lambda_count: usize,
    seed: u64,
    out: *mut *mut BrModel,
) -> BrStatus {
    guard(|| emit_model(out, bellrelax::random_constrained_model(i2_cap, s12_cap, m2_cap, lambda_count, seed)?))
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_sample_experiment(model: *const BrModel, runs: u64, seed: u64, out: *mut BrSampleReport) -> BrStatus {
    guard(|| {
        let r = bellrelax::sample_experiment(model_ref(model)?, runs, seed)?;
        write(out, "out", BrSampleReport { estimate: r.estimate, counts: r.counts, correlators: r.correlators })?;
        Ok(BrStatus::Ok)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        let p = br_last_error_message();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    #[test]
    fn status_codes_follow_error_kinds() {
        assert_eq!(status_of(&Error::Domain("x".into())), BrStatus::Domain);
        assert_eq!(status_of(&Error::Format("x".into())), BrStatus::Parse);
        let mut v = 0.0;
        let mut r = BrRegime::SubGap;
        assert_eq!(unsafe { br_chsh_bound(0.7, 0.0, 0.0, &mut v, &mut r) }, BrStatus::InvalidArgument);
        assert!(last_error().contains("i2"));
        assert_eq!(unsafe { br_chsh_bound(0.0, 0.0, 0.0, &mut v, &mut r) }, BrStatus::Ok);
        assert!(br_last_error_message().is_null());
    }

    #[test]
    fn null_out_pointer_is_reported() {
        assert_eq!(unsafe { br_chsh_bound(0.0, 0.0, 0.0, ptr::null_mut(), ptr::null_mut()) }, BrStatus::NullPointer);
        assert_eq!(unsafe { br_model_chsh(ptr::null(), &mut 0.0) }, BrStatus::NullPointer);
        assert_eq!(last_error(), "model is null");
    }

    #[test]
    fn freeing_null_is_harmless() {
        unsafe {
            br_model_free(ptr::null_mut());
            br_string_free(ptr::null_mut());
        }
    }
}

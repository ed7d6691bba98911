//! C ABI over `hpcqc`.
//!
//! Conventions: every fallible function returns an [`HpcqcStatus`]; on
//! failure [`hpcqc_last_error`] describes it. Objects are opaque handles
//! released with their `_free` function. Strings returned to the caller are
//! released with [`hpcqc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hpcqc::advisor::{advise_with, render_report, AdviseOptions, Policy, ReportFormat};
use hpcqc::circuit::{parse_circuit, Circuit};
use hpcqc::resources::{estimate_surface_code, Calibration, EstimateSource, HardwareProfile};
use hpcqc::transpile::t_count;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpcqcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Transpile = 5,
    Resource = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpcqcPolicy {
    Full = 0,
    Symmetry = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpcqcDecision {
    Hpc = 0,
    Qc = 10,
    Infeasible = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpcqcSource {
    Model = 0,
    ModelClamped = 1,
    PaperTable = 2,
}

/// Opaque parsed circuit.
pub struct HpcqcCircuit {
    inner: Circuit,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HpcqcEstimate {
    pub distance: u32,
    pub data_qubits: u64,
    pub distillation_qubits: u64,
    pub total_physical_qubits: u64,
    pub hours_per_shot: f64,
    pub source: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes replaced"));
}

fn guard(f: impl FnOnce() -> Result<(), (HpcqcStatus, String)>) -> HpcqcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HpcqcStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HpcqcStatus::Panic
        }
    }
}

fn null() -> (HpcqcStatus, String) {
    (HpcqcStatus::NullPointer, "null pointer argument".to_string())
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (HpcqcStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (HpcqcStatus::InvalidUtf8, e.to_string()))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hpcqc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn hpcqc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses circuit text into a new handle stored at `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hpcqc_circuit_parse(
    text: *const c_char,
    out: *mut *mut HpcqcCircuit,
) -> HpcqcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let text = str_arg(text)?;
        let inner = parse_circuit(text).map_err(|e| (HpcqcStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(HpcqcCircuit { inner }));
        Ok(())
    })
}

/// Releases a circuit handle; null is ignored.
///
/// # Safety
/// `circuit` must come from [`hpcqc_circuit_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hpcqc_circuit_free(circuit: *mut HpcqcCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// # Safety
/// `circuit` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hpcqc_circuit_stats(
    circuit: *const HpcqcCircuit,
    n_qubits: *mut u64,
    gate_count: *mut u64,
    depth: *mut u64,
) -> HpcqcStatus {
    guard(|| {
        if circuit.is_null() || n_qubits.is_null() || gate_count.is_null() || depth.is_null() {
            return Err(null());
        }
        let s = (*circuit).inner.stats();
        *n_qubits = s.n_qubits as u64;
        *gate_count = s.gate_count as u64;
        *depth = s.depth as u64;
        Ok(())
    })
}

/// T-count under full synthesis and under the symmetry-breaking policy.
///
/// # Safety
/// `circuit` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hpcqc_t_count(
    circuit: *const HpcqcCircuit,
    epsilon: f64,
    t_full: *mut u64,
    t_sym: *mut u64,
) -> HpcqcStatus {
    guard(|| {
        if circuit.is_null() || t_full.is_null() || t_sym.is_null() {
            return Err(null());
        }
        let r = t_count(&(*circuit).inner, epsilon)
            .map_err(|e| (HpcqcStatus::Transpile, e.to_string()))?;
        *t_full = r.t_full;
        *t_sym = r.t_sym;
        Ok(())
    })
}

fn profile(p: f64, cycle_time: f64, target: f64) -> Result<HardwareProfile, (HpcqcStatus, String)> {
    HardwareProfile::new(p, cycle_time, target).map_err(|e| (HpcqcStatus::InvalidArgument, e.to_string()))
}

/// Surface-code estimate with the built-in calibration.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hpcqc_estimate(
    p: f64,
    cycle_time: f64,
    target_logical_error: f64,
    logical_qubits: u64,
    t: u64,
    out: *mut HpcqcEstimate,
) -> HpcqcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let prof = profile(p, cycle_time, target_logical_error)?;
        let e = estimate_surface_code(&prof, logical_qubits, t, &Calibration::default())
            .map_err(|e| (HpcqcStatus::Resource, e.to_string()))?;
        *out = HpcqcEstimate {
            distance: e.d,
            data_qubits: e.data_qubits,
            distillation_qubits: e.distillation_qubits,
            total_physical_qubits: e.total_physical,
            hours_per_shot: e.hours_per_shot,
            source: match e.assumptions.source {
                EstimateSource::Model => HpcqcSource::Model,
                EstimateSource::ModelClamped => HpcqcSource::ModelClamped,
                EstimateSource::PaperTable => HpcqcSource::PaperTable,
            } as u32,
        };
        Ok(())
    })
}

/// Dispatch decision plus the machine-format report (JSON) in `*report`,
/// to be released with [`hpcqc_string_free`]. `policy` is an
/// [`HpcqcPolicy`] value. `t_override` of `UINT64_MAX`
/// means no override; `logical_qubits` of 0 means the circuit width.
///
/// # Safety
/// `circuit` must be a live handle; the out pointers must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn hpcqc_advise(
    circuit: *const HpcqcCircuit,
    epsilon: f64,
    policy: u32,
    t_threshold: u64,
    p: f64,
    cycle_time: f64,
    target_logical_error: f64,
    t_override: u64,
    logical_qubits: u64,
    decision: *mut HpcqcDecision,
    report: *mut *mut c_char,
) -> HpcqcStatus {
    guard(|| {
        if circuit.is_null() || decision.is_null() || report.is_null() {
            return Err(null());
        }
        *report = ptr::null_mut();
        let prof = profile(p, cycle_time, target_logical_error)?;
        let policy = match policy {
            p if p == HpcqcPolicy::Full as u32 => Policy::FullSynthesis,
            p if p == HpcqcPolicy::Symmetry as u32 => Policy::SymmetryBreaking,
            other => return Err((HpcqcStatus::InvalidArgument, format!("unknown policy {other}"))),
        };
        let options = AdviseOptions {
            t_override: (t_override != u64::MAX).then_some(t_override),
            logical_qubits: (logical_qubits != 0).then_some(logical_qubits),
        };
        let r = advise_with(
            &(*circuit).inner,
            epsilon,
            policy,
            t_threshold,
            &prof,
            &Calibration::default(),
            options,
        )
        .map_err(|e| (HpcqcStatus::Transpile, e.to_string()))?;
        *decision = match r.decision {
            hpcqc::advisor::Decision::HPC => HpcqcDecision::Hpc,
            hpcqc::advisor::Decision::QC => HpcqcDecision::Qc,
            hpcqc::advisor::Decision::Infeasible => HpcqcDecision::Infeasible,
        };
        let json = render_report(&r, ReportFormat::Machine);
        *report = CString::new(json).expect("json has no nul").into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hpcqc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

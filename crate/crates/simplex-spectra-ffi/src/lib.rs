//! C ABI over the census and basin-experiment pipelines.
//!
//! Handles are opaque; every constructor returns an error code and writes
//! the handle through an out-pointer. JSON accessors allocate C strings
//! that the caller must release with `sxs_string_free`.

use simplex_spectra::{basin_experiment, build_frame, census, census_report, default_shift};
use simplex_spectra::report::ReportError;
use simplex_spectra::stationary::StationaryError;
use simplex_spectra::tensor::SymTensor;
use std::ffi::CString;
use std::os::raw::c_char;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SxsStatus {
    SxsOk = 0,
    SxsInvalidArgument = 1,
    SxsDegenerate = 2,
    SxsInternalError = 3,
}

/// Opaque census handle (report with classifications, JSON-serializable).
pub struct SxsCensus {
    report: simplex_spectra::CensusReport,
}

/// Opaque basin-experiment handle.
pub struct SxsBasin {
    report: simplex_spectra::BasinReport,
}

fn status_of_report_error(e: &ReportError) -> SxsStatus {
    match e {
        ReportError::Stationary(StationaryError::DegenerateCombination { .. }) => {
            SxsStatus::SxsDegenerate
        }
        ReportError::Stationary(StationaryError::BadVertexCount { .. })
        | ReportError::Stationary(StationaryError::BadOrder { .. })
        | ReportError::Frame(_)
        | ReportError::Tensor(_) => SxsStatus::SxsInvalidArgument,
        _ => SxsStatus::SxsInternalError,
    }
}

/// Builds the full eigenpair census for (n, m).
///
/// # Safety
/// `out` must be a valid, writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sxs_census_new(
    n: usize,
    m: usize,
    seed: u64,
    out: *mut *mut SxsCensus,
) -> SxsStatus {
    if out.is_null() {
        return SxsStatus::SxsInvalidArgument;
    }
    *out = std::ptr::null_mut();
    match census_report(n, m, seed) {
        Ok(report) => {
            *out = Box::into_raw(Box::new(SxsCensus { report }));
            SxsStatus::SxsOk
        }
        Err(e) => status_of_report_error(&e),
    }
}

/// Number of eigenpairs in the census.
///
/// # Safety
/// `handle` must come from `sxs_census_new` and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn sxs_census_count(handle: *const SxsCensus) -> usize {
    if handle.is_null() {
        return 0;
    }
    (*handle).report.count
}

/// Theoretical cap on the number of real eigenpairs for the census shape.
///
/// # Safety
/// `handle` must come from `sxs_census_new` and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn sxs_census_upper_bound(handle: *const SxsCensus) -> usize {
    if handle.is_null() {
        return 0;
    }
    (*handle).report.upper_bound
}

/// Eigenvalue of point `index`, or NaN when out of range.
///
/// # Safety
/// `handle` must come from `sxs_census_new` and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn sxs_census_lambda(handle: *const SxsCensus, index: usize) -> f64 {
    if handle.is_null() {
        return f64::NAN;
    }
    let report = &(*handle).report;
    match report.points.get(index) {
        Some(p) => p.lambda,
        None => f64::NAN,
    }
}

/// Serializes the census report to a JSON C string (free with
/// `sxs_string_free`). Returns null on failure.
///
/// # Safety
/// `handle` must come from `sxs_census_new` and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn sxs_census_json(handle: *const SxsCensus) -> *mut c_char {
    if handle.is_null() {
        return std::ptr::null_mut();
    }
    match serde_json::to_string(&(*handle).report) {
        Ok(s) => match CString::new(s) {
            Ok(c) => c.into_raw(),
            Err(_) => std::ptr::null_mut(),
        },
        Err(_) => std::ptr::null_mut(),
    }
}

/// Releases a census handle. Null is a no-op.
///
/// # Safety
/// `handle` must come from `sxs_census_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sxs_census_free(handle: *mut SxsCensus) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Runs a seeded basin-of-attraction experiment. Pass a NaN `shift` to
/// use the default shift for (n, m).
///
/// # Safety
/// `out` must be a valid, writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sxs_basin_new(
    n: usize,
    m: usize,
    runs: usize,
    seed: u64,
    shift: f64,
    out: *mut *mut SxsBasin,
) -> SxsStatus {
    if out.is_null() {
        return SxsStatus::SxsInvalidArgument;
    }
    *out = std::ptr::null_mut();
    let shift = if shift.is_nan() { default_shift(n, m) } else { shift };
    let frame = match build_frame(n) {
        Ok(f) => f,
        Err(_) => return SxsStatus::SxsInvalidArgument,
    };
    let tensor = match SymTensor::from_frame(&frame, m) {
        Ok(t) => t,
        Err(_) => return SxsStatus::SxsInvalidArgument,
    };
    let c = match census(n, m) {
        Ok(c) => c,
        Err(StationaryError::DegenerateCombination { .. }) => return SxsStatus::SxsDegenerate,
        Err(_) => return SxsStatus::SxsInvalidArgument,
    };
    match basin_experiment(&frame, &tensor, &c, runs, seed, shift) {
        Ok(report) => {
            *out = Box::into_raw(Box::new(SxsBasin { report }));
            SxsStatus::SxsOk
        }
        Err(_) => SxsStatus::SxsInternalError,
    }
}

/// Fraction of converged runs whose limit was a frame vector.
///
/// # Safety
/// `handle` must come from `sxs_basin_new` and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn sxs_basin_frame_hit_fraction(handle: *const SxsBasin) -> f64 {
    if handle.is_null() {
        return f64::NAN;
    }
    (*handle).report.frame_hit_fraction
}

/// Serializes the basin report to a JSON C string (free with
/// `sxs_string_free`). Returns null on failure.
///
/// # Safety
/// `handle` must come from `sxs_basin_new` and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn sxs_basin_json(handle: *const SxsBasin) -> *mut c_char {
    if handle.is_null() {
        return std::ptr::null_mut();
    }
    match serde_json::to_string(&(*handle).report) {
        Ok(s) => match CString::new(s) {
            Ok(c) => c.into_raw(),
            Err(_) => std::ptr::null_mut(),
        },
        Err(_) => std::ptr::null_mut(),
    }
}

/// Releases a basin handle. Null is a no-op.
///
/// # Safety
/// `handle` must come from `sxs_basin_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sxs_basin_free(handle: *mut SxsBasin) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Frees a string returned by the JSON accessors. Null is a no-op.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sxs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

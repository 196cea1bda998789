//! Exercises the C entry points the way a foreign caller would.

use simplex_spectra_ffi::*;
use std::ffi::CStr;

#[test]
fn census_lifecycle() {
    unsafe {
        let mut h: *mut SxsCensus = std::ptr::null_mut();
        let st = sxs_census_new(4, 3, 0, &mut h);
        assert_eq!(st, SxsStatus::SxsOk);
        assert!(!h.is_null());
        assert_eq!(sxs_census_count(h), 7);
        assert_eq!(sxs_census_upper_bound(h), 7);
        let top = sxs_census_lambda(h, 0);
        assert!(top.is_finite());
        assert!(sxs_census_lambda(h, 999).is_nan());

        let json = sxs_census_json(h);
        assert!(!json.is_null());
        let s = CStr::from_ptr(json).to_str().unwrap();
        let parsed: serde_json::Value = serde_json::from_str(s).unwrap();
        assert_eq!(parsed["count"], 7);
        sxs_string_free(json);
        sxs_census_free(h);
    }
}

#[test]
fn degenerate_combination_is_reported() {
    unsafe {
        let mut h: *mut SxsCensus = std::ptr::null_mut();
        let st = sxs_census_new(3, 4, 0, &mut h);
        assert_eq!(st, SxsStatus::SxsDegenerate);
        assert!(h.is_null());
    }
}

#[test]
fn invalid_arguments_are_rejected() {
    unsafe {
        let mut h: *mut SxsCensus = std::ptr::null_mut();
        assert_eq!(sxs_census_new(2, 3, 0, &mut h), SxsStatus::SxsInvalidArgument);
        assert_eq!(sxs_census_new(4, 2, 0, &mut h), SxsStatus::SxsInvalidArgument);
        assert_eq!(
            sxs_census_new(4, 3, 0, std::ptr::null_mut()),
            SxsStatus::SxsInvalidArgument
        );
    }
}

#[test]
fn basin_lifecycle() {
    unsafe {
        let mut h: *mut SxsBasin = std::ptr::null_mut();
        let st = sxs_basin_new(3, 3, 25, 7, f64::NAN, &mut h);
        assert_eq!(st, SxsStatus::SxsOk);
        let frac = sxs_basin_frame_hit_fraction(h);
        assert!((0.0..=1.0).contains(&frac));
        let json = sxs_basin_json(h);
        assert!(!json.is_null());
        let s = CStr::from_ptr(json).to_str().unwrap().to_owned();
        sxs_string_free(json);
        sxs_basin_free(h);

        // same seed, same report bytes
        let mut h2: *mut SxsBasin = std::ptr::null_mut();
        assert_eq!(sxs_basin_new(3, 3, 25, 7, f64::NAN, &mut h2), SxsStatus::SxsOk);
        let json2 = sxs_basin_json(h2);
        assert_eq!(s, CStr::from_ptr(json2).to_str().unwrap());
        sxs_string_free(json2);
        sxs_basin_free(h2);
    }
}

#[test]
fn null_handles_are_safe() {
    unsafe {
        assert_eq!(sxs_census_count(std::ptr::null()), 0);
        assert!(sxs_census_lambda(std::ptr::null(), 0).is_nan());
        assert!(sxs_census_json(std::ptr::null()).is_null());
        sxs_census_free(std::ptr::null_mut());
        sxs_basin_free(std::ptr::null_mut());
        sxs_string_free(std::ptr::null_mut());
    }
}

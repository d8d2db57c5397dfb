use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qmodular_ffi::*;

fn owned(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { qm_string_free(s) };
    out
}

fn last_error() -> String {
    let p = qm_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn expand(expr: &str, prec: i64) -> Result<*mut QmSeries, QmStatus> {
    let e = CString::new(expr).unwrap();
    let mut h = ptr::null_mut();
    match unsafe { qm_expand(e.as_ptr(), prec, &mut h) } {
        QmStatus::Ok => Ok(h),
        s => Err(s),
    }
}

#[test]
fn expand_and_inspect() {
    let h = expand("E4", 4).unwrap();
    let (mut num, mut den) = (0i64, 0i64);
    unsafe {
        assert_eq!(qm_series_valuation(h, &mut num, &mut den), QmStatus::Ok);
        assert_eq!((num, den), (0, 1));
        assert_eq!(qm_series_precision(h, &mut num, &mut den), QmStatus::Ok);
        assert_eq!((num, den), (4, 1));
        let mut len = 0usize;
        assert_eq!(qm_series_len(h, &mut len), QmStatus::Ok);
        assert_eq!(len, 4);
        let mut grid = 0u32;
        assert_eq!(qm_series_grid(h, &mut grid), QmStatus::Ok);
        assert_eq!(grid, 1);
        let coeffs: Vec<String> = (0..len)
            .map(|i| {
                let mut c = ptr::null_mut();
                assert_eq!(qm_series_coefficient(h, i, &mut c), QmStatus::Ok);
                owned(c)
            })
            .collect();
        assert_eq!(coeffs, ["1", "240", "2160", "6720"]);
        let mut c = ptr::null_mut();
        assert_eq!(qm_series_coefficient(h, 4, &mut c), QmStatus::OutOfRange);
        assert!(c.is_null());
        let mut s = ptr::null_mut();
        assert_eq!(qm_series_to_string(h, &mut s), QmStatus::Ok);
        assert_eq!(owned(s), "1 + 240q + 2160q^2 + 6720q^3 + O(q^4)");
        qm_series_free(h);
    }
}

#[test]
fn half_integral_series() {
    let h = expand("wpt(0,1/2,1)", 2).unwrap();
    let (mut num, mut den) = (0i64, 0i64);
    let mut grid = 0u32;
    unsafe {
        assert_eq!(qm_series_grid(h, &mut grid), QmStatus::Ok);
        assert_eq!(grid, 2);
        assert_eq!(qm_series_valuation(h, &mut num, &mut den), QmStatus::Ok);
        assert_eq!((num, den), (1, 2));
        qm_series_free(h);
    }
}

#[test]
fn error_statuses() {
    assert_eq!(expand("E4 +", 3).unwrap_err(), QmStatus::Syntax);
    assert!(last_error().contains("syntax"));
    assert_eq!(expand("wp(0,0,3)", 3).unwrap_err(), QmStatus::Pole);
    assert_eq!(expand("E(2,11,0)", 3).unwrap_err(), QmStatus::Domain);
    assert_eq!(unsafe { qm_expand(ptr::null(), 3, ptr::null_mut()) }, QmStatus::NullArgument);
    let bad = [0xffu8, 0];
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { qm_expand(bad.as_ptr().cast(), 3, &mut h) }, QmStatus::InvalidUtf8);
    let mut d = 0u32;
    assert_eq!(unsafe { qm_dimension(3, 5, &mut d) }, QmStatus::Domain);
    assert_eq!(unsafe { qm_series_len(ptr::null(), &mut 0) }, QmStatus::NullArgument);
}

#[test]
fn success_clears_the_error() {
    assert_eq!(expand("E4 +", 3).unwrap_err(), QmStatus::Syntax);
    let mut d = 0u32;
    assert_eq!(unsafe { qm_dimension(10, 16, &mut d) }, QmStatus::Ok);
    assert_eq!(d, 25);
    assert!(qm_last_error().is_null());
}

#[test]
fn basis_and_reduce() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qm_basis_json(2, 4, 0, &mut s) }, QmStatus::Ok);
    let json = owned(s);
    assert!(json.contains("\"E(4,2,0)\""), "{json}");
    assert!(json.contains("[\"48\",\"1\"]"), "{json}");

    let e = CString::new("E4*Delta(2)").unwrap();
    assert_eq!(unsafe { qm_reduce_json(e.as_ptr(), 2, 8, &mut s) }, QmStatus::Ok);
    assert_eq!(owned(s), r#"[["0","1"],["1","1"],["192","1"]]"#);

    let e = CString::new("Delta(2)").unwrap();
    assert_eq!(unsafe { qm_reduce_json(e.as_ptr(), 3, 4, &mut s) }, QmStatus::NotInSpan);
}

#[test]
fn verify() {
    let name = CString::new("delta2-sq").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { qm_verify(name.as_ptr(), 30, &mut report) }, QmStatus::Ok);
    let r = owned(report);
    assert!(r.contains("\"status\":\"pass\""), "{r}");
    assert!(r.contains("\"prec\":30"), "{r}");

    let name = CString::new("nope").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { qm_verify(name.as_ptr(), 0, &mut report) }, QmStatus::Domain);
    assert!(report.is_null());
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/qmodular.h");
    for name in [
        "typedef struct QmSeries QmSeries",
        "QM_STATUS_OK = 0",
        "qm_expand",
        "qm_series_free",
        "qm_series_coefficient",
        "qm_basis_json",
        "qm_reduce_json",
        "qm_verify",
        "qm_last_error",
        "qm_string_free",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

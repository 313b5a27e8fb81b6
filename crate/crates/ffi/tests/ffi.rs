use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use ggf_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { ggf_string_free(p) };
    s
}

fn last_error() -> String {
    let p = ggf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn coeffs(s: *const GgfSeries) -> Vec<i64> {
    let n = unsafe { ggf_series_len(s) };
    (0..n)
        .map(|i| {
            let mut v = 0;
            assert_eq!(unsafe { ggf_series_coeff_i64(s, i, &mut v) }, GgfStatus::Ok);
            v
        })
        .collect()
}

fn parse(text: &str) -> *mut GgfSystem {
    let c = CString::new(text).unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(
        unsafe { ggf_system_parse(c.as_ptr(), &mut sys) },
        GgfStatus::Ok
    );
    sys
}

#[test]
fn solve_expand_and_count_agree() {
    let sys = parse("vars: a b\na >= b/2 >= 0\n");
    let mut gf = ptr::null_mut();
    assert_eq!(unsafe { ggf_solve(sys, 0, &mut gf) }, GgfStatus::Ok);
    assert!(unsafe { ggf_gf_terms(gf) } > 0);

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { ggf_gf_render(gf, &mut text) }, GgfStatus::Ok);
    assert!(take_string(text).starts_with("+ "));

    let (mut expanded, mut counted) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(
        unsafe { ggf_gf_expand(gf, 10, &mut expanded) },
        GgfStatus::Ok
    );
    assert_eq!(unsafe { ggf_count(sys, 10, &mut counted) }, GgfStatus::Ok);
    // anti-lecture-hall pairs: (−q)_2/(q²)_2
    assert_eq!(coeffs(expanded), [1, 1, 2, 3, 3, 4, 5, 5, 6, 7, 7]);
    assert_eq!(coeffs(expanded), coeffs(counted));

    let mut rendered = ptr::null_mut();
    assert_eq!(
        unsafe { ggf_system_render(sys, &mut rendered) },
        GgfStatus::Ok
    );
    assert_eq!(take_string(rendered), "vars: a b\n2*a - b >= 0\n");

    unsafe {
        ggf_series_free(expanded);
        ggf_series_free(counted);
        ggf_gf_free(gf);
        ggf_system_free(sys);
    }
}

#[test]
fn family_series() {
    let name = CString::new("minc").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { ggf_family(name.as_ptr(), -1, -1, 6, ptr::null(), &mut s) },
        GgfStatus::Ok
    );
    assert_eq!(coeffs(s), [1, 1, 2, 4, 7, 13, 24]);
    let mut big = ptr::null_mut();
    assert_eq!(
        unsafe { ggf_series_coeff_string(s, 6, &mut big) },
        GgfStatus::Ok
    );
    assert_eq!(take_string(big), "24");
    unsafe { ggf_series_free(s) };

    let bad = CString::new("nope").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { ggf_family(bad.as_ptr(), 2, -1, 6, ptr::null(), &mut t) },
        GgfStatus::InvalidArgument
    );
    assert!(last_error().contains("nope"));
}

#[test]
fn error_codes() {
    let text = CString::new("vars: a\na >= b\n").unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(
        unsafe { ggf_system_parse(text.as_ptr(), &mut sys) },
        GgfStatus::ParseError
    );
    assert!(sys.is_null());
    assert!(last_error().contains("line 2, column 6"));

    assert_eq!(
        unsafe { ggf_system_parse(ptr::null(), &mut sys) },
        GgfStatus::NullPointer
    );
    let bytes = [0xffu8, 0];
    assert_eq!(
        unsafe { ggf_system_parse(bytes.as_ptr() as *const c_char, &mut sys) },
        GgfStatus::InvalidUtf8
    );

    let sys = parse("vars: a b c\na >= b/2 >= c/3\n");
    let mut gf = ptr::null_mut();
    assert_eq!(
        unsafe { ggf_solve(sys, 2, &mut gf) },
        GgfStatus::BudgetExhausted
    );
    assert!(gf.is_null());

    let mut counted = ptr::null_mut();
    assert_eq!(unsafe { ggf_count(sys, 3, &mut counted) }, GgfStatus::Ok);
    assert!(ggf_last_error().is_null());
    let mut v = 0;
    assert_eq!(
        unsafe { ggf_series_coeff_i64(counted, 4, &mut v) },
        GgfStatus::InvalidArgument
    );
    unsafe {
        ggf_series_free(counted);
        ggf_system_free(sys);
        ggf_system_free(ptr::null_mut());
        ggf_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ggf.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "ggf_system_parse",
        "ggf_solve",
        "ggf_gf_render",
        "ggf_series_coeff_i64",
        "ggf_last_error",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(status.success());
}

use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use caustics_ffi::*;

fn phase(label: &str) -> *mut CausticsPhase {
    let l = CString::new(label).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { caustics_phase_new(l.as_ptr(), &mut p) }, CausticsStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let p = caustics_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn orders_of_d4_minus() {
    let p = phase("D4-");
    let (mut a, mut b, mut c, mut d) = (0, 0, 0, 0);
    unsafe {
        assert_eq!(caustics_phase_k(p), 2);
        assert_eq!(caustics_phase_k0(p), 3);
        assert_eq!(caustics_phase_orders(p, &mut a, &mut b, &mut c, &mut d), CausticsStatus::Ok);
        caustics_phase_free(p);
    }
    assert_eq!((a, b, c, d), (1, 3, 1, 4));
}

#[test]
fn bad_label_sets_error() {
    let l = CString::new("Q7").unwrap();
    let mut p = ptr::null_mut();
    let s = unsafe { caustics_phase_new(l.as_ptr(), &mut p) };
    assert_eq!(s, CausticsStatus::InvalidArgument);
    assert!(p.is_null());
    assert!(last_error().contains("Q7"));
    let s = unsafe { caustics_phase_new(ptr::null(), &mut p) };
    assert_eq!(s, CausticsStatus::NullPointer);
}

#[test]
fn fresnel_through_the_abi() {
    let p = phase("A1");
    let (mut re, mut im, mut conv) = (0.0, 0.0, false);
    let h = 1e-2;
    let s = unsafe {
        caustics_integral(p, 0.0, ptr::null(), 0, h, 1e-10, &mut re, &mut im, &mut conv)
    };
    unsafe { caustics_phase_free(p) };
    assert_eq!(s, CausticsStatus::Ok);
    assert!(conv);
    // h^{-1/2} √(πh) e^{iπ/4}
    let m = std::f64::consts::PI.sqrt();
    let want = (m * std::f64::consts::FRAC_1_SQRT_2, m * std::f64::consts::FRAC_1_SQRT_2);
    assert!((re - want.0).abs() < 1e-8 && (im - want.1).abs() < 1e-8, "{re} {im}");
}

#[test]
fn wrong_x_length_is_rejected() {
    let p = phase("A2");
    let (mut re, mut im) = (0.0, 0.0);
    let x = [0.0, 0.0];
    let s = unsafe {
        caustics_integral(p, 0.0, x.as_ptr(), 2, 0.01, 1e-8, &mut re, &mut im, ptr::null_mut())
    };
    unsafe { caustics_phase_free(p) };
    assert_eq!(s, CausticsStatus::InvalidArgument);
    assert!(last_error().starts_with("x:"));
}

#[test]
fn quick_scan_recovers_a2_order() {
    let p = phase("A2");
    let mut scan = ptr::null_mut();
    unsafe {
        assert_eq!(caustics_scan_run(p, 0.0, true, &mut scan), CausticsStatus::Ok);
        let slope = caustics_scan_slope(scan);
        assert!((slope - 1.0 / 6.0).abs() < 0.03, "{slope}");
        assert_eq!(caustics_scan_rows(scan), 10);
        let (mut h, mut sup) = (0.0, 0.0);
        assert_eq!(caustics_scan_row(scan, 0, &mut h, &mut sup), CausticsStatus::Ok);
        assert!(h > 0.0 && sup > 0.0);
        assert_eq!(caustics_scan_row(scan, 10, &mut h, &mut sup), CausticsStatus::InvalidArgument);
        caustics_scan_free(scan);
        caustics_phase_free(p);
    }
}

#[test]
fn lattice_counts() {
    let mut n = 0;
    let c = [0.0, 0.0];
    assert_eq!(unsafe { caustics_ball_count(c.as_ptr(), 2, 2.5, &mut n) }, CausticsStatus::Ok);
    assert_eq!(n, 21);
    let w = [0.6, 0.8];
    assert_eq!(
        unsafe { caustics_sphere_cap_count(w.as_ptr(), 2, 25, 0.0, 2.0, &mut n) },
        CausticsStatus::Ok
    );
    assert_eq!(n, 2);
    let s = unsafe { caustics_sphere_cap_count(w.as_ptr(), 2, 2_000_000, 0.5, 1.0, &mut n) };
    assert_eq!(s, CausticsStatus::EnumerationLimit);
}

#[test]
fn m_alpha_at_zero() {
    // π/√2
    assert!((caustics_m_alpha(0.0) - std::f64::consts::PI / 2f64.sqrt()).abs() < 1e-14);
}

#[test]
fn header_parses_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/caustics.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["caustics_phase_new", "caustics_scan_run", "caustics_last_error", "CAUSTICS_STATUS_OK"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    // a C compiler is optional here
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .output()
    else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

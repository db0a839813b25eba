//! C ABI over the `caustics` library.
//!
//! Every fallible call returns a [`CausticsStatus`]. On failure, a message is
//! kept per thread and can be read with [`caustics_last_error`]. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use caustics::amplitudes::AmplitudeProfile;
use caustics::catalog::{self, PhaseFunction, SingularityType};
use caustics::oscint::{self, IntegralSpec};
use caustics::scaling::{self, ScanTable};
use caustics::torus::{self, CapQuery};
use caustics::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausticsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    EnumerationLimit = 3,
    EmptyCap = 4,
    NumericalFailure = 5,
    Panic = 6,
}

/// A phase function built from a singularity label.
pub struct CausticsPhase {
    ty: SingularityType,
    phase: PhaseFunction,
}

/// Result of a sup-norm scan.
pub struct CausticsScan {
    table: ScanTable,
    slope: f64,
    r_squared: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CausticsStatus {
    match e {
        Error::InvalidSingularity(_)
        | Error::InvalidParameter { .. }
        | Error::NotInDag(_)
        | Error::UnsupportedDimension(_)
        | Error::NotNormalized(_) => CausticsStatus::InvalidArgument,
        Error::EnumerationLimit { .. } => CausticsStatus::EnumerationLimit,
        Error::EmptyCap => CausticsStatus::EmptyCap,
        Error::DegenerateFit(_) | Error::Io(_) => CausticsStatus::NumericalFailure,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (CausticsStatus, String)>) -> CausticsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CausticsStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            CausticsStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (CausticsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (CausticsStatus, String) {
    (CausticsStatus::NullPointer, format!("{name} is null"))
}

unsafe fn slice<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], (CausticsStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn caustics_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn caustics_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a label such as `"A2"`, `"D4-"` or `"E6"`.
///
/// # Safety
/// `label` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn caustics_phase_new(
    label: *const c_char,
    out: *mut *mut CausticsPhase,
) -> CausticsStatus {
    guard(|| {
        if label.is_null() {
            return Err(null("label"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(label)
            .to_str()
            .map_err(|_| (CausticsStatus::InvalidArgument, "label is not UTF-8".to_string()))?;
        let ty: SingularityType = s.parse().map_err(lib_err)?;
        let h = Box::new(CausticsPhase {
            ty,
            phase: catalog::build_phase(ty),
        });
        *out = Box::into_raw(h);
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`caustics_phase_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn caustics_phase_free(p: *mut CausticsPhase) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of phase variables `k` (1 or 2), or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn caustics_phase_k(p: *const CausticsPhase) -> usize {
    p.as_ref().map_or(0, |p| p.phase.k())
}

/// Number of unfolding parameters, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn caustics_phase_k0(p: *const CausticsPhase) -> usize {
    p.as_ref().map_or(0, |p| p.phase.k0())
}

/// Caustic order `κ` and threshold `δ₀` as reduced fractions.
///
/// # Safety
/// `p` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn caustics_phase_orders(
    p: *const CausticsPhase,
    kappa_num: *mut i64,
    kappa_den: *mut i64,
    delta_num: *mut i64,
    delta_den: *mut i64,
) -> CausticsStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("phase"))?;
        if kappa_num.is_null() || kappa_den.is_null() || delta_num.is_null() || delta_den.is_null()
        {
            return Err(null("out"));
        }
        let k = catalog::caustic_order(p.ty);
        let d = catalog::threshold(p.ty);
        *kappa_num = *k.numer();
        *kappa_den = *k.denom();
        *delta_num = *d.numer();
        *delta_den = *d.denom();
        Ok(())
    })
}

fn amplitude(delta: f64, dim: usize) -> Result<AmplitudeProfile, (CausticsStatus, String)> {
    if delta == 0.0 {
        Ok(AmplitudeProfile::fixed(dim))
    } else {
        AmplitudeProfile::narrow(delta, dim).map_err(lib_err)
    }
}

/// `I_h(x)` with the fixed bump (`delta = 0`) or a narrow bump of regularity
/// `delta`. `x` has `k0` entries.
///
/// # Safety
/// `p` must be a live handle, `x` must point to `x_len` doubles, and the out
/// pointers must be valid. `converged` may be null.
#[no_mangle]
pub unsafe extern "C" fn caustics_integral(
    p: *const CausticsPhase,
    delta: f64,
    x: *const f64,
    x_len: usize,
    h: f64,
    rel_tol: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    converged: *mut bool,
) -> CausticsStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("phase"))?;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("out"));
        }
        let x = slice(x, x_len, "x")?.to_vec();
        if x.len() != p.phase.k0() {
            return Err((
                CausticsStatus::InvalidArgument,
                format!("x: expected {} entries, got {}", p.phase.k0(), x.len()),
            ));
        }
        let amp = amplitude(delta, p.phase.k())?;
        let spec = IntegralSpec::new(p.phase.clone(), amp, x, h).with_rel_tol(rel_tol);
        let r = oscint::evaluate(&spec).map_err(lib_err)?;
        let v: Complex64 = r.value;
        *out_re = v.re;
        *out_im = v.im;
        if !converged.is_null() {
            *converged = r.converged;
        }
        Ok(())
    })
}

/// Sup-norm scan with default settings and the fit of its exponent.
/// `quick` uses fewer shells.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn caustics_scan_run(
    p: *const CausticsPhase,
    delta: f64,
    quick: bool,
    out: *mut *mut CausticsScan,
) -> CausticsStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("phase"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut plan = scaling::ScanPlan::new(p.phase.clone(), amplitude(delta, p.phase.k())?);
        if quick {
            plan.shell_count = 4;
            plan.points_per_shell = 1;
        }
        let table = scaling::supnorm_scan(&plan).map_err(lib_err)?;
        let fit = scaling::fit_exponent(&table, catalog::caustic_order(p.ty), scaling::TOL_1D);
        *out = Box::into_raw(Box::new(CausticsScan {
            slope: fit.slope,
            r_squared: fit.r_squared,
            table,
        }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`caustics_scan_run`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn caustics_scan_free(s: *mut CausticsScan) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Fitted slope of `log sup|I|` against `log(1/h)`; NaN for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn caustics_scan_slope(s: *const CausticsScan) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.slope)
}

/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn caustics_scan_r_squared(s: *const CausticsScan) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.r_squared)
}

/// Number of per-h rows.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn caustics_scan_rows(s: *const CausticsScan) -> usize {
    s.as_ref().map_or(0, |s| s.table.rows.len())
}

/// Row `i`: `h` and the observed sup.
///
/// # Safety
/// `s` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn caustics_scan_row(
    s: *const CausticsScan,
    i: usize,
    h: *mut f64,
    sup_abs: *mut f64,
) -> CausticsStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("scan"))?;
        if h.is_null() || sup_abs.is_null() {
            return Err(null("out"));
        }
        let row = s.table.rows.get(i).ok_or_else(|| {
            (
                CausticsStatus::InvalidArgument,
                format!("row {i} out of range ({} rows)", s.table.rows.len()),
            )
        })?;
        *h = row.h;
        *sup_abs = row.sup_abs;
        Ok(())
    })
}

/// Lattice points strictly inside `|α − center| < radius`.
///
/// # Safety
/// `center` must point to `n` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn caustics_ball_count(
    center: *const f64,
    n: usize,
    radius: f64,
    out: *mut u64,
) -> CausticsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let c = slice(center, n, "center")?;
        if c.is_empty() {
            return Err((CausticsStatus::InvalidArgument, "n must be positive".into()));
        }
        // unit h with zero exponent: the radius is C itself
        let q = CapQuery {
            n,
            omega: c.to_vec(),
            h: 1.0,
            j: None,
            mu: 0.0,
            cap_constant: radius,
        };
        *out = torus::ball_count(&q).map_err(lib_err)?;
        Ok(())
    })
}

/// Lattice points on `|α|² = j` within `C j^{μ/2}` of `√j ω`.
///
/// # Safety
/// `omega` must point to `n` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn caustics_sphere_cap_count(
    omega: *const f64,
    n: usize,
    j: u64,
    mu: f64,
    cap_constant: f64,
    out: *mut u64,
) -> CausticsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let w = slice(omega, n, "omega")?;
        let q = CapQuery::sphere(w.to_vec(), j, mu, cap_constant);
        *out = torus::sphere_cap_count(&q).map_err(lib_err)?;
        Ok(())
    })
}

/// `∫ dη / ((η² + α)² + 1)`.
#[no_mangle]
pub extern "C" fn caustics_m_alpha(alpha: f64) -> f64 {
    oscint::m_alpha(alpha)
}

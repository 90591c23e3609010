//! C ABI over `acm_core`.
//!
//! Manifolds and curves are opaque handles created by `*_from_json` or
//! `*_builtin` and released with the matching `*_free`. Every fallible
//! call returns an [`AcmStatus`]; on failure the thread's last error
//! message (and, for parse errors, the byte offset) can be read back.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use acm_core::cli::CliError;
use acm_core::curves::{CurveError, CurveSpec};
use acm_core::fixtures;
use acm_core::geometry::{AcmStructure, GeometryError, Manifold, StructureError};
use acm_core::theorem_lab::{first_integral, SigmaState};

/// Opaque manifold handle.
pub struct AcmManifold(Manifold);

/// Opaque curve handle.
pub struct AcmCurve(CurveSpec);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcmStatus {
    Ok = 0,
    NullArgument = 1,
    /// Malformed JSON or expression, invalid UTF-8, or unknown built-in.
    InvalidInput = 2,
    /// Valid input outside what the computation accepts.
    Precondition = 3,
    Panic = 4,
}

/// Frenet apparatus at one parameter value. `normal` and `binormal` are
/// zero when the corresponding flag is false.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct AcmFrenet {
    pub t: f64,
    pub point: [f64; 3],
    pub tangent: [f64; 3],
    pub normal: [f64; 3],
    pub binormal: [f64; 3],
    pub kappa: f64,
    pub tau: f64,
    pub normal_defined: bool,
    pub binormal_defined: bool,
    pub orthonormality: f64,
}

struct Failure {
    status: AcmStatus,
    message: String,
    offset: Option<usize>,
}

impl Failure {
    fn null(what: &str) -> Self {
        Failure {
            status: AcmStatus::NullArgument,
            message: format!("{what} is null"),
            offset: None,
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            status: AcmStatus::InvalidInput,
            message: message.into(),
            offset: None,
        }
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e {
            CliError::Input(_) => AcmStatus::InvalidInput,
            CliError::Precondition(_) => AcmStatus::Precondition,
        };
        Failure {
            status,
            message: e.to_string(),
            offset: None,
        }
    }
}

impl From<StructureError> for Failure {
    fn from(e: StructureError) -> Self {
        let offset = e.expr_offset();
        Failure {
            offset,
            ..CliError::from(e).into()
        }
    }
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        let offset = e.expr_offset();
        Failure {
            offset,
            ..CliError::from(e).into()
        }
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        CliError::from(e).into()
    }
}

struct LastError {
    message: CString,
    offset: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn run(f: impl FnOnce() -> Result<(), Failure>) -> AcmStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        Err(Failure {
            status: AcmStatus::Panic,
            message: "internal panic".into(),
            offset: None,
        })
    });
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|l| *l.borrow_mut() = None);
            AcmStatus::Ok
        }
        Err(fail) => {
            let message = CString::new(fail.message.replace('\0', " ")).unwrap_or_default();
            let offset = fail.offset.map_or(-1, |o| o as i64);
            LAST_ERROR.with(|l| *l.borrow_mut() = Some(LastError { message, offset }));
            fail.status
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::input(format!("{what} is not UTF-8: {e}")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

fn builtin(name: &str) -> Result<&'static str, Failure> {
    fixtures::builtin(name).ok_or_else(|| Failure::input(format!("unknown built-in {name:?}")))
}

fn manifold_from(src: &str) -> Result<*mut AcmManifold, Failure> {
    let m = Manifold::new(AcmStructure::from_json(src)?)?;
    Ok(Box::into_raw(Box::new(AcmManifold(m))))
}

fn curve_from(src: &str) -> Result<*mut AcmCurve, Failure> {
    Ok(Box::into_raw(Box::new(AcmCurve(CurveSpec::from_json(
        src,
    )?))))
}

/// Message of the last failed call on this thread, or NULL after a
/// success. Valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn acm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|l| {
        l.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |e| e.message.as_ptr())
    })
}

/// Byte offset of the last parse error on this thread, or -1.
#[no_mangle]
pub extern "C" fn acm_last_error_offset() -> i64 {
    LAST_ERROR.with(|l| l.borrow().as_ref().map_or(-1, |e| e.offset))
}

/// # Safety
/// `json` must be a NUL-terminated string; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acm_manifold_from_json(
    json: *const c_char,
    out_handle: *mut *mut AcmManifold,
) -> AcmStatus {
    run(|| {
        let slot = out(out_handle, "out_handle")?;
        *slot = manifold_from(text(json, "json")?)?;
        Ok(())
    })
}

/// # Safety
/// `name` must be a NUL-terminated string; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acm_manifold_builtin(
    name: *const c_char,
    out_handle: *mut *mut AcmManifold,
) -> AcmStatus {
    run(|| {
        let slot = out(out_handle, "out_handle")?;
        *slot = manifold_from(builtin(text(name, "name")?)?)?;
        Ok(())
    })
}

/// # Safety
/// `m` must come from this library and not be used afterwards. NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn acm_manifold_free(m: *mut AcmManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `json` must be a NUL-terminated string; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acm_curve_from_json(
    json: *const c_char,
    out_handle: *mut *mut AcmCurve,
) -> AcmStatus {
    run(|| {
        let slot = out(out_handle, "out_handle")?;
        *slot = curve_from(text(json, "json")?)?;
        Ok(())
    })
}

/// # Safety
/// `name` must be a NUL-terminated string; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acm_curve_builtin(
    name: *const c_char,
    out_handle: *mut *mut AcmCurve,
) -> AcmStatus {
    run(|| {
        let slot = out(out_handle, "out_handle")?;
        *slot = curve_from(builtin(text(name, "name")?)?)?;
        Ok(())
    })
}

/// # Safety
/// `c` must come from this library and not be used afterwards. NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn acm_curve_free(c: *mut AcmCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Largest almost contact metric axiom residual over `n` seeded random
/// points of the sample box; `holds` also requires a positive definite
/// metric.
///
/// # Safety
/// `m` must be a live handle; `residual` and `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acm_manifold_verify(
    m: *const AcmManifold,
    n: usize,
    seed: u64,
    tol: f64,
    residual: *mut f64,
    holds: *mut bool,
) -> AcmStatus {
    run(|| {
        let m = &handle(m, "manifold")?.0;
        let (residual, holds) = (out(residual, "residual")?, out(holds, "holds")?);
        if n == 0 {
            return Err(Failure::input("n must be at least 1"));
        }
        let v = m
            .verify_acm_axioms(&m.chart().random_points(n, seed))?
            .verdict(tol);
        *residual = v.residual;
        *holds = v.holds;
        Ok(())
    })
}

/// Trans-Sasakian (alpha, beta) at a point, with the least-squares residual.
///
/// # Safety
/// `m` must be a live handle; `point` must hold 3 doubles; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn acm_classify_at(
    m: *const AcmManifold,
    point: *const f64,
    alpha: *mut f64,
    beta: *mut f64,
    residual: *mut f64,
) -> AcmStatus {
    run(|| {
        let m = &handle(m, "manifold")?.0;
        let p = *handle(point as *const [f64; 3], "point")?;
        let (alpha, beta, residual) = (
            out(alpha, "alpha")?,
            out(beta, "beta")?,
            out(residual, "residual")?,
        );
        let ab = m.extract_alpha_beta(&p)?;
        (*alpha, *beta, *residual) = (ab.alpha, ab.beta, ab.residual);
        Ok(())
    })
}

/// # Safety
/// `m`, `c` must be live handles; `frame` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acm_frenet(
    m: *const AcmManifold,
    c: *const AcmCurve,
    t: f64,
    frame: *mut AcmFrenet,
) -> AcmStatus {
    run(|| {
        let m = &handle(m, "manifold")?.0;
        let c = &handle(c, "curve")?.0;
        let frame = out(frame, "frame")?;
        let f = m.frenet_apparatus(c, t)?;
        *frame = AcmFrenet {
            t: f.t,
            point: f.point,
            tangent: f.tangent,
            normal: f.normal.unwrap_or_default(),
            binormal: f.binormal.unwrap_or_default(),
            kappa: f.kappa,
            tau: f.tau,
            normal_defined: f.n_defined(),
            binormal_defined: f.b_defined(),
            orthonormality: f.orthonormality,
        };
        Ok(())
    })
}

/// Largest |η(γ′)| over the curve's samples. A curve leaving the chart
/// domain or not of unit speed is a precondition failure; `max_eta` is
/// still written.
///
/// # Safety
/// `m`, `c` must be live handles; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn acm_is_almost_contact(
    m: *const AcmManifold,
    c: *const AcmCurve,
    tol: f64,
    max_eta: *mut f64,
    holds: *mut bool,
) -> AcmStatus {
    run(|| {
        let m = &handle(m, "manifold")?.0;
        let c = &handle(c, "curve")?.0;
        let (max_eta, holds) = (out(max_eta, "max_eta")?, out(holds, "holds")?);
        let r = m.is_almost_contact(c, tol)?;
        *max_eta = r.max_eta;
        *holds = r.holds;
        if !r.preconditions_hold() {
            return Err(Failure {
                status: AcmStatus::Precondition,
                message: format!(
                    "curve preconditions fail (in domain: {}, unit speed residual: {:e})",
                    r.in_domain, r.unit_speed_residual
                ),
                offset: None,
            });
        }
        Ok(())
    })
}

/// First integral of the sigma ODE at (sigma, mu); requires |sigma| < 1.
///
/// # Safety
/// `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acm_sigma_first_integral(
    sigma: f64,
    mu: f64,
    value: *mut f64,
) -> AcmStatus {
    run(|| {
        let value = out(value, "value")?;
        if sigma.is_nan() || sigma.abs() >= 1.0 || !mu.is_finite() {
            return Err(Failure {
                status: AcmStatus::Precondition,
                message: format!("need |sigma| < 1 and finite mu, got ({sigma}, {mu})"),
                offset: None,
            });
        }
        *value = first_integral(&SigmaState::new(sigma, mu));
        Ok(())
    })
}

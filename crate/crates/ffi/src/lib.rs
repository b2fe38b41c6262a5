//! C ABI over the geoscatter engine.
//!
//! A `GsSystem` bundles the defect set, bump and curvature coefficients.
//! Every fallible call returns a `GsStatus`; on failure the message is
//! available from `gs_last_error_message` on the same thread. Angles are in
//! radians and all quantities are in the dimensionless units of the engine.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use geoscatter::flatdefects::{t_coefficients, DefectSet, Kinematics};
use geoscatter::geoamp::{amplitude, AmplitudeOptions};
use geoscatter::surface::{BumpProfile, CurvatureCoefficients};
use geoscatter::{specfun, Complex64, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Domain = 3,
    Overflow = 4,
    SingularMatrix = 5,
    SingularAngle = 6,
    NonConvergence = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for GsComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Opaque handle.
pub struct GsSystem {
    defects: DefectSet,
    bump: BumpProfile,
    cc: CurvatureCoefficients,
    opts: AmplitudeOptions,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> GsStatus {
    match e {
        Error::Domain(_) => GsStatus::Domain,
        Error::Overflow(_) => GsStatus::Overflow,
        Error::SingularMatrix { .. } => GsStatus::SingularMatrix,
        Error::SingularAngle { .. } => GsStatus::SingularAngle,
        Error::NonConvergence { .. } => GsStatus::NonConvergence,
        Error::InvalidInput(_) | Error::Parse { .. } | Error::Io(_) => GsStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), GsStatus>) -> GsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            GsStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            GsStatus::Panic
        }
    }
}

fn check<T>(r: geoscatter::Result<T>) -> Result<T, GsStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null() -> GsStatus {
    set_error("null pointer argument".into());
    GsStatus::NullPointer
}

unsafe fn slice<'a, T>(p: *const T, n: usize) -> Result<&'a [T], GsStatus> {
    match (p.is_null(), n) {
        (_, 0) => Ok(&[]),
        (true, _) => Err(null()),
        // SAFETY: non-null and the caller promises n readable elements.
        (false, _) => Ok(unsafe { std::slice::from_raw_parts(p, n) }),
    }
}

/// Creates a system with `n` defects at `positions` with couplings
/// `couplings_re + i couplings_im`; `couplings_im` may be NULL for real
/// couplings. Writes the handle to `out`.
///
/// # Safety
/// Array arguments must hold `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_system_new(
    positions: *const f64,
    couplings_re: *const f64,
    couplings_im: *const f64,
    n: usize,
    eta: f64,
    lambda1: f64,
    lambda2: f64,
    out: *mut *mut GsSystem,
) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        // SAFETY: forwarded caller contract.
        let (pos, re) = unsafe { (slice(positions, n)?, slice(couplings_re, n)?) };
        let im = if couplings_im.is_null() { vec![0.0; n] } else { unsafe { slice(couplings_im, n)? }.to_vec() };
        let z = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let sys = GsSystem {
            defects: check(DefectSet::new(pos.to_vec(), z))?,
            bump: check(BumpProfile::from_eta(eta))?,
            cc: check(CurvatureCoefficients::new(lambda1, lambda2))?,
            opts: AmplitudeOptions::default(),
        };
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(sys)) };
        Ok(())
    })
}

/// # Safety
/// `sys` must come from `gs_system_new` and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gs_system_free(sys: *mut GsSystem) {
    if !sys.is_null() {
        // SAFETY: ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(sys) });
    }
}

unsafe fn system<'a>(sys: *const GsSystem) -> Result<&'a GsSystem, GsStatus> {
    // SAFETY: the caller passes a live handle or NULL.
    unsafe { sys.as_ref() }.ok_or_else(null)
}

/// First-order geometric amplitude `f₁` at `kσ = ksigma`.
///
/// # Safety
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_f1(
    sys: *const GsSystem,
    ksigma: f64,
    theta0: f64,
    theta: f64,
    out: *mut GsComplex,
) -> GsStatus {
    guard(|| {
        let s = unsafe { system(sys)? };
        if out.is_null() {
            return Err(null());
        }
        let k = check(Kinematics::new(ksigma, theta0, theta))?;
        let r = check(amplitude(&k, &s.defects, &s.bump, s.cc, &s.opts))?;
        unsafe { *out = r.f1.into() };
        Ok(())
    })
}

/// `|f₁|²/σ`.
///
/// # Safety
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_cross_section(
    sys: *const GsSystem,
    ksigma: f64,
    theta0: f64,
    theta: f64,
    out: *mut f64,
) -> GsStatus {
    guard(|| {
        let s = unsafe { system(sys)? };
        if out.is_null() {
            return Err(null());
        }
        let k = check(Kinematics::new(ksigma, theta0, theta))?;
        let r = check(amplitude(&k, &s.defects, &s.bump, s.cc, &s.opts))?;
        unsafe { *out = r.cross_section };
        Ok(())
    })
}

/// Transmission and reflection coefficients `t⁺`, `t⁻` of the flat problem.
///
/// # Safety
/// `sys` must be a live handle; `tplus` and `tminus` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_t_coefficients(
    sys: *const GsSystem,
    ksigma: f64,
    theta0: f64,
    tplus: *mut GsComplex,
    tminus: *mut GsComplex,
) -> GsStatus {
    guard(|| {
        let s = unsafe { system(sys)? };
        if tplus.is_null() || tminus.is_null() {
            return Err(null());
        }
        let k = check(Kinematics::new(ksigma, theta0, theta0))?;
        let t = check(t_coefficients(&k, &s.defects))?;
        unsafe {
            *tplus = t.tplus.into();
            *tminus = t.tminus.into();
        }
        Ok(())
    })
}

/// Scaled complementary error function `e^{z²} erfc(z)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_erfcx(z: GsComplex, out: *mut GsComplex) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let v = check(specfun::erfcx(Complex64::new(z.re, z.im)))?;
        unsafe { *out = v.into() };
        Ok(())
    })
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn gs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

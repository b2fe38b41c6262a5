//! Complex error functions.
//!
//! The kernel only ever sees arguments folded into the closed first quadrant;
//! the odd and conjugate symmetries are restored afterwards with exact sign
//! flips, so `erf(-z) == -erf(z)` and `erf(conj z) == conj(erf z)` bit for bit.
//!
//! [`scaled_erfc`] and [`scaled_erf`] evaluate `e^c·erfc(z)` and `e^c·erf(z)`
//! through `erfcx`, which keeps products such as `e^{α²}·erfc(α + i s𝔎)` finite
//! when the two factors separately overflow or underflow.

use errorfunctions::ComplexErrorFunctions;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Radius inside which the documented accuracy applies.
pub const ACCURACY_RADIUS: f64 = 50.0;

/// Largest argument accepted by `f64::exp` without overflow.
const EXP_MAX: f64 = 709.782_712_893_384;

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite argument {z}")))
    }
}

fn finite_or_overflow(what: &str, z: Complex64, v: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what}({z}) exceeds the double range")))
    }
}

fn first_quadrant(z: Complex64) -> Complex64 {
    Complex64::new(z.re.abs(), z.im.abs())
}

/// Error function `erf(z)`. Fails with [`Error::Overflow`] where `|erf z|`
/// is not representable, e.g. far up the imaginary direction.
pub fn erf(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    finite_or_overflow("erf", z, erf_unchecked(z))
}

/// Complementary error function `1 - erf(z)`.
pub fn erfc(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    finite_or_overflow("erfc", z, erfc_unchecked(z))
}

/// Scaled complementary error function `e^{z²}·erfc(z)`.
///
/// The right half-plane goes straight to the kernel. The left half-plane uses
/// `erfcx(z) = 2e^{z²} - erfcx(-z)` and fails with [`Error::Overflow`] when
/// `e^{z²}` is not representable.
pub fn erfcx(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    if !z.re.is_sign_negative() {
        return Ok(erfcx_right(z));
    }
    let z2 = z * z;
    if z2.re > EXP_MAX - std::f64::consts::LN_2 {
        return Err(Error::Overflow(format!("erfcx({z}) exceeds the double range (Re z² = {:.3})", z2.re)));
    }
    Ok(2.0 * z2.exp() - erfcx_right(-z))
}

pub(crate) fn erf_unchecked(z: Complex64) -> Complex64 {
    let v = first_quadrant(z).erf();
    let flip_re = z.re.is_sign_negative();
    let flip_im = z.im.is_sign_negative();
    match (flip_re, flip_im) {
        (false, false) => v,
        (false, true) => v.conj(),
        (true, false) => -v.conj(),
        (true, true) => -v,
    }
}

pub(crate) fn erfc_unchecked(z: Complex64) -> Complex64 {
    if z.re.is_sign_negative() {
        return Complex64::new(2.0, 0.0) - erfc_unchecked(-z);
    }
    let v = first_quadrant(z).erfc();
    if z.im.is_sign_negative() {
        v.conj()
    } else {
        v
    }
}

/// `erfcx` for `Re z >= 0`, where it is bounded by 1 in modulus.
fn erfcx_right(z: Complex64) -> Complex64 {
    let v = first_quadrant(z).erfcx();
    if z.im.is_sign_negative() {
        v.conj()
    } else {
        v
    }
}

/// `e^c · erfc(z)` without forming either factor separately.
pub fn scaled_erfc(c: Complex64, z: Complex64) -> Complex64 {
    let g = (c - z * z).exp();
    if !z.re.is_sign_negative() {
        g * erfcx_right(z)
    } else {
        2.0 * c.exp() - g * erfcx_right(-z)
    }
}

/// `e^c · erf(z)` via `e^c - e^c·erfc(z)`.
pub fn scaled_erf(c: Complex64, z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // erfc ≈ 1 here, so the subtraction would cancel.
        return c.exp() * erf_unchecked(z);
    }
    c.exp() - scaled_erfc(c, z)
}

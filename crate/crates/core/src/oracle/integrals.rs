use num_complex::Complex64;

use super::quadrature::{integrate_1d, integrate_2d, QuadResult, QuadratureSpec};
use crate::error::Result;
use crate::surface::{operator_coeffs_first_order, BumpProfile, CurvatureCoefficients};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Right-hand factor acted on by `ℒ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ket {
    /// `e^{i(k_x x + k_y y)}`.
    Plane { kx: f64, ky: f64 },
    /// `e^{i(k_a|x - α| + k_b y)}`.
    Defect { ka: f64, kb: f64, alpha: f64 },
}

/// Left-hand factor, `phase·e^{i(k_x x + k_y y)}` or `phase·e^{i(k_a|x - α| + k_b y)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bra {
    Plane { kx: f64, ky: f64, phase: Complex64 },
    Kinked { ka: f64, kb: f64, alpha: f64, phase: Complex64 },
}

impl Bra {
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        match *self {
            Bra::Plane { kx, ky, phase } => phase * Complex64::from_polar(1.0, kx * x + ky * y),
            Bra::Kinked { ka, kb, alpha, phase } => phase * Complex64::from_polar(1.0, ka * (x - alpha).abs() + kb * y),
        }
    }

    fn kink(&self) -> Option<f64> {
        match *self {
            Bra::Kinked { alpha, .. } => Some(alpha),
            Bra::Plane { .. } => None,
        }
    }
}

/// `ℒ` applied to a ket: the smooth part, and for a defect ket the weight of
/// `δ(x - α)` (evaluated on the line, so `x = α`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorAction {
    pub smooth: Complex64,
    pub line: Option<Complex64>,
}

/// Cartesian form of `ℒh = (a/r²)(x²h_xx + 2xyh_xy + y²h_yy) + (b/r²)(xh_x + yh_y) + ch`,
/// which needs no division by `r`.
pub fn l_apply_cartesian(ket: &Ket, x: f64, y: f64, bump: &BumpProfile, cc: &CurvatureCoefficients) -> OperatorAction {
    let co = operator_coeffs_first_order(x.hypot(y), bump, cc);
    let (h, hx, hy, hxx, hxy, hyy, line) = match *ket {
        Ket::Plane { kx, ky } => {
            let h = Complex64::from_polar(1.0, kx * x + ky * y);
            (h, I * kx * h, I * ky * h, -kx * kx * h, -kx * ky * h, -ky * ky * h, None)
        }
        Ket::Defect { ka, kb, alpha } => {
            let sg = if x < alpha { -1.0 } else { 1.0 };
            let h = Complex64::from_polar(1.0, ka * (x - alpha).abs() + kb * y);
            let line = co.a_over_r2 * x * x * 2.0 * I * ka * Complex64::from_polar(1.0, kb * y);
            (h, I * ka * sg * h, I * kb * h, -ka * ka * h, -ka * kb * sg * h, -kb * kb * h, Some(line))
        }
    };
    let smooth =
        co.a_over_r2 * (x * x * hxx + 2.0 * x * y * hxy + y * y * hyy) + co.b_over_r2 * (x * hx + y * hy) + co.c * h;
    OperatorAction { smooth, line }
}

/// `∫∫ bra·ℒ(ket) dx dy` over `[-R, R]²`, including the line contribution of a
/// defect ket.
pub fn matrix_element(
    bra: &Bra,
    ket: &Ket,
    bump: &BumpProfile,
    cc: &CurvatureCoefficients,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let ket_kink = match *ket {
        Ket::Defect { alpha, .. } => Some(alpha),
        Ket::Plane { .. } => None,
    };
    let kinks: Vec<f64> = [Some(0.0), bra.kink(), ket_kink].into_iter().flatten().collect();
    let max_abs = kinks.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let r = spec.radius(max_abs);
    let smooth = integrate_2d(
        |x, y| bra.eval(x, y) * l_apply_cartesian(ket, x, y, bump, cc).smooth,
        (-r, r),
        (-r, r),
        &kinks,
        &[0.0],
        spec,
    )?;
    match ket_kink {
        None => Ok(smooth),
        Some(alpha) => {
            let line = integrate_1d(
                |y| bra.eval(alpha, y) * l_apply_cartesian(ket, alpha, y, bump, cc).line.unwrap_or_default(),
                -r,
                r,
                &[0.0],
                spec,
            )?;
            Ok(smooth + line)
        }
    }
}

/// Kinematic point for the oracle integrals, in units `σ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint {
    pub s: f64,
    pub big_k: f64,
    pub eta: f64,
    pub cc: CurvatureCoefficients,
}

impl OraclePoint {
    fn sc(&self) -> (f64, f64) {
        (self.s * self.big_k, self.big_k * (1.0 - self.s * self.s).max(0.0).sqrt())
    }

    fn bump(&self) -> Result<BumpProfile> {
        BumpProfile::from_eta(self.eta)
    }
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

pub fn integrate_i0(p: &OraclePoint, spec: &QuadratureSpec) -> Result<QuadResult> {
    let (s, c) = p.sc();
    let bra = Bra::Plane { kx: s, ky: -c, phase: cis(0.0) };
    matrix_element(&bra, &Ket::Plane { kx: s, ky: c }, &p.bump()?, &p.cc, spec)
}

/// `I_mn` with phase position `am` and kink position `an`.
pub fn integrate_imn(am: f64, an: f64, p: &OraclePoint, spec: &QuadratureSpec) -> Result<QuadResult> {
    let (s, c) = p.sc();
    let bra = Bra::Kinked { ka: -s, kb: -c, alpha: an, phase: cis(s * am) };
    matrix_element(&bra, &Ket::Plane { kx: s, ky: c }, &p.bump()?, &p.cc, spec)
}

/// `J_mn` with phase position `am` and ket kink at `an`.
pub fn integrate_jmn(am: f64, an: f64, p: &OraclePoint, spec: &QuadratureSpec) -> Result<QuadResult> {
    let (s, c) = p.sc();
    let bra = Bra::Plane { kx: s, ky: -c, phase: cis(s * am) };
    matrix_element(&bra, &Ket::Defect { ka: s, kb: c, alpha: an }, &p.bump()?, &p.cc, spec)
}

/// `I_{mm'nn'}` without its phase `e^{iS(α_m' + α_n')}`: bra kink at `am`,
/// ket kink at `an`.
pub fn integrate_immnn_core(am: f64, an: f64, p: &OraclePoint, spec: &QuadratureSpec) -> Result<QuadResult> {
    let (s, c) = p.sc();
    let bra = Bra::Kinked { ka: -s, kb: -c, alpha: am, phase: cis(0.0) };
    matrix_element(&bra, &Ket::Defect { ka: s, kb: c, alpha: an }, &p.bump()?, &p.cc, spec)
}

/// Full `I_{mm'nn'}`.
pub fn integrate_immnn(
    am: f64,
    amp: f64,
    an: f64,
    anp: f64,
    p: &OraclePoint,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let core = integrate_immnn_core(am, an, p, spec)?;
    let e = cis(p.s * p.big_k * (amp + anp));
    Ok(QuadResult { value: core.value * e, error: core.error })
}

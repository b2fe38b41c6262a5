use std::f64::consts::{FRAC_PI_4, PI};

use log::warn;
use num_complex::Complex64;

use super::closed::{i0_at, imm_core_at, imn_at, jmn_at, ClosedFormOptions, Point};
use crate::error::{Error, Result};
use crate::flatdefects::{angle_distance, t_coefficients, DefectMatrix, DefectSet, Kinematics, TCoefficients};
use crate::numerics::{rel_diff, CompensatedSum};
use crate::surface::{BumpProfile, CurvatureCoefficients};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Angular tolerance for "on the singular support of `f₀`".
pub const SUPPORT_TOLERANCE: f64 = 1e-9;

/// Provider of the coefficients entering the first-order amplitude.
///
/// All methods take positions rather than indices. `immnn_core` is
/// `I_{mm'nn'}` with the phase `e^{is𝔎(α_m' + α_n')}` removed, which depends
/// only on the two kink positions.
pub trait CoefficientSource: Sync {
    fn i0(&self, s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> Result<Complex64>;
    fn imn(&self, am: f64, an: f64, s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> Result<Complex64>;
    fn jmn(&self, am: f64, an: f64, s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> Result<Complex64>;
    fn immnn_core(
        &self,
        am: f64,
        an: f64,
        s: f64,
        big_k: f64,
        eta: f64,
        cc: CurvatureCoefficients,
    ) -> Result<Complex64>;
}

/// The closed forms.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForms(pub ClosedFormOptions);

impl CoefficientSource for ClosedForms {
    fn i0(&self, s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> Result<Complex64> {
        Ok(i0_at(&Point::new(s, big_k, eta, cc)))
    }

    fn imn(&self, am: f64, an: f64, s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> Result<Complex64> {
        Ok(imn_at(am, an, &Point::new(s, big_k, eta, cc), self.0.imn))
    }

    fn jmn(&self, am: f64, an: f64, s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> Result<Complex64> {
        Ok(jmn_at(am, an, &Point::new(s, big_k, eta, cc), self.0.inject_fault))
    }

    fn immnn_core(
        &self,
        am: f64,
        an: f64,
        s: f64,
        big_k: f64,
        eta: f64,
        cc: CurvatureCoefficients,
    ) -> Result<Complex64> {
        Ok(imm_core_at(am, an, &Point::new(s, big_k, eta, cc), &self.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeOptions {
    pub forms: ClosedFormOptions,
    /// Average over `θ ± ε` where the outgoing defect matrix is singular.
    pub regularize: bool,
    /// Offset in radians.
    pub epsilon: f64,
}

impl Default for AmplitudeOptions {
    fn default() -> Self {
        Self { forms: ClosedFormOptions::default(), regularize: true, epsilon: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeResult {
    /// Smooth first-order amplitude in units of `√σ`.
    pub f1: Complex64,
    /// Coefficients of the delta-supported flat amplitude.
    pub t_singular: TCoefficients,
    /// `|f₁|²/σ`.
    pub cross_section: f64,
    /// True when `θ` sits on `θ₀` or `π - θ₀`, where `f₀` also contributes.
    pub on_singular_support: bool,
    /// True when the value was obtained by averaging around a singular `A'`.
    pub regularized: bool,
}

fn on_support(k: &Kinematics) -> bool {
    angle_distance(k.theta(), k.theta0()) <= SUPPORT_TOLERANCE
        || angle_distance(k.theta(), PI - k.theta0()) <= SUPPORT_TOLERANCE
}

/// Evaluates `f₁` from any coefficient source. Errors with
/// [`Error::SingularMatrix`] when `A'` is singular.
pub fn f1_from_source<S: CoefficientSource + ?Sized>(
    src: &S,
    k: &Kinematics,
    defects: &DefectSet,
    eta: f64,
    cc: CurvatureCoefficients,
) -> Result<Complex64> {
    let a_in = DefectMatrix::build(k.kx(), defects)?;
    let a_out = DefectMatrix::build(k.kxp(), defects)?;
    assemble(src, k, defects, eta, cc, &a_in, &a_out)
}

fn assemble<S: CoefficientSource + ?Sized>(
    src: &S,
    k: &Kinematics,
    defects: &DefectSet,
    eta: f64,
    cc: CurvatureCoefficients,
    a_in: &DefectMatrix,
    a_out: &DefectMatrix,
) -> Result<Complex64> {
    let s = k.s();
    let big_k = k.big_k();
    let ss = s * big_k;
    let al = defects.positions();
    let n = al.len();

    let mut total = CompensatedSum::new();
    total.add(src.i0(s, big_k, eta, cc)?);
    for m in 0..n {
        for j in 0..n {
            let imn = src.imn(al[m], al[j], s, big_k, eta, cc)?;
            let jmn = src.jmn(al[m], al[j], s, big_k, eta, cc)?;
            total.add(-I * a_out.inv(m, j) * imn);
            total.add(-I * a_in.inv(m, j) * jmn);
        }
    }
    // Σ A'⁻¹_{mm'} A⁻¹_{nn'} I_{mm'nn'} factorizes because the primed indices
    // only enter through e^{iS(α_m' + α_n')}.
    let weights = |a: &DefectMatrix| -> Vec<Complex64> {
        (0..n)
            .map(|m| {
                let mut acc = CompensatedSum::new();
                for mp in 0..n {
                    acc.add(a.inv(m, mp) * Complex64::from_polar(1.0, ss * al[mp]));
                }
                acc.value()
            })
            .collect()
    };
    let u = weights(a_out);
    let v = weights(a_in);
    for m in 0..n {
        for j in 0..n {
            let core = src.immnn_core(al[m], al[j], s, big_k, eta, cc)?;
            total.add(-(core * u[m] * v[j]));
        }
    }
    let pre = -0.5 * Complex64::from_polar(1.0, FRAC_PI_4) / (2.0 * PI * big_k).sqrt();
    let f1 = pre * total.value();
    if !(f1.re.is_finite() && f1.im.is_finite()) {
        return Err(Error::Overflow(format!("f1 evaluated to {f1}")));
    }
    Ok(f1)
}

fn regularized<S: CoefficientSource + ?Sized>(
    src: &S,
    k: &Kinematics,
    defects: &DefectSet,
    eta: f64,
    cc: CurvatureCoefficients,
    epsilon: f64,
) -> Result<Complex64> {
    let avg = |eps: f64| -> Result<Complex64> {
        let lo = f1_from_source(src, &k.with_theta(k.theta() - eps)?, defects, eta, cc)?;
        let hi = f1_from_source(src, &k.with_theta(k.theta() + eps)?, defects, eta, cc)?;
        Ok(0.5 * (lo + hi))
    };
    // The pole cancels in the average, which then has an O(ε²) error; one
    // Richardson step removes it. Small ε loses digits as ε/cond(A')².
    let extrapolated = |eps: f64| -> Result<Complex64> { Ok((4.0 * avg(0.5 * eps)? - avg(eps)?) / 3.0) };
    let coarse = extrapolated(epsilon)?;
    let fine = extrapolated(epsilon / 10.0)?;
    let drift = rel_diff(fine, coarse);
    if drift > 1e-4 {
        warn!(
            "regularized f1 at theta = {:.6} deg drifts by {drift:.2e} between eps and eps/10",
            k.theta().to_degrees()
        );
    }
    Ok(coarse)
}

/// `f₁` and the accompanying flat-amplitude coefficients.
pub fn amplitude_with<S: CoefficientSource + ?Sized>(
    src: &S,
    k: &Kinematics,
    defects: &DefectSet,
    eta: f64,
    cc: CurvatureCoefficients,
    opts: &AmplitudeOptions,
) -> Result<AmplitudeResult> {
    let t_singular = t_coefficients(k, defects)?;
    let a_in = DefectMatrix::build(k.kx(), defects)?;
    let (f1, was_regularized) = match DefectMatrix::build(k.kxp(), defects) {
        Ok(a_out) => (assemble(src, k, defects, eta, cc, &a_in, &a_out)?, false),
        Err(Error::SingularMatrix { cond }) => {
            if !opts.regularize {
                return Err(Error::SingularMatrix { cond });
            }
            (regularized(src, k, defects, eta, cc, opts.epsilon)?, true)
        }
        Err(e) => return Err(e),
    };
    Ok(AmplitudeResult {
        f1,
        t_singular,
        cross_section: f1.norm_sqr(),
        on_singular_support: on_support(k),
        regularized: was_regularized,
    })
}

pub fn amplitude(
    k: &Kinematics,
    defects: &DefectSet,
    bump: &BumpProfile,
    cc: CurvatureCoefficients,
    opts: &AmplitudeOptions,
) -> Result<AmplitudeResult> {
    amplitude_with(&ClosedForms(opts.forms), k, defects, bump.eta(), cc, opts)
}

/// First-order geometric amplitude `f₁` (units `√σ`, `ζ = 1`) with default options.
pub fn f1_geometric(
    k: &Kinematics,
    defects: &DefectSet,
    bump: &BumpProfile,
    cc: CurvatureCoefficients,
) -> Result<Complex64> {
    Ok(amplitude(k, defects, bump, cc, &AmplitudeOptions::default())?.f1)
}

/// Smooth differential cross section `|f₁|²/σ` away from the support of `f₀`.
pub fn cross_section(
    k: &Kinematics,
    defects: &DefectSet,
    bump: &BumpProfile,
    cc: CurvatureCoefficients,
) -> Result<f64> {
    if on_support(k) {
        return Err(Error::SingularAngle { theta_deg: k.theta().to_degrees() });
    }
    Ok(amplitude(k, defects, bump, cc, &AmplitudeOptions::default())?.cross_section)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump() -> BumpProfile {
        BumpProfile::from_eta(0.1).unwrap()
    }

    #[test]
    fn no_defects_backscatter() {
        let k = Kinematics::from_degrees(1.0, 0.0, 180.0).unwrap();
        let f = f1_geometric(&k, &DefectSet::empty(), &bump(), CurvatureCoefficients::THIN_LAYER).unwrap();
        let i0 = -0.025 * PI * (-1.0f64).exp();
        let expected = -0.5 * Complex64::from_polar(1.0, FRAC_PI_4) / (2.0 * PI).sqrt() * i0;
        assert!((f - expected).norm() < 1e-16);
        assert!((f.norm() - 0.005_763_356_305_598_682).abs() < 1e-15);
    }

    #[test]
    fn singular_angles_are_refused() {
        let k = Kinematics::from_degrees(1.0, 10.0, 170.0).unwrap();
        let d = DefectSet::uniform(&[1.0], 1.0).unwrap();
        assert!(matches!(
            cross_section(&k, &d, &bump(), CurvatureCoefficients::THIN_LAYER),
            Err(Error::SingularAngle { .. })
        ));
    }

    #[test]
    fn rank_one_outgoing_matrix() {
        let k = Kinematics::from_degrees(1.0, 0.0, 90.0).unwrap();
        let d = DefectSet::uniform(&[-3.0, 3.0], 1.0).unwrap();
        let cc = CurvatureCoefficients::THIN_LAYER;
        let strict = AmplitudeOptions { regularize: false, ..Default::default() };
        assert!(matches!(amplitude(&k, &d, &bump(), cc, &strict), Err(Error::SingularMatrix { .. })));
        let r = amplitude(&k, &d, &bump(), cc, &AmplitudeOptions::default()).unwrap();
        assert!(r.regularized && r.f1.norm().is_finite());
    }
}

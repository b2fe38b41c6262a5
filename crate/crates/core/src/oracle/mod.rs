//! Independent evaluation of the perturbation coefficients by direct 2D
//! quadrature of their defining integrals, and the harness that checks the
//! closed forms against it.

mod integrals;
mod quadrature;
mod verify;

pub use integrals::{
    integrate_i0, integrate_immnn, integrate_immnn_core, integrate_imn, integrate_jmn, l_apply_cartesian,
    matrix_element, Bra, Ket, OperatorAction, OraclePoint,
};
pub use quadrature::{breakpoints, integrate_1d, integrate_2d, QuadResult, QuadratureSpec};
pub use verify::{verify_all, CheckRecord, GridKind, Tolerances, VerifyConfig, VerifyReport};

use num_complex::Complex64;

use crate::error::Result;
use crate::geoamp::CoefficientSource;
use crate::surface::CurvatureCoefficients;

/// Coefficient source backed by quadrature, usable in place of the closed forms.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadratureForms(pub QuadratureSpec);

fn point(s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> OraclePoint {
    OraclePoint { s, big_k, eta, cc }
}

impl CoefficientSource for QuadratureForms {
    fn i0(&self, s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> Result<Complex64> {
        Ok(integrate_i0(&point(s, big_k, eta, cc), &self.0)?.value)
    }

    fn imn(&self, am: f64, an: f64, s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> Result<Complex64> {
        Ok(integrate_imn(am, an, &point(s, big_k, eta, cc), &self.0)?.value)
    }

    fn jmn(&self, am: f64, an: f64, s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> Result<Complex64> {
        Ok(integrate_jmn(am, an, &point(s, big_k, eta, cc), &self.0)?.value)
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
        Ok(integrate_immnn_core(am, an, &point(s, big_k, eta, cc), &self.0)?.value)
    }
}

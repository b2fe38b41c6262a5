//! Gaussian bump `z = δ·exp(-r²/2σ²)`: profile, curvatures and the coefficients
//! of the curvature-induced perturbation operator
//! `ℒ = a·∂²_r + (b/r)·∂_r + c`.
//!
//! `f'/r = -(δ/σ²)·e^{-r²/2σ²}` is available in closed form, so every
//! coefficient (including the `K = GĠ/r` factor) is evaluated without
//! division by `r` and is regular at the origin.

use log::warn;

use crate::error::{Error, Result};

/// Above this `η` the first-order truncation is no longer trustworthy.
pub const ETA_SOFT_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    delta: f64,
    sigma: f64,
    eta: f64,
}

impl BumpProfile {
    pub fn new(delta: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(format!("bump width must be positive, got {sigma}")));
        }
        if !delta.is_finite() {
            return Err(Error::invalid(format!("bump height must be finite, got {delta}")));
        }
        let eta = delta * delta / (sigma * sigma);
        if eta > ETA_SOFT_LIMIT {
            warn!("eta = {eta:.3} > {ETA_SOFT_LIMIT}: first-order curvature truncation is unreliable");
        }
        Ok(Self { delta, sigma, eta })
    }

    /// Unit-width bump (`σ = 1`) with height `√η`.
    pub fn from_eta(eta: f64) -> Result<Self> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::invalid(format!("eta must be finite and non-negative, got {eta}")));
        }
        let bump = Self::new(eta.sqrt(), 1.0)?;
        // Keep η as given; (√η)² is not always η in floating point.
        Ok(Self { eta, ..bump })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn envelope(&self, r: f64) -> f64 {
        (-(r * r) / (2.0 * self.sigma * self.sigma)).exp()
    }

    /// `f(r)`.
    pub fn height(&self, r: f64) -> f64 {
        self.delta * self.envelope(r)
    }

    /// `f'(r)`.
    pub fn slope(&self, r: f64) -> f64 {
        r * self.slope_over_r(r)
    }

    /// `f'(r)/r`, finite at `r = 0`.
    pub fn slope_over_r(&self, r: f64) -> f64 {
        -self.delta / (self.sigma * self.sigma) * self.envelope(r)
    }

    /// `f''(r)`.
    pub fn second_derivative(&self, r: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        -self.delta / s2 * (1.0 - r * r / s2) * self.envelope(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureCoefficients {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl CurvatureCoefficients {
    /// Thin-layer quantization values `λ₁ = -λ₂ = 1/2`.
    pub const THIN_LAYER: Self = Self { lambda1: 0.5, lambda2: -0.5 };

    /// The four settings compared in the angular figures, in plotting order.
    pub const FIGURE_SET: [Self; 4] = [
        Self { lambda1: 0.5, lambda2: -0.5 },
        Self { lambda1: 0.0, lambda2: -0.5 },
        Self { lambda1: 0.5, lambda2: 0.0 },
        Self { lambda1: 0.5, lambda2: 0.5 },
    ];

    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        if !(lambda1.is_finite() && lambda2.is_finite()) {
            return Err(Error::invalid("curvature coefficients must be finite"));
        }
        Ok(Self { lambda1, lambda2 })
    }
}

impl Default for CurvatureCoefficients {
    fn default() -> Self {
        Self::THIN_LAYER
    }
}

/// Exact Gaussian (`K`) and mean (`M`) curvature at radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvatures {
    pub gaussian: f64,
    pub mean: f64,
}

/// Coefficients of `ℒ = a·∂²_r + (b/r)·∂_r + c` at radius `r`.
///
/// `a_over_r2` and `b_over_r2` are the Cartesian weights `a/r²`, `b/r²`,
/// stored separately because they stay finite at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOperatorCoefficients {
    pub r: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a_over_r2: f64,
    pub b_over_r2: f64,
}

/// `G/r` and `Ġ` where `G = f'/√(1+f'²)`.
fn g_terms(r: f64, bump: &BumpProfile) -> (f64, f64) {
    let fp = bump.slope(r);
    let w = 1.0 + fp * fp;
    let g_over_r = bump.slope_over_r(r) / w.sqrt();
    let g_dot = bump.second_derivative(r) / (w * w.sqrt());
    (g_over_r, g_dot)
}

pub fn curvatures(r: f64, bump: &BumpProfile) -> Curvatures {
    let (g_over_r, g_dot) = g_terms(r, bump);
    Curvatures { gaussian: g_over_r * g_dot, mean: 0.5 * (g_over_r + g_dot) }
}

fn assemble(r: f64, p: f64, q: f64, cc: &CurvatureCoefficients) -> RadialOperatorCoefficients {
    // p plays G/r (or f'/r), q plays Ġ (or f'').
    let a_over_r2 = p * p;
    let b_over_r2 = p * p + p * q;
    let pq = p + q;
    RadialOperatorCoefficients {
        r,
        a: a_over_r2 * r * r,
        b: b_over_r2 * r * r,
        c: 2.0 * cc.lambda1 * p * q + 0.5 * cc.lambda2 * pq * pq,
        a_over_r2,
        b_over_r2,
    }
}

/// Operator coefficients truncated at first order in `η` (`G → f'`, `Ġ → f''`).
pub fn operator_coeffs_first_order(
    r: f64,
    bump: &BumpProfile,
    cc: &CurvatureCoefficients,
) -> RadialOperatorCoefficients {
    assemble(r, bump.slope_over_r(r), bump.second_derivative(r), cc)
}

/// Untruncated operator coefficients built from `G` and `Ġ`.
pub fn operator_coeffs_exact(r: f64, bump: &BumpProfile, cc: &CurvatureCoefficients) -> RadialOperatorCoefficients {
    let (g_over_r, g_dot) = g_terms(r, bump);
    assemble(r, g_over_r, g_dot, cc)
}

/// Sum of the magnitudes of the terms of `c` before they cancel.
pub fn c_envelope(r: f64, bump: &BumpProfile, cc: &CurvatureCoefficients) -> f64 {
    let p = bump.slope_over_r(r);
    let q = bump.second_derivative(r);
    2.0 * (cc.lambda1 * p * q).abs() + 0.5 * cc.lambda2.abs() * (p.abs() + q.abs()).powi(2)
}

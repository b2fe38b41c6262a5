//! Exact scattering off N parallel delta lines `ξ_n·δ(x - a_n)` in the flat plane.
//!
//! The solution separates as `ψ₀ = χ(x)·e^{i k_y y}/2π` and the scattered part of
//! `χ` is fixed by the N×N defect matrix `A_{mn} = 2k_x δ_{mn}/z_m + i e^{i k_x|α_m-α_n|}`.

mod matrix;
mod solution;

pub use matrix::{DefectMatrix, SINGULAR_CONDITION};
pub use solution::{angle_distance, f0_distributional, t_coefficients, F0Distribution, FlatSolution, TCoefficients};

use std::f64::consts::{FRAC_PI_2, PI};

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimum separation between two line positions.
pub const MIN_SEPARATION: f64 = 1e-9;

/// Closest an incidence angle may get to grazing.
pub const GRAZING_MARGIN: f64 = 1e-6;

/// Line positions `α_n` (units of σ) and couplings `z_n = σ𝔷_n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DefectSet {
    positions: Vec<f64>,
    couplings: Vec<Complex64>,
}

impl DefectSet {
    pub fn new(positions: Vec<f64>, couplings: Vec<Complex64>) -> Result<Self> {
        if positions.len() != couplings.len() {
            return Err(Error::invalid(format!("{} positions but {} couplings", positions.len(), couplings.len())));
        }
        if positions.iter().any(|a| !a.is_finite()) || couplings.iter().any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::invalid("defect positions and couplings must be finite"));
        }
        for i in 0..positions.len() {
            for j in 0..i {
                if (positions[i] - positions[j]).abs() <= MIN_SEPARATION {
                    return Err(Error::invalid(format!("defects {j} and {i} coincide at x = {}", positions[i])));
                }
            }
        }
        let mut kept_p = Vec::with_capacity(positions.len());
        let mut kept_z = Vec::with_capacity(couplings.len());
        for (a, z) in positions.into_iter().zip(couplings) {
            if z == Complex64::new(0.0, 0.0) {
                warn!("dropping the zero-coupling defect at x = {a}");
            } else {
                kept_p.push(a);
                kept_z.push(z);
            }
        }
        Ok(Self { positions: kept_p, couplings: kept_z })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// All lines with the same real coupling.
    pub fn uniform(positions: &[f64], coupling: f64) -> Result<Self> {
        Self::new(positions.to_vec(), vec![Complex64::new(coupling, 0.0); positions.len()])
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn couplings(&self) -> &[Complex64] {
        &self.couplings
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn all_real(&self) -> bool {
        self.couplings.iter().all(|z| z.im == 0.0)
    }

    pub fn max_abs_position(&self) -> f64 {
        self.positions.iter().fold(0.0, |m, a| m.max(a.abs()))
    }
}

/// Incidence angle `θ₀`, scattering angle `θ` and wavenumber `𝔎 = kσ`.
///
/// `θ` is wrapped into `[-π/2, 3π/2)`. `s = sin(Θ/2)` keeps its sign, so it
/// covers `[-1, 1]` as `Θ = θ - θ₀` sweeps its range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    big_k: f64,
    theta0: f64,
    theta: f64,
}

impl Kinematics {
    pub fn new(big_k: f64, theta0: f64, theta: f64) -> Result<Self> {
        if !(big_k > 0.0 && big_k.is_finite()) {
            return Err(Error::invalid(format!("kσ must be positive and finite, got {big_k}")));
        }
        if !theta0.is_finite() || theta0.abs() >= FRAC_PI_2 - GRAZING_MARGIN {
            return Err(Error::invalid(format!("incidence angle {theta0} rad is grazing or beyond; need |θ₀| < π/2")));
        }
        if !theta.is_finite() {
            return Err(Error::invalid("scattering angle must be finite"));
        }
        Ok(Self { big_k, theta0, theta: wrap_angle(theta) })
    }

    pub fn from_degrees(big_k: f64, theta0_deg: f64, theta_deg: f64) -> Result<Self> {
        Self::new(big_k, theta0_deg.to_radians(), theta_deg.to_radians())
    }

    /// Same incidence and wavenumber, different scattering angle.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.big_k, self.theta0, theta)
    }

    pub fn big_k(&self) -> f64 {
        self.big_k
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `Θ = θ - θ₀`.
    pub fn big_theta(&self) -> f64 {
        self.theta - self.theta0
    }

    pub fn s(&self) -> f64 {
        (0.5 * self.big_theta()).sin()
    }

    pub fn cos_half(&self) -> f64 {
        (0.5 * self.big_theta()).cos()
    }

    pub fn kx(&self) -> f64 {
        self.big_k * self.theta0.cos()
    }

    pub fn ky(&self) -> f64 {
        self.big_k * self.theta0.sin()
    }

    /// Outgoing lab-frame `k'_x = 𝔎 cos θ`.
    pub fn kxp(&self) -> f64 {
        self.big_k * self.theta.cos()
    }

    pub fn kyp(&self) -> f64 {
        self.big_k * self.theta.sin()
    }

    /// Rotated-frame components `(k_{x'}, k'_{x'}, k_{y'})` with the momentum
    /// transfer along `x'`.
    pub fn rotated(&self) -> (f64, f64, f64) {
        let s = self.big_k * self.s();
        (s, -s, self.big_k * self.cos_half())
    }

    /// `|k - k'|` from the lab-frame components.
    pub fn momentum_transfer(&self) -> f64 {
        (self.kx() - self.kxp()).hypot(self.ky() - self.kyp())
    }
}

fn wrap_angle(theta: f64) -> f64 {
    let lo = -FRAC_PI_2;
    let t = (theta - lo).rem_euclid(2.0 * PI) + lo;
    if t >= 1.5 * PI {
        lo
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_defect_sets() {
        let one = Complex64::new(1.0, 0.0);
        assert!(DefectSet::new(vec![0.0], vec![]).is_err());
        assert!(DefectSet::new(vec![1.0, 1.0 + 1e-10], vec![one, one]).is_err());
        assert!(DefectSet::new(vec![f64::NAN], vec![one]).is_err());
        let d = DefectSet::new(vec![0.0, 2.0], vec![one, Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(d.positions(), &[0.0]);
    }

    #[test]
    fn kinematic_identities() {
        for &(k, t0, t) in &[(1.0, 0.0, 30.0), (2.5, 20.0, 200.0), (0.7, -45.0, -80.0), (3.0, 10.0, 260.0)] {
            let kin = Kinematics::from_degrees(k, t0, t).unwrap();
            let (kx, kxp, ky) = kin.rotated();
            assert!((kin.momentum_transfer() - 2.0 * k * kin.s().abs()).abs() < 1e-13);
            assert!((kx - kxp - 2.0 * k * kin.s()).abs() < 1e-15);
            assert!((kx * kx + ky * ky - k * k).abs() < 1e-13);
            assert!(kin.kx() > 0.0);
        }
    }

    #[test]
    fn theta_is_wrapped() {
        let kin = Kinematics::from_degrees(1.0, 0.0, 360.0).unwrap();
        assert!(kin.theta().abs() < 1e-15);
        let kin = Kinematics::from_degrees(1.0, 0.0, 270.0).unwrap();
        assert!((kin.theta() + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn grazing_incidence_rejected() {
        assert!(Kinematics::new(1.0, FRAC_PI_2 - 1e-7, 0.0).is_err());
        assert!(Kinematics::new(0.0, 0.0, 0.0).is_err());
    }
}

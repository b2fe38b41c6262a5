//! Whether a physical barrier is well described by a delta line.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// `ℏ²/2m_e` in eV·nm².
pub const HBAR2_OVER_2ME: f64 = 0.038_099_821_1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityInput {
    /// Barrier height in eV.
    pub v0: f64,
    /// Barrier width in nm.
    pub rho: f64,
    /// `m / m_e`.
    pub mass_ratio: f64,
    /// Particle energy in eV.
    pub energy: f64,
    /// Bump width in nm.
    pub sigma: f64,
}

impl FeasibilityInput {
    /// `σ` at which the equivalent coupling `σ𝔷` equals 1.
    pub fn unit_coupling_sigma(v0: f64, rho: f64, mass_ratio: f64) -> f64 {
        HBAR2_OVER_2ME / mass_ratio / (v0 * rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Satisfied,
    Marginal,
    Violated,
}

impl Status {
    /// `≪` read as: ratio ≤ 0.1 satisfied, ≤ 0.5 marginal.
    pub fn of_ratio(r: f64) -> Self {
        if r <= 0.1 {
            Status::Satisfied
        } else if r <= 0.5 {
            Status::Marginal
        } else {
            Status::Violated
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Satisfied => "satisfied",
            Status::Marginal => "marginal",
            Status::Violated => "violated",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub ratio: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    /// nm⁻¹.
    pub k: f64,
    /// de Broglie wavelength in nm.
    pub wavelength: f64,
    pub k_rho: f64,
    pub e_over_v0: f64,
    pub rho_over_sigma: f64,
    /// Delta strength `ξ = V₀ρ` in eV·nm.
    pub xi: f64,
    /// `σ𝔷 = 2mσξ/ℏ²`.
    pub sigma_z: f64,
    /// `𝔎 = kσ`.
    pub ksigma: f64,
    pub conditions: Vec<Condition>,
}

impl FeasibilityReport {
    pub fn all_satisfied(&self) -> bool {
        self.conditions.iter().all(|c| c.status == Status::Satisfied)
    }
}

pub fn check_feasibility(inp: &FeasibilityInput) -> Result<FeasibilityReport> {
    for (name, v) in
        [("V0", inp.v0), ("rho", inp.rho), ("mass ratio", inp.mass_ratio), ("E", inp.energy), ("sigma", inp.sigma)]
    {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let h2m = HBAR2_OVER_2ME / inp.mass_ratio;
    let k = (inp.energy / h2m).sqrt();
    let wavelength = 2.0 * PI / k;
    let xi = inp.v0 * inp.rho;
    let conditions = vec![
        Condition { name: "V0 >> E", ratio: inp.energy / inp.v0, status: Status::of_ratio(inp.energy / inp.v0) },
        Condition {
            name: "rho << lambda",
            ratio: inp.rho / wavelength,
            status: Status::of_ratio(inp.rho / wavelength),
        },
        Condition { name: "rho << sigma", ratio: inp.rho / inp.sigma, status: Status::of_ratio(inp.rho / inp.sigma) },
    ];
    Ok(FeasibilityReport {
        k,
        wavelength,
        k_rho: k * inp.rho,
        e_over_v0: inp.energy / inp.v0,
        rho_over_sigma: inp.rho / inp.sigma,
        xi,
        sigma_z: inp.sigma * xi / h2m,
        ksigma: k * inp.sigma,
        conditions,
    })
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {:.6e} nm^-1", self.k)?;
        writeln!(f, "lambda = {:.6e} nm", self.wavelength)?;
        writeln!(f, "k*rho = {:.6e}", self.k_rho)?;
        writeln!(f, "E/V0 = {:.6e}", self.e_over_v0)?;
        writeln!(f, "rho/sigma = {:.6e}", self.rho_over_sigma)?;
        writeln!(f, "xi = V0*rho = {:.6e} eV nm", self.xi)?;
        writeln!(f, "sigma*z = {:.6e}", self.sigma_z)?;
        writeln!(f, "k*sigma = {:.6e}", self.ksigma)?;
        for c in &self.conditions {
            writeln!(f, "{}: ratio {:.3e} ({})", c.name, c.ratio, c.status)?;
        }
        Ok(())
    }
}

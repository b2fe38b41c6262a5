use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::{DefectMatrix, DefectSet, Kinematics};
use crate::error::Result;
use crate::numerics::CompensatedSum;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn phase(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TCoefficients {
    pub tplus: Complex64,
    pub tminus: Complex64,
}

impl TCoefficients {
    /// `|1 + t⁺|² + |t⁻|²`; equals 1 when every coupling is real.
    pub fn unitarity(&self) -> f64 {
        (1.0 + self.tplus).norm_sqr() + self.tminus.norm_sqr()
    }
}

fn t_from_matrix(kx: f64, a: &DefectMatrix, defects: &DefectSet) -> TCoefficients {
    let al = defects.positions();
    let mut tp = CompensatedSum::new();
    let mut tm = CompensatedSum::new();
    for m in 0..al.len() {
        for n in 0..al.len() {
            let inv = a.inv(m, n);
            tp.add(inv * (kx * (al[m] - al[n])).cos());
            tm.add(inv * phase(kx * (al[m] + al[n])));
        }
    }
    TCoefficients { tplus: -I * tp.value(), tminus: -I * tm.value() }
}

/// Transmitted (`θ = θ₀`) and reflected (`θ = π - θ₀`) coefficients.
pub fn t_coefficients(k: &Kinematics, defects: &DefectSet) -> Result<TCoefficients> {
    let a = DefectMatrix::build(k.kx(), defects)?;
    Ok(t_from_matrix(k.kx(), &a, defects))
}

/// The flat-plane amplitude `f₀`, which lives only on two directions.
///
/// `f₀ = √(2π/k)·e^{-iπ/4}·[t⁺ δ(θ - θ₀) + t⁻ δ(θ + θ₀ - π)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F0Distribution {
    pub prefactor: Complex64,
    pub t: TCoefficients,
    pub transmit_angle: f64,
    pub reflect_angle: f64,
}

impl F0Distribution {
    pub fn transmit_weight(&self) -> Complex64 {
        self.prefactor * self.t.tplus
    }

    pub fn reflect_weight(&self) -> Complex64 {
        self.prefactor * self.t.tminus
    }

    /// Weight of the delta attached to `theta` (0 off the support).
    pub fn weight_at(&self, theta: f64, tol: f64) -> Complex64 {
        if angle_distance(theta, self.transmit_angle) <= tol {
            self.transmit_weight()
        } else if angle_distance(theta, self.reflect_angle) <= tol {
            self.reflect_weight()
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn unitarity(&self) -> f64 {
        self.t.unitarity()
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

pub fn f0_distributional(k: &Kinematics, defects: &DefectSet) -> Result<F0Distribution> {
    let t = t_coefficients(k, defects)?;
    Ok(F0Distribution {
        prefactor: (2.0 * PI / k.big_k()).sqrt() * phase(-FRAC_PI_4),
        t,
        transmit_angle: k.theta0(),
        reflect_angle: PI - k.theta0(),
    })
}

/// Flat-plane scattering state `ψ₀` and its dual `ψ̃₀` for one incidence.
///
/// With `c_n = Σ_m e^{i k_x α_m} A⁻¹_{mn}`:
/// `χ(x) = e^{i k_x x} - i Σ_n c_n e^{i k_x |x - α_n|}` and `ψ₀ = χ(x) e^{i k_y y}/2π`.
/// The dual replaces `A⁻¹` by its complex conjugate and the outgoing phase by
/// an incoming one, with the opposite sign in front of the sum.
#[derive(Debug, Clone)]
pub struct FlatSolution {
    kx: f64,
    ky: f64,
    defects: DefectSet,
    matrix: DefectMatrix,
    scatter: Vec<Complex64>,
    scatter_dual: Vec<Complex64>,
}

impl FlatSolution {
    pub fn new(k: &Kinematics, defects: &DefectSet) -> Result<Self> {
        let kx = k.kx();
        let matrix = DefectMatrix::build(kx, defects)?;
        let al = defects.positions();
        let n = al.len();
        let mut scatter = Vec::with_capacity(n);
        let mut scatter_dual = Vec::with_capacity(n);
        for j in 0..n {
            let mut c = CompensatedSum::new();
            let mut d = CompensatedSum::new();
            for m in 0..n {
                let e = phase(kx * al[m]);
                c.add(e * matrix.inv(m, j));
                d.add(e * matrix.inv(m, j).conj());
            }
            scatter.push(c.value());
            scatter_dual.push(d.value());
        }
        Ok(Self { kx, ky: k.ky(), defects: defects.clone(), matrix, scatter, scatter_dual })
    }

    pub fn matrix(&self) -> &DefectMatrix {
        &self.matrix
    }

    pub fn defects(&self) -> &DefectSet {
        &self.defects
    }

    /// Scattered-wave weights `c_n`.
    pub fn scatter_weights(&self) -> &[Complex64] {
        &self.scatter
    }

    pub fn t(&self) -> TCoefficients {
        t_from_matrix(self.kx, &self.matrix, &self.defects)
    }

    /// Transverse factor `χ(x)`.
    pub fn chi(&self, x: f64) -> Complex64 {
        let mut acc = CompensatedSum::new();
        acc.add(phase(self.kx * x));
        for (c, a) in self.scatter.iter().zip(self.defects.positions()) {
            acc.add(-I * c * phase(self.kx * (x - a).abs()));
        }
        acc.value()
    }

    /// `χ'(x)` from the side `side` (`+1.0` right, `-1.0` left) at the kinks.
    pub fn chi_derivative(&self, x: f64, side: f64) -> Complex64 {
        let mut acc = CompensatedSum::new();
        acc.add(I * self.kx * phase(self.kx * x));
        for (c, a) in self.scatter.iter().zip(self.defects.positions()) {
            let sg = if x > *a {
                1.0
            } else if x < *a {
                -1.0
            } else {
                side.signum()
            };
            acc.add(-I * c * (I * self.kx * sg) * phase(self.kx * (x - a).abs()));
        }
        acc.value()
    }

    /// Dual transverse factor `χ̃(x) = e^{i k_x x} + i Σ_n c̃_n e^{-i k_x |x - α_n|}`.
    pub fn chi_dual(&self, x: f64) -> Complex64 {
        let mut acc = CompensatedSum::new();
        acc.add(phase(self.kx * x));
        for (c, a) in self.scatter_dual.iter().zip(self.defects.positions()) {
            acc.add(I * c * phase(-self.kx * (x - a).abs()));
        }
        acc.value()
    }

    pub fn psi0(&self, x: f64, y: f64) -> Complex64 {
        self.chi(x) * phase(self.ky * y) / (2.0 * PI)
    }

    pub fn psi0_dual(&self, x: f64, y: f64) -> Complex64 {
        self.chi_dual(x) * phase(self.ky * y) / (2.0 * PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_defect_coefficients() {
        let k = Kinematics::new(1.0, 0.0, 0.3).unwrap();
        let d = DefectSet::uniform(&[0.0], 1.0).unwrap();
        let t = t_coefficients(&k, &d).unwrap();
        assert!((t.tplus - c(-0.2, -0.4)).norm() < 1e-15);
        assert!((t.tminus - c(-0.2, -0.4)).norm() < 1e-15);
        assert!((t.unitarity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn no_defects() {
        let k = Kinematics::new(1.3, 0.2, 1.0).unwrap();
        let t = t_coefficients(&k, &DefectSet::empty()).unwrap();
        assert_eq!((t.tplus, t.tminus), (c(0.0, 0.0), c(0.0, 0.0)));
        let sol = FlatSolution::new(&k, &DefectSet::empty()).unwrap();
        let (x, y) = (0.4, -1.7);
        let plane = phase(k.kx() * x + k.ky() * y) / (2.0 * PI);
        assert!((sol.psi0(x, y) - plane).norm() < 1e-16);
        assert!((sol.psi0_dual(x, y) - plane).norm() < 1e-16);
    }

    #[test]
    fn hard_wall_node() {
        let k = Kinematics::new(1.0, 0.0, 0.0).unwrap();
        let d = DefectSet::uniform(&[0.0], 1e8).unwrap();
        let sol = FlatSolution::new(&k, &d).unwrap();
        assert!(sol.psi0(0.0, 0.8).norm() < 1e-6);
        let t = sol.t();
        assert!((1.0 + t.tplus).norm() < 1e-6 && (1.0 + t.tminus).norm() < 1e-6);
    }

    #[test]
    fn delta_support() {
        let k = Kinematics::new(1.0, 0.1, 0.3).unwrap();
        let d = DefectSet::uniform(&[1.0], 2.0).unwrap();
        let f0 = f0_distributional(&k, &d).unwrap();
        assert_eq!(f0.weight_at(0.7, 1e-9), c(0.0, 0.0));
        assert_eq!(f0.weight_at(0.1, 1e-9), f0.transmit_weight());
        assert_eq!(f0.weight_at(PI - 0.1, 1e-9), f0.reflect_weight());
        assert!((f0.unitarity() - 1.0).abs() < 1e-14);
        let empty = f0_distributional(&k, &DefectSet::empty()).unwrap();
        assert_eq!(empty.transmit_weight(), c(0.0, 0.0));
    }
}

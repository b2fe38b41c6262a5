use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DefectSet;
use crate::error::{Error, Result};

/// Condition estimate beyond which a defect matrix is treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// `A_{mn} = 2k_x δ_{mn}/z_m + i e^{i k_x |α_m - α_n|}` with its inverse.
#[derive(Debug, Clone)]
pub struct DefectMatrix {
    kx: f64,
    entries: DMatrix<Complex64>,
    inverse: DMatrix<Complex64>,
    cond: f64,
}

fn entries(kx: f64, defects: &DefectSet) -> DMatrix<Complex64> {
    let a = defects.positions();
    let z = defects.couplings();
    let n = a.len();
    DMatrix::from_fn(n, n, |m, k| {
        // Symmetric by construction: |α_m - α_k| is the same float either way.
        let off = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, kx * (a[m] - a[k]).abs());
        if m == k {
            Complex64::new(2.0 * kx, 0.0) / z[m] + off
        } else {
            off
        }
    })
}

fn norm1(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max)
}

impl DefectMatrix {
    /// Builds `A` and inverts it by LU with partial pivoting.
    ///
    /// Fails with [`Error::SingularMatrix`] when the row-equilibrated 1-norm
    /// condition estimate exceeds [`SINGULAR_CONDITION`].
    pub fn build(kx: f64, defects: &DefectSet) -> Result<Self> {
        Self::build_with_threshold(kx, defects, SINGULAR_CONDITION)
    }

    pub fn build_with_threshold(kx: f64, defects: &DefectSet, threshold: f64) -> Result<Self> {
        if kx == 0.0 && !defects.is_empty() {
            return Err(Error::SingularMatrix { cond: f64::INFINITY });
        }
        if !kx.is_finite() {
            return Err(Error::invalid(format!("k_x must be finite, got {kx}")));
        }
        let a = entries(kx, defects);
        let n = a.nrows();
        if n == 0 {
            return Ok(Self { kx, entries: a.clone(), inverse: a, cond: 1.0 });
        }
        let inverse = a.clone().lu().try_inverse().ok_or(Error::SingularMatrix { cond: f64::INFINITY })?;
        // cond₁(DA) with D = diag(1 / max_j |a_ij|); (DA)⁻¹ = A⁻¹ D⁻¹.
        let row_scale: Vec<f64> = (0..n).map(|i| a.row(i).iter().map(|v| v.norm()).fold(0.0, f64::max)).collect();
        let scaled = DMatrix::from_fn(n, n, |i, j| a[(i, j)] / row_scale[i]);
        let scaled_inv = DMatrix::from_fn(n, n, |i, j| inverse[(i, j)] * row_scale[j]);
        let cond = norm1(&scaled) * norm1(&scaled_inv);
        if !cond.is_finite() || cond > threshold {
            return Err(Error::SingularMatrix { cond });
        }
        Ok(Self { kx, entries: a, inverse, cond })
    }

    pub fn kx(&self) -> f64 {
        self.kx
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m, n)]
    }

    pub fn inv(&self, m: usize, n: usize) -> Complex64 {
        self.inverse[(m, n)]
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn inverse(&self) -> &DMatrix<Complex64> {
        &self.inverse
    }

    /// Row-equilibrated 1-norm condition estimate.
    pub fn condition(&self) -> f64 {
        self.cond
    }

    /// `‖A·A⁻¹ - I‖_max`.
    pub fn residual(&self) -> f64 {
        let n = self.len();
        let prod = &self.entries * &self.inverse;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - id).norm());
            }
        }
        worst
    }
}

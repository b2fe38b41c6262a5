use rayon::prelude::*;

use super::amplitude::{amplitude, AmplitudeOptions};
use crate::error::Result;
use crate::flatdefects::{DefectSet, Kinematics};
use crate::surface::{BumpProfile, CurvatureCoefficients};

/// Location and height of the largest `|f₁|²/σ` over a `𝔎` interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub big_k: f64,
    pub cross_section: f64,
}

/// Scans `n` evenly spaced `𝔎` in `[lo, hi]`, then polishes the best bracket by
/// golden-section search.
#[allow(clippy::too_many_arguments)]
pub fn peak_over_k(
    theta0: f64,
    theta: f64,
    defects: &DefectSet,
    bump: &BumpProfile,
    cc: CurvatureCoefficients,
    (lo, hi): (f64, f64),
    n: usize,
    opts: &AmplitudeOptions,
) -> Result<Peak> {
    let n = n.max(3);
    let xs = |k: f64| -> Result<f64> {
        Ok(amplitude(&Kinematics::new(k, theta0, theta)?, defects, bump, cc, opts)?.cross_section)
    };
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let vals: Vec<f64> = grid.par_iter().map(|&k| xs(k)).collect::<Result<_>>()?;
    let best = (0..n).fold(0, |b, i| if vals[i] > vals[b] { i } else { b });
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(n - 1)]);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (xs(c)?, xs(d)?);
    for _ in 0..60 {
        if (b - a).abs() < 1e-10 * b.abs().max(1.0) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = xs(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = xs(d)?;
        }
    }
    let (k, v) = if fc > fd { (c, fc) } else { (d, fd) };
    Ok(if v >= vals[best] {
        Peak { big_k: k, cross_section: v }
    } else {
        Peak { big_k: grid[best], cross_section: vals[best] }
    })
}

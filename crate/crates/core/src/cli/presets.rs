//! Hard-coded parameter sets of the published figures.

use num_complex::Complex64;

use super::parse::Grid;
use super::sweep::{Axis, Curve, SweepSpec};
use crate::error::{Error, Result};
use crate::geoamp::KVariant;
use crate::surface::CurvatureCoefficients;

pub const PRESETS: [&str; 14] = [
    "fig1-left",
    "fig1-middle",
    "fig1-right",
    "fig2-left",
    "fig2-middle",
    "fig2-right",
    "fig3-left",
    "fig3-middle",
    "fig3-right",
    "fig4-left",
    "fig4-middle",
    "fig4-right",
    "fig5-left",
    "fig5-right",
];

/// Scattering angles of the k-scan figures, in legend order.
pub const FIGURE_THETAS_DEG: [f64; 6] = [5.0, 30.0, 45.0, 60.0, 90.0, 175.0];

pub const DEFAULT_K_POINTS: usize = 500;
pub const DEFAULT_THETA_POINTS: usize = 721;

const K_RANGE: (f64, f64) = (0.01, 5.0);
const THETA_RANGE: (f64, f64) = (-90.0, 270.0);

fn positions(panel: &str, one_defect: bool) -> Vec<f64> {
    match (one_defect, panel) {
        (true, "left") => vec![-3.0],
        (true, "middle") => vec![0.0],
        (true, _) => vec![3.0],
        (false, "left") => vec![-3.0, 0.0],
        (false, "middle") => vec![0.0, 3.0],
        (false, _) => vec![-3.0, 3.0],
    }
}

/// The sweep behind a figure panel; `points` overrides the grid size.
pub fn preset(name: &str, points: Option<usize>) -> Result<SweepSpec> {
    let unknown = || Error::invalid(format!("unknown preset `{name}` (expected one of {})", PRESETS.join(", ")));
    let (fig, panel) = name.split_once('-').ok_or_else(unknown)?;
    if !PRESETS.contains(&name) {
        return Err(unknown());
    }
    let kscan = matches!(fig, "fig1" | "fig2") || name == "fig5-left";
    let axis = if kscan {
        Axis::K(Grid::new(K_RANGE.0, K_RANGE.1, points.unwrap_or(DEFAULT_K_POINTS))?)
    } else {
        Axis::Theta(Grid::new(THETA_RANGE.0, THETA_RANGE.1, points.unwrap_or(DEFAULT_THETA_POINTS))?)
    };
    let curves = if kscan {
        FIGURE_THETAS_DEG.iter().map(|&t| Curve { fixed: t, cc: CurvatureCoefficients::THIN_LAYER }).collect()
    } else {
        CurvatureCoefficients::FIGURE_SET.iter().map(|&cc| Curve { fixed: 1.0, cc }).collect()
    };
    let positions = match fig {
        "fig1" | "fig3" => positions(panel, true),
        "fig2" | "fig4" => positions(panel, false),
        _ => Vec::new(),
    };
    let couplings = vec![Complex64::new(1.0, 0.0); positions.len()];
    Ok(SweepSpec {
        axis,
        curves,
        theta0_deg: 0.0,
        positions,
        couplings,
        eta: 0.1,
        kmmnn: KVariant::default(),
        epsilon: crate::geoamp::AmplitudeOptions::default().epsilon,
    })
}

//! Parameter sweeps and their CSV representation.
//!
//! ```text
//! # tool=geoscatter
//! # version=0.1.0
//! # mode=kscan
//! # ...
//! ksigma,theta_deg,theta0_deg,re_f1,im_f1,xsec
//! # curve=0 theta_deg=5 lambda1=0.5 lambda2=-0.5
//! 1.0000000000000000e-2,5.0000000000000000e0,...
//! ```
//! Every parameter needed to rerun the sweep is in the header, and
//! [`SweepSpec::from_header`] reads it back.

use std::fmt::Write as _;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use super::parse::{format_complex, format_list, parse_complex, parse_f64, parse_list, Grid};
use crate::error::{Error, Result};
use crate::flatdefects::{DefectSet, Kinematics};
use crate::geoamp::{amplitude, AmplitudeOptions, ClosedFormOptions, KVariant};
use crate::surface::{BumpProfile, CurvatureCoefficients};

pub const COLUMNS: &str = "ksigma,theta_deg,theta0_deg,re_f1,im_f1,xsec";

/// Points closer than this to `θ₀` or `180° - θ₀` are moved.
pub const EXCLUSION_DEG: f64 = 1e-6;
/// Offset a moved point gets from the excluded angle.
pub const NUDGE_DEG: f64 = 9e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    /// `𝔎` varies; each curve fixes `θ`.
    K(Grid),
    /// `θ` (degrees) varies; each curve fixes `𝔎`.
    Theta(Grid),
}

impl Axis {
    fn mode(&self) -> &'static str {
        match self {
            Axis::K(_) => "kscan",
            Axis::Theta(_) => "anglescan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curve {
    /// `θ` in degrees for a k-scan, `𝔎` for an angle scan.
    pub fixed: f64,
    pub cc: CurvatureCoefficients,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub curves: Vec<Curve>,
    pub theta0_deg: f64,
    pub positions: Vec<f64>,
    pub couplings: Vec<Complex64>,
    pub eta: f64,
    pub kmmnn: KVariant,
    pub epsilon: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.curves.is_empty() {
            return Err(Error::invalid("a sweep needs at least one curve"));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::invalid(format!("eta must be finite and non-negative, got {}", self.eta)));
        }
        DefectSet::new(self.positions.clone(), self.couplings.clone())?;
        Kinematics::from_degrees(1.0, self.theta0_deg, 0.0)?;
        for c in &self.curves {
            if let Axis::Theta(_) = self.axis {
                if !(c.fixed > 0.0 && c.fixed.is_finite()) {
                    return Err(Error::invalid(format!("kσ must be positive, got {}", c.fixed)));
                }
            }
        }
        if let Axis::K(g) = self.axis {
            if g.lo <= 0.0 {
                return Err(Error::invalid(format!("kσ grid must be positive, starts at {}", g.lo)));
            }
        }
        Ok(())
    }

    fn options(&self) -> AmplitudeOptions {
        AmplitudeOptions {
            forms: ClosedFormOptions { kmmnn: self.kmmnn, ..Default::default() },
            epsilon: self.epsilon,
            ..Default::default()
        }
    }

    pub fn header(&self) -> String {
        let mut h = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(h, "# {k}={v}");
        };
        kv("tool", "geoscatter".into());
        kv("version", crate::VERSION.into());
        kv("mode", self.axis.mode().into());
        match self.axis {
            Axis::K(g) => kv("kgrid", g.to_string()),
            Axis::Theta(g) => kv("thetagrid", g.to_string()),
        }
        kv("theta0_deg", format!("{}", self.theta0_deg));
        kv("defects", format_list(&self.positions));
        kv("couplings", self.couplings.iter().map(|z| format_complex(*z)).collect::<Vec<_>>().join(","));
        kv("eta", format!("{}", self.eta));
        kv("kmmnn_variant", self.kmmnn.name().into());
        kv("regularization_eps", format!("{}", self.epsilon));
        kv("units", "sigma=1, hbar^2/2m=1, xsec=|f1|^2/sigma".into());
        if self.theta0_deg != 0.0 {
            kv("note", "printed-formula extrapolation (theta0 != 0)".into());
        }
        kv("curves", self.curves.len().to_string());
        h
    }

    fn curve_marker(&self, i: usize, c: &Curve) -> String {
        let fixed = match self.axis {
            Axis::K(_) => format!("theta_deg={}", c.fixed),
            Axis::Theta(_) => format!("ksigma={}", c.fixed),
        };
        format!("# curve={i} {fixed} lambda1={} lambda2={}\n", c.cc.lambda1, c.cc.lambda2)
    }

    /// Rebuilds the spec from a file written by [`run_sweep`].
    pub fn from_header(text: &str) -> Result<Self> {
        let mut kv = std::collections::BTreeMap::new();
        let mut curves = Vec::new();
        let mut mode = None;
        for (lineno, line) in text.lines().enumerate() {
            let Some(body) = line.strip_prefix("# ") else { continue };
            let loc = format!("line {}", lineno + 1);
            if body.starts_with("curve=") {
                let fields: std::collections::BTreeMap<&str, &str> =
                    body.split_whitespace().filter_map(|f| f.split_once('=')).collect();
                let get =
                    |k: &str| fields.get(k).ok_or_else(|| Error::parse(&loc, format!("curve marker lacks `{k}`")));
                let fixed = match mode {
                    Some("kscan") => parse_f64(get("theta_deg")?, "theta_deg")?,
                    Some("anglescan") => parse_f64(get("ksigma")?, "ksigma")?,
                    _ => return Err(Error::parse(&loc, "curve marker before `mode`")),
                };
                let cc = CurvatureCoefficients::new(
                    parse_f64(get("lambda1")?, "lambda1")?,
                    parse_f64(get("lambda2")?, "lambda2")?,
                )?;
                curves.push(Curve { fixed, cc });
            } else if let Some((k, v)) = body.split_once('=') {
                if k == "mode" {
                    mode = Some(if v == "kscan" {
                        "kscan"
                    } else if v == "anglescan" {
                        "anglescan"
                    } else {
                        "?"
                    });
                }
                kv.insert(k.to_string(), v.to_string());
            }
        }
        let get =
            |k: &str| kv.get(k).map(String::as_str).ok_or_else(|| Error::parse("header", format!("missing `{k}`")));
        let axis = match get("mode")? {
            "kscan" => Axis::K(get("kgrid")?.parse()?),
            "anglescan" => Axis::Theta(get("thetagrid")?.parse()?),
            m => return Err(Error::parse("header", format!("unknown mode `{m}`"))),
        };
        let couplings = get("couplings")?;
        let couplings = if couplings.is_empty() {
            Vec::new()
        } else {
            couplings.split(',').map(parse_complex).collect::<Result<_>>()?
        };
        let spec = SweepSpec {
            axis,
            curves,
            theta0_deg: parse_f64(get("theta0_deg")?, "theta0_deg")?,
            positions: parse_list(get("defects")?, "defects")?,
            couplings,
            eta: parse_f64(get("eta")?, "eta")?,
            kmmnn: get("kmmnn_variant")?.parse()?,
            epsilon: parse_f64(get("regularization_eps")?, "regularization_eps")?,
        };
        let declared: usize =
            get("curves")?.parse().map_err(|_| Error::parse("header", "`curves` is not an integer"))?;
        if declared != spec.curves.len() {
            return Err(Error::parse("header", format!("{declared} curves declared, {} found", spec.curves.len())));
        }
        Ok(spec)
    }
}

/// Moves angles within [`EXCLUSION_DEG`] of `θ₀` or `180° - θ₀` (mod 360°)
/// by [`NUDGE_DEG`], away from the excluded angle.
pub fn nudge_theta(theta_deg: f64, theta0_deg: f64) -> f64 {
    for excluded in [theta0_deg, 180.0 - theta0_deg] {
        let d = (theta_deg - excluded).rem_euclid(360.0);
        let d = if d > 180.0 { d - 360.0 } else { d };
        if d.abs() < EXCLUSION_DEG {
            let moved = theta_deg - d + if d < 0.0 { -NUDGE_DEG } else { NUDGE_DEG };
            warn!("theta = {theta_deg} deg lies on the support of f0; moved to {moved} deg");
            return moved;
        }
    }
    theta_deg
}

/// One computed row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub ksigma: f64,
    pub theta_deg: f64,
    pub theta0_deg: f64,
    pub f1: Complex64,
    pub xsec: f64,
}

fn axis_points(spec: &SweepSpec) -> Result<Vec<f64>> {
    match spec.axis {
        Axis::K(g) => Ok(g.points()),
        Axis::Theta(g) => {
            let pts: Vec<f64> = g.points().into_iter().map(|t| nudge_theta(t, spec.theta0_deg)).collect();
            if pts.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::invalid("θ grid too fine: nudging around the f0 support breaks monotonicity"));
            }
            Ok(pts)
        }
    }
}

/// Evaluates every curve, in grid order.
pub fn compute(spec: &SweepSpec) -> Result<Vec<Vec<Row>>> {
    spec.validate()?;
    if spec.theta0_deg != 0.0 {
        warn!(
            "theta0 = {} deg: the closed forms are evaluated as printed (defect positions not rotated)",
            spec.theta0_deg
        );
    }
    let defects = DefectSet::new(spec.positions.clone(), spec.couplings.clone())?;
    let bump = BumpProfile::from_eta(spec.eta)?;
    let opts = spec.options();
    let pts = axis_points(spec)?;
    let mut theta_fixed = spec.curves.iter().map(|c| c.fixed).collect::<Vec<_>>();
    if let Axis::K(_) = spec.axis {
        theta_fixed = theta_fixed.into_iter().map(|t| nudge_theta(t, spec.theta0_deg)).collect();
    }
    spec.curves
        .iter()
        .zip(&theta_fixed)
        .map(|(c, &fixed)| {
            pts.par_iter()
                .map(|&x| {
                    let (ksigma, theta_deg) = match spec.axis {
                        Axis::K(_) => (x, fixed),
                        Axis::Theta(_) => (c.fixed, x),
                    };
                    let k = Kinematics::from_degrees(ksigma, spec.theta0_deg, theta_deg)?;
                    let r = amplitude(&k, &defects, &bump, c.cc, &opts)?;
                    Ok(Row { ksigma, theta_deg, theta0_deg: spec.theta0_deg, f1: r.f1, xsec: r.cross_section })
                })
                .collect()
        })
        .collect()
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Full CSV text for a sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<String> {
    let curves = compute(spec)?;
    let mut out = spec.header();
    out.push_str(COLUMNS);
    out.push('\n');
    for (i, (c, rows)) in spec.curves.iter().zip(&curves).enumerate() {
        out.push_str(&spec.curve_marker(i, c));
        for r in rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                num(r.ksigma),
                num(r.theta_deg),
                num(r.theta0_deg),
                num(r.f1.re),
                num(r.f1.im),
                num(r.xsec)
            );
        }
    }
    Ok(out)
}

/// A curve read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveData {
    pub marker: String,
    pub rows: Vec<[f64; 6]>,
}

/// Mode plus curves of a sweep file.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepData {
    pub mode: String,
    pub curves: Vec<CurveData>,
}

pub fn read_sweep(text: &str) -> Result<SweepData> {
    let mut mode = None;
    let mut curves: Vec<CurveData> = Vec::new();
    let mut seen_columns = false;
    for (lineno, line) in text.lines().enumerate() {
        let loc = format!("line {}", lineno + 1);
        if let Some(body) = line.strip_prefix("# ") {
            if let Some(m) = body.strip_prefix("mode=") {
                mode = Some(m.to_string());
            } else if body.starts_with("curve=") {
                curves.push(CurveData { marker: body.to_string(), rows: Vec::new() });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if line == COLUMNS {
            seen_columns = true;
            continue;
        }
        if !seen_columns {
            return Err(Error::parse(&loc, "data before the column line"));
        }
        let vals: Vec<f64> = line
            .split(',')
            .enumerate()
            .map(|(i, v)| parse_f64(v, &format!("column {}", i + 1)).map_err(|e| Error::parse(&loc, e.to_string())))
            .collect::<Result<_>>()?;
        let row: [f64; 6] =
            vals.try_into().map_err(|v: Vec<f64>| Error::parse(&loc, format!("expected 6 fields, got {}", v.len())))?;
        match curves.last_mut() {
            Some(c) => c.rows.push(row),
            None => curves.push(CurveData { marker: "curve=0".into(), rows: vec![row] }),
        }
    }
    let mode = mode.ok_or_else(|| Error::parse("header", "missing `mode`"))?;
    Ok(SweepData { mode, curves })
}

//! Adaptive tensor-panel Gauss–Legendre quadrature.
//!
//! A panel is accepted when its rule agrees with the sum over its children
//! (4 in 2D, 2 in 1D) to within its share of the tolerance or a roundoff
//! floor. Top-level panels run in parallel and are summed in panel order.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Half-width of the integration square; `None` picks `8 + max|α| + 4`.
    pub r_max: Option<f64>,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub panel_order: usize,
    /// Upper bound on the width of a top-level panel.
    pub max_panel: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { r_max: None, rel_tol: 1e-8, max_depth: 8, panel_order: 16, max_panel: 2.0 }
    }
}

impl QuadratureSpec {
    pub fn radius(&self, max_abs_alpha: f64) -> f64 {
        self.r_max.unwrap_or(8.0 + max_abs_alpha + 4.0)
    }
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
}

impl std::ops::Add for QuadResult {
    type Output = QuadResult;

    fn add(self, o: QuadResult) -> QuadResult {
        QuadResult { value: self.value + o.value, error: self.error + o.error }
    }
}

const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    fn new(order: usize) -> Result<Self> {
        let n = NonZeroUsize::new(order).ok_or_else(|| Error::invalid("panel order must be positive"))?;
        let gl = GaussLegendre::new(n);
        let (nodes, weights) = gl.as_node_weight_pairs().iter().copied().unzip();
        Ok(Self { nodes, weights })
    }

    fn map(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, h * w))
    }
}

/// Sorted breakpoints covering `[lo, hi]`, including `extra` points inside and
/// with no gap wider than `max_gap`.
pub fn breakpoints(lo: f64, hi: f64, extra: &[f64], max_gap: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = std::iter::once(lo)
        .chain(std::iter::once(hi))
        .chain(extra.iter().copied().filter(|p| *p > lo && *p < hi))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut out = vec![pts[0]];
    for w in pts.windows(2) {
        let pieces = ((w[1] - w[0]) / max_gap).ceil().max(1.0) as usize;
        for i in 1..=pieces {
            out.push(if i == pieces { w[1] } else { w[0] + (w[1] - w[0]) * i as f64 / pieces as f64 });
        }
    }
    out
}

#[derive(Clone, Copy)]
struct Estimate {
    value: Complex64,
    l1: f64,
}

fn rule_1d<F: Fn(f64) -> Complex64>(f: &F, rule: &Rule, a: f64, b: f64) -> Estimate {
    let mut acc = CompensatedSum::new();
    let mut l1 = 0.0;
    for (x, w) in rule.map(a, b) {
        let v = f(x) * w;
        l1 += v.norm();
        acc.add(v);
    }
    Estimate { value: acc.value(), l1 }
}

fn rule_2d<F: Fn(f64, f64) -> Complex64>(f: &F, rule: &Rule, x: (f64, f64), y: (f64, f64)) -> Estimate {
    let mut acc = CompensatedSum::new();
    let mut l1 = 0.0;
    for (xi, wx) in rule.map(x.0, x.1) {
        for (yj, wy) in rule.map(y.0, y.1) {
            let v = f(xi, yj) * (wx * wy);
            l1 += v.norm();
            acc.add(v);
        }
    }
    Estimate { value: acc.value(), l1 }
}

struct Outcome {
    value: Complex64,
    error: f64,
    converged: bool,
}

fn refine_1d<F: Fn(f64) -> Complex64>(
    f: &F,
    rule: &Rule,
    a: f64,
    b: f64,
    coarse: Estimate,
    tol: f64,
    depth: u32,
    max_depth: u32,
) -> Outcome {
    let m = 0.5 * (a + b);
    let kids = [rule_1d(f, rule, a, m), rule_1d(f, rule, m, b)];
    let fine = kids[0].value + kids[1].value;
    let err = (fine - coarse.value).norm();
    let floor = ROUNDOFF * (kids[0].l1 + kids[1].l1);
    if err <= tol.max(floor) {
        return Outcome { value: fine, error: err.max(floor), converged: true };
    }
    if depth >= max_depth {
        return Outcome { value: fine, error: err, converged: false };
    }
    let l = refine_1d(f, rule, a, m, kids[0], 0.5 * tol, depth + 1, max_depth);
    let r = refine_1d(f, rule, m, b, kids[1], 0.5 * tol, depth + 1, max_depth);
    Outcome { value: l.value + r.value, error: l.error + r.error, converged: l.converged && r.converged }
}

#[allow(clippy::too_many_arguments)]
fn refine_2d<F: Fn(f64, f64) -> Complex64>(
    f: &F,
    rule: &Rule,
    x: (f64, f64),
    y: (f64, f64),
    coarse: Estimate,
    tol: f64,
    depth: u32,
    max_depth: u32,
) -> Outcome {
    let xm = 0.5 * (x.0 + x.1);
    let ym = 0.5 * (y.0 + y.1);
    let quads = [((x.0, xm), (y.0, ym)), ((xm, x.1), (y.0, ym)), ((x.0, xm), (ym, y.1)), ((xm, x.1), (ym, y.1))];
    let kids: Vec<Estimate> = quads.iter().map(|&(qx, qy)| rule_2d(f, rule, qx, qy)).collect();
    let fine: Complex64 = kids.iter().map(|k| k.value).sum();
    let err = (fine - coarse.value).norm();
    let floor = ROUNDOFF * kids.iter().map(|k| k.l1).sum::<f64>();
    if err <= tol.max(floor) {
        return Outcome { value: fine, error: err.max(floor), converged: true };
    }
    if depth >= max_depth {
        return Outcome { value: fine, error: err, converged: false };
    }
    let mut acc = CompensatedSum::new();
    let mut error = 0.0;
    let mut converged = true;
    for (&(qx, qy), &kid) in quads.iter().zip(&kids) {
        let o = refine_2d(f, rule, qx, qy, kid, 0.25 * tol, depth + 1, max_depth);
        acc.add(o.value);
        error += o.error;
        converged &= o.converged;
    }
    Outcome { value: acc.value(), error, converged }
}

/// Shared driver: coarse pass, tolerance allocation, parallel refinement.
fn drive<P, C, R>(panels: &[P], spec: &QuadratureSpec, coarse: C, refine: R) -> Result<QuadResult>
where
    P: Sync,
    C: Fn(&P) -> Estimate + Sync,
    R: Fn(&P, Estimate, f64) -> Outcome + Sync,
{
    let first: Vec<Estimate> = panels.par_iter().map(&coarse).collect();
    let total_l1: f64 = first.iter().map(|e| e.l1).sum();
    let total: Complex64 = first.iter().map(|e| e.value).sum();
    if total_l1 == 0.0 {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0 });
    }
    let target = spec.rel_tol * total.norm().max(1e-3 * total_l1);
    let share = 1e-3 * target / panels.len() as f64;
    let outcomes: Vec<Outcome> = panels
        .par_iter()
        .zip(first.par_iter())
        .map(|(p, est)| refine(p, *est, target * est.l1 / total_l1 + share))
        .collect();
    let mut acc = CompensatedSum::new();
    let mut error = 0.0;
    let mut converged = true;
    for o in &outcomes {
        acc.add(o.value);
        error += o.error;
        converged &= o.converged;
    }
    if !converged && error > 10.0 * target {
        return Err(Error::NonConvergence { estimate: error, target });
    }
    Ok(QuadResult { value: acc.value(), error })
}

/// `∫ f(x) dx` over `[a, b]`, with mandatory breaks at `breaks`.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, breaks: &[f64], spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let rule = Rule::new(spec.panel_order)?;
    let pts = breakpoints(a, b, breaks, spec.max_panel);
    let panels: Vec<(f64, f64)> = pts.windows(2).map(|w| (w[0], w[1])).collect();
    drive(
        &panels,
        spec,
        |&(a, b)| rule_1d(&f, &rule, a, b),
        |&(a, b), est, tol| refine_1d(&f, &rule, a, b, est, tol, 0, spec.max_depth),
    )
}

/// `∫∫ f(x, y) dx dy` over a rectangle with mandatory break lines.
pub fn integrate_2d<F>(
    f: F,
    x: (f64, f64),
    y: (f64, f64),
    x_breaks: &[f64],
    y_breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let rule = Rule::new(spec.panel_order)?;
    let xs = breakpoints(x.0, x.1, x_breaks, spec.max_panel);
    let ys = breakpoints(y.0, y.1, y_breaks, spec.max_panel);
    let mut panels = Vec::with_capacity((xs.len() - 1) * (ys.len() - 1));
    for wx in xs.windows(2) {
        for wy in ys.windows(2) {
            panels.push(((wx[0], wx[1]), (wy[0], wy[1])));
        }
    }
    drive(
        &panels,
        spec,
        |&(px, py)| rule_2d(&f, &rule, px, py),
        |&(px, py), est, tol| refine_2d(&f, &rule, px, py, est, tol, 0, spec.max_depth),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breakpoints_respect_kinks_and_gaps() {
        let b = breakpoints(-5.0, 5.0, &[0.0, 3.0, 7.0], 2.0);
        assert!(b.contains(&0.0) && b.contains(&3.0) && !b.contains(&7.0));
        assert!(b.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= 2.0 + 1e-12));
        assert_eq!((b[0], *b.last().unwrap()), (-5.0, 5.0));
    }

    #[test]
    fn gaussian_1d() {
        let r = integrate_1d(|x| Complex64::new((-x * x).exp(), 0.0), -10.0, 10.0, &[], &QuadratureSpec::default())
            .unwrap();
        assert!((r.value.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn kinked_oscillatory_2d() {
        // ∫∫ e^{-x²-y²} e^{i|x-1|} dx dy, reference by splitting at the kink in 1D.
        let spec = QuadratureSpec::default();
        let f = |x: f64, y: f64| Complex64::from_polar((-x * x - y * y).exp(), (x - 1.0).abs());
        let r = integrate_2d(f, (-9.0, 9.0), (-9.0, 9.0), &[1.0], &[0.0], &spec).unwrap();
        let gx =
            integrate_1d(|x| Complex64::from_polar((-x * x).exp(), (x - 1.0).abs()), -9.0, 9.0, &[1.0], &spec).unwrap();
        let reference = gx.value * std::f64::consts::PI.sqrt();
        assert!((r.value - reference).norm() < 1e-13);
        assert!(r.error < 1e-8);
    }

    #[test]
    fn unresolvable_integrand_reports_non_convergence() {
        let spec = QuadratureSpec { max_depth: 2, ..Default::default() };
        let r = integrate_1d(|x| Complex64::new((1.0 / (x.abs() + 1e-12)).sin(), 0.0), -1.0, 1.0, &[0.3], &spec);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}

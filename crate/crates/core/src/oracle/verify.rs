use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::integrals::{integrate_i0, integrate_immnn_core, integrate_imn, integrate_jmn, OraclePoint};
use super::quadrature::{QuadResult, QuadratureSpec};
use crate::error::Result;
use crate::geoamp::{
    i0_closed, immnn_closed, imn_closed, jmn_closed, ClosedFormOptions, GeoCoefficientInputs, KVariant, Transcription,
};
use crate::surface::CurvatureCoefficients;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridKind {
    #[default]
    Full,
    Reduced,
}

impl GridKind {
    pub fn s_values(&self) -> &'static [f64] {
        match self {
            GridKind::Full => &[0.0, 0.3, 0.7, 1.0],
            GridKind::Reduced => &[0.3, 1.0],
        }
    }

    pub fn k_values(&self) -> &'static [f64] {
        match self {
            GridKind::Full => &[0.5, 1.0, 2.0],
            GridKind::Reduced => &[0.5, 2.0],
        }
    }

    pub fn lambdas(&self) -> Vec<CurvatureCoefficients> {
        match self {
            GridKind::Full => CurvatureCoefficients::FIGURE_SET.to_vec(),
            GridKind::Reduced => vec![CurvatureCoefficients::FIGURE_SET[0], CurvatureCoefficients::FIGURE_SET[3]],
        }
    }

    pub fn alphas(&self) -> &'static [f64] {
        &[-3.0, 0.0, 3.0]
    }
}

/// Relative tolerance, switching to an absolute one for tiny magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
    /// Below this oracle magnitude the absolute tolerance applies.
    pub small: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 1e-6, abs: 1e-10, small: 1e-8 }
    }
}

impl Tolerances {
    /// `(relative error, absolute error, pass)`.
    pub fn judge(&self, closed: Complex64, oracle: Complex64) -> (f64, f64, bool) {
        let abs = (closed - oracle).norm();
        let rel = if oracle.norm() > 0.0 { abs / oracle.norm() } else { abs };
        let pass = if oracle.norm() < self.small { abs <= self.abs } else { rel <= self.rel };
        (rel, abs, pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub grid: GridKind,
    pub tolerances: Tolerances,
    pub quadrature: QuadratureSpec,
    pub forms: ClosedFormOptions,
    pub eta: f64,
    /// Also compare the alternative transcriptions against the oracle.
    pub probes: bool,
    /// Also check that the oracle halves when `η` does.
    pub linearity: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid: GridKind::Full,
            tolerances: Tolerances::default(),
            quadrature: QuadratureSpec::default(),
            forms: ClosedFormOptions::default(),
            eta: 0.1,
            probes: true,
            linearity: true,
        }
    }
}

/// One line of the report.
///
/// `kind` is `check` (counts toward the verdict), `probe` (an alternative
/// transcription, informational) or `linearity`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub kind: &'static str,
    pub coefficient: &'static str,
    pub variant: String,
    pub alphas: Vec<f64>,
    pub s: f64,
    pub big_k: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub eta: f64,
    pub closed: [f64; 2],
    pub oracle: [f64; 2],
    pub error_estimate: f64,
    pub rel_err: f64,
    pub abs_err: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub records: Vec<CheckRecord>,
}

impl VerifyReport {
    fn counted(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.kind != "probe")
    }

    pub fn checks(&self) -> usize {
        self.counted().count()
    }

    pub fn failures(&self) -> usize {
        self.counted().filter(|r| !r.pass).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// `(variant, matched, total)` for every probed transcription, plus the
    /// forms under test.
    pub fn variant_summary(&self) -> Vec<(String, usize, usize)> {
        let mut out: Vec<(String, usize, usize)> = Vec::new();
        for r in self.records.iter().filter(|r| r.kind != "linearity") {
            let key = format!("{}:{}", r.coefficient, r.variant);
            match out.iter_mut().find(|(k, _, _)| *k == key) {
                Some(e) => {
                    e.1 += r.pass as usize;
                    e.2 += 1;
                }
                None => out.push((key, r.pass as usize, 1)),
            }
        }
        out
    }

    /// One JSON object per record, then a summary object.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            writeln!(w)?;
        }
        let variants: Vec<serde_json::Value> = self
            .variant_summary()
            .into_iter()
            .map(|(v, m, t)| serde_json::json!({ "variant": v, "matched": m, "total": t }))
            .collect();
        let summary = serde_json::json!({
            "kind": "summary",
            "checks": self.checks(),
            "failures": self.failures(),
            "pass": self.passed(),
            "variants": variants,
        });
        serde_json::to_writer(&mut w, &summary)?;
        writeln!(w)
    }
}

#[derive(Debug, Clone, Copy)]
enum Job {
    I0,
    Imn(f64, f64),
    Jmn(f64, f64),
    ImmCore(f64, f64),
}

#[derive(Debug, Clone, Copy)]
struct Task {
    job: Job,
    point: OraclePoint,
}

fn run(task: &Task, spec: &QuadratureSpec) -> Result<QuadResult> {
    let p = &task.point;
    match task.job {
        Job::I0 => integrate_i0(p, spec),
        Job::Imn(a, b) => integrate_imn(a, b, p, spec),
        Job::Jmn(a, b) => integrate_jmn(a, b, p, spec),
        Job::ImmCore(a, b) => integrate_immnn_core(a, b, p, spec),
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

struct Builder<'a> {
    cfg: &'a VerifyConfig,
    records: Vec<CheckRecord>,
}

impl Builder<'_> {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        kind: &'static str,
        coefficient: &'static str,
        variant: &str,
        alphas: Vec<f64>,
        p: &OraclePoint,
        closed: Complex64,
        oracle: &QuadResult,
    ) {
        let (rel_err, abs_err, pass) = self.cfg.tolerances.judge(closed, oracle.value);
        self.records.push(CheckRecord {
            kind,
            coefficient,
            variant: variant.to_string(),
            alphas,
            s: p.s,
            big_k: p.big_k,
            lambda1: p.cc.lambda1,
            lambda2: p.cc.lambda2,
            eta: p.eta,
            closed: pair(closed),
            oracle: pair(oracle.value),
            error_estimate: oracle.error,
            rel_err,
            abs_err,
            pass,
        });
    }
}

fn variant_label(o: &ClosedFormOptions, coefficient: &str) -> String {
    let t = |x: Transcription| match x {
        Transcription::Validated => "validated",
        Transcription::AsPrinted => "printed",
    };
    match coefficient {
        "Imn" => t(o.imn).to_string(),
        "Jmn" if o.inject_fault => "fault".to_string(),
        "Immnn" => format!("k={},h={}", o.kmmnn.name(), t(o.h)),
        _ => "closed".to_string(),
    }
}

/// Runs the oracle over the grid and compares every coefficient.
pub fn verify_all(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let g = cfg.grid;
    let al = g.alphas();
    let mut points = Vec::new();
    for &s in g.s_values() {
        for &big_k in g.k_values() {
            for cc in g.lambdas() {
                points.push(OraclePoint { s, big_k, eta: cfg.eta, cc });
            }
        }
    }
    let mut tasks = Vec::new();
    for p in &points {
        tasks.push(Task { job: Job::I0, point: *p });
        for &a in al {
            for &b in al {
                tasks.push(Task { job: Job::Imn(a, b), point: *p });
                tasks.push(Task { job: Job::Jmn(a, b), point: *p });
                tasks.push(Task { job: Job::ImmCore(a, b), point: *p });
            }
        }
    }
    let halved: Vec<Task> = if cfg.linearity {
        points
            .iter()
            .flat_map(|p| {
                let q = OraclePoint { eta: 0.5 * p.eta, ..*p };
                [Task { job: Job::I0, point: q }, Task { job: Job::Jmn(-3.0, 3.0), point: q }]
            })
            .collect()
    } else {
        Vec::new()
    };

    let spec = cfg.quadrature;
    let results: Vec<QuadResult> = tasks.par_iter().map(|t| run(t, &spec)).collect::<Result<_>>()?;
    let halved_results: Vec<QuadResult> = halved.par_iter().map(|t| run(t, &spec)).collect::<Result<_>>()?;

    let forms = cfg.forms;
    let printed_imn = ClosedFormOptions { imn: Transcription::AsPrinted, ..forms };
    let printed_h = ClosedFormOptions { h: Transcription::AsPrinted, ..forms };
    let other_k = ClosedFormOptions {
        kmmnn: match forms.kmmnn {
            KVariant::Kappa2 => KVariant::X2,
            KVariant::X2 => KVariant::Kappa2,
        },
        ..forms
    };

    let mut b = Builder { cfg, records: Vec::new() };
    let mut i0_oracle = Vec::new();
    let mut j_oracle = Vec::new();
    for (task, res) in tasks.iter().zip(&results) {
        let p = &task.point;
        let inputs = |alphas: Vec<f64>| GeoCoefficientInputs::new(p.s, p.big_k, alphas, p.eta, p.cc);
        match task.job {
            Job::I0 => {
                let v = i0_closed(&inputs(vec![])?);
                b.push("check", "I0", &variant_label(&forms, "I0"), vec![], p, v, res);
                i0_oracle.push(*res);
            }
            Job::Imn(am, an) => {
                let inp = inputs(vec![am, an])?;
                b.push(
                    "check",
                    "Imn",
                    &variant_label(&forms, "Imn"),
                    vec![am, an],
                    p,
                    imn_closed(0, 1, &inp, &forms)?,
                    res,
                );
                if cfg.probes {
                    let v = imn_closed(0, 1, &inp, &printed_imn)?;
                    b.push("probe", "Imn", &variant_label(&printed_imn, "Imn"), vec![am, an], p, v, res);
                }
            }
            Job::Jmn(am, an) => {
                let inp = inputs(vec![am, an])?;
                b.push(
                    "check",
                    "Jmn",
                    &variant_label(&forms, "Jmn"),
                    vec![am, an],
                    p,
                    jmn_closed(0, 1, &inp, &forms)?,
                    res,
                );
                if am == -3.0 && an == 3.0 {
                    j_oracle.push(*res);
                }
            }
            Job::ImmCore(am, an) => {
                for &amp in al {
                    for &anp in al {
                        let inp = inputs(vec![am, amp, an, anp])?;
                        let e = Complex64::from_polar(1.0, p.s * p.big_k * (amp + anp));
                        let oracle = QuadResult { value: res.value * e, error: res.error };
                        let alphas = vec![am, amp, an, anp];
                        let v = immnn_closed(0, 1, 2, 3, &inp, &forms)?;
                        b.push("check", "Immnn", &variant_label(&forms, "Immnn"), alphas.clone(), p, v, &oracle);
                        if cfg.probes {
                            // h enters only when am > an, the k piece only when am <= an.
                            let alt = if am > an { printed_h } else { other_k };
                            let v = immnn_closed(0, 1, 2, 3, &inp, &alt)?;
                            b.push("probe", "Immnn", &variant_label(&alt, "Immnn"), alphas, p, v, &oracle);
                        }
                    }
                }
            }
        }
    }
    for (i, task) in halved.iter().enumerate() {
        let full = if i % 2 == 0 { i0_oracle[i / 2] } else { j_oracle[i / 2] };
        let (name, alphas) = if i % 2 == 0 { ("I0", vec![]) } else { ("Jmn", vec![-3.0, 3.0]) };
        let half = &halved_results[i];
        let res = QuadResult { value: 0.5 * full.value, error: 0.5 * full.error + half.error };
        b.push("linearity", name, "eta/2", alphas, &task.point, half.value, &res);
    }
    Ok(VerifyReport { records: b.records })
}

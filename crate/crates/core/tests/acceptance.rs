//! One PASS/FAIL line per acceptance criterion.

use std::f64::consts::PI;
use std::time::Instant;

use geoscatter::cli::feasibility::{check_feasibility, FeasibilityInput};
use geoscatter::cli::presets::{preset, PRESETS};
use geoscatter::cli::sweep::run_sweep;
use geoscatter::flatdefects::{t_coefficients, DefectSet, FlatSolution, Kinematics};
use geoscatter::geoamp::{f1_geometric, i0_closed, peak_over_k, AmplitudeOptions, GeoCoefficientInputs};
use geoscatter::oracle::{integrate_i0, verify_all, GridKind, OraclePoint, QuadratureSpec, VerifyConfig};
use geoscatter::surface::{BumpProfile, CurvatureCoefficients};
use geoscatter::{Complex64, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TL: CurvatureCoefficients = CurvatureCoefficients::THIN_LAYER;

type Outcome = Result<(bool, String)>;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn oracle_equivalence() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (grid, budget) in [(GridKind::Reduced, 300.0), (GridKind::Full, 3600.0)] {
        let t = Instant::now();
        let report = verify_all(&VerifyConfig { grid, ..Default::default() })?;
        let secs = t.elapsed().as_secs_f64();
        ok &= report.passed() && secs <= budget;
        lines.push(format!(
            "{grid:?}: {} checks, {} failures, {secs:.1} s (budget {budget} s)",
            report.checks(),
            report.failures()
        ));
    }
    Ok((ok, lines.join("; ")))
}

fn i0_substitutions() -> Outcome {
    let q = QuadratureSpec::default();
    let eta = 0.1;
    let mut worst_closed = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let mut cases = Vec::new();
    for big_k in [0.5, 1.0, 2.0] {
        cases.push((
            0.0,
            big_k,
            CurvatureCoefficients::new(0.0, 0.0)?,
            Complex64::new(-PI * eta * big_k * big_k / 2.0, 0.0),
        ));
    }
    cases.push((1.0, 1.0, TL, Complex64::new(-PI * eta * (-1.0f64).exp() / 4.0, 0.0)));
    for (s, big_k, cc, want) in cases {
        let closed = i0_closed(&GeoCoefficientInputs::new(s, big_k, vec![], eta, cc)?);
        let oracle = integrate_i0(&OraclePoint { s, big_k, eta, cc }, &q)?.value;
        worst_closed = worst_closed.max(rel(closed, want));
        worst_oracle = worst_oracle.max(rel(oracle, want));
    }
    Ok((
        worst_closed <= 1e-12 && worst_oracle <= 1e-6,
        format!("closed vs substitution {worst_closed:.2e} (tol 1e-12), oracle {worst_oracle:.2e} (tol 1e-6)"),
    ))
}

fn random_defects(rng: &mut ChaCha8Rng, n: usize) -> Result<DefectSet> {
    let mut pos: Vec<f64> = Vec::with_capacity(n);
    while pos.len() < n {
        let a = rng.random_range(-5.0..5.0);
        if pos.iter().all(|p: &f64| (p - a).abs() > 0.05) {
            pos.push(a);
        }
    }
    let z = (0..n).map(|_| Complex64::new(rng.random_range(0.1..10.0), 0.0)).collect();
    DefectSet::new(pos, z)
}

fn unitarity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let d = random_defects(&mut rng, n)?;
        let kx: f64 = rng.random_range(0.2..5.0);
        let theta0: f64 = rng.random_range(-1.2..1.2);
        let k = Kinematics::new(kx / theta0.cos(), theta0, 1.0)?;
        worst = worst.max((t_coefficients(&k, &d)?.unitarity() - 1.0).abs());
    }
    Ok((worst <= 1e-10, format!("200 configurations, worst ||1+t+|^2+|t-|^2-1| = {worst:.2e} (tol 1e-10)")))
}

fn exact_structure() -> Outcome {
    let big_k = 4.0;
    let k = Kinematics::new(big_k, 0.3, 1.0)?;
    let d = DefectSet::uniform(&[-1.0, 0.5, 2.0], 1.5)?;
    let sol = FlatSolution::new(&k, &d)?;
    let residual = |x: f64, y: f64, h: f64| {
        let p = |dx: f64, dy: f64| sol.psi0(x + dx, y + dy);
        let lap = (p(h, 0.0) + p(-h, 0.0) + p(0.0, h) + p(0.0, -h) - 4.0 * p(0.0, 0.0)) / (h * h);
        (lap + big_k * big_k * p(0.0, 0.0)).norm()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut worst, mut min_ratio, mut n) = (0.0f64, f64::INFINITY, 0);
    while n < 40 {
        let (x, y) = (rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
        if d.positions().iter().any(|a| (x - a).abs() <= 0.1) {
            continue;
        }
        let fine = residual(x, y, 1e-4);
        worst = worst.max(fine);
        min_ratio = min_ratio.min(residual(x, y, 1e-3) / fine);
        n += 1;
    }
    let mut worst_jump = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let d = random_defects(&mut rng, n)?;
        let kx: f64 = rng.random_range(0.2..5.0);
        let sol = FlatSolution::new(&Kinematics::new(kx, 0.0, 1.0)?, &d)?;
        for (a, z) in d.positions().iter().zip(d.couplings()) {
            let jump = sol.chi_derivative(*a, 1.0) - sol.chi_derivative(*a, -1.0);
            let want = z * sol.chi(*a);
            worst_jump = worst_jump.max((jump - want).norm() / want.norm().max(1.0));
        }
    }
    // O(h²) means a tenfold smaller step cuts the residual about a hundredfold.
    Ok((
        worst <= 1e-6 && min_ratio > 30.0 && worst_jump <= 1e-8,
        format!("residual {worst:.2e} (tol 1e-6), min h-ratio {min_ratio:.1} (want ~100), jump error {worst_jump:.2e} (tol 1e-8)"),
    ))
}

fn peak(pos: &[f64]) -> Result<f64> {
    let d = DefectSet::uniform(pos, 1.0)?;
    let b = BumpProfile::from_eta(0.1)?;
    Ok(peak_over_k(0.0, 30f64.to_radians(), &d, &b, TL, (0.01, 5.0), 250, &AmplitudeOptions::default())?.cross_section)
}

fn amplification() -> Outcome {
    let (bare, sym, left, right) = (peak(&[])?, peak(&[-3.0, 3.0])?, peak(&[-3.0, 0.0])?, peak(&[0.0, 3.0])?);
    let ratio = sym / bare;
    Ok((
        (10.0..=1000.0).contains(&ratio) && sym > left && sym > right,
        format!("peak ratio ±3 / none = {ratio:.2} (band [10, 1000]); ±3 {sym:.4}, (-3,0) {left:.4}, (0,3) {right:.4}"),
    ))
}

fn placement() -> Outcome {
    let (l, c, r) = (peak(&[-3.0])?, peak(&[0.0])?, peak(&[3.0])?);
    Ok((l > c && r > c, format!("peaks: alpha=-3 {l:.5}, alpha=0 {c:.5}, alpha=3 {r:.5}")))
}

fn feasibility() -> Outcome {
    let sigma = FeasibilityInput::unit_coupling_sigma(1.0, 1.0, 0.01);
    let r = check_feasibility(&FeasibilityInput { v0: 1.0, rho: 1.0, mass_ratio: 0.01, energy: 1e-3, sigma })?;
    Ok(((0.015..=0.025).contains(&r.k_rho), format!("k rho = {:.5} (band [0.015, 0.025])", r.k_rho)))
}

fn linearity_and_limits() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_lin, mut worst_weak, mut zero_ok) = (0.0f64, 0.0f64, true);
    let flat = BumpProfile::from_eta(0.0)?;
    for _ in 0..50 {
        let pos: Vec<f64> =
            (0..rng.random_range(1..=3)).map(|i| -3.0 + 3.0 * i as f64 + rng.random_range(0.0..0.5)).collect();
        let k = Kinematics::from_degrees(rng.random_range(0.3..4.0), 0.0, rng.random_range(5.0..85.0))?;
        let d = DefectSet::uniform(&pos, 1.0)?;
        let f1 = f1_geometric(&k, &d, &BumpProfile::from_eta(0.05)?, TL)?;
        let f2 = f1_geometric(&k, &d, &BumpProfile::from_eta(0.1)?, TL)?;
        worst_lin = worst_lin.max((f2 / f1 - 2.0).norm());
        let weak = f1_geometric(&k, &DefectSet::uniform(&pos, 1e-9)?, &BumpProfile::from_eta(0.1)?, TL)?;
        let bare = f1_geometric(&k, &DefectSet::empty(), &BumpProfile::from_eta(0.1)?, TL)?;
        worst_weak = worst_weak.max(rel(weak, bare));
        zero_ok &= f1_geometric(&k, &d, &flat, TL)? == Complex64::new(0.0, 0.0);
    }
    Ok((
        worst_lin <= 8.0 * f64::EPSILON && worst_weak <= 1e-6 && zero_ok,
        format!(
            "|f1(2eta)/f1(eta) - 2| = {worst_lin:.1e} (tol 8 eps), z->0 rel {worst_weak:.1e} (tol 1e-6), eta=0 exactly zero: {zero_ok}"
        ),
    ))
}

fn determinism() -> Outcome {
    let mut same = true;
    for name in PRESETS {
        let spec = preset(name, Some(24))?;
        same &= run_sweep(&spec)? == run_sweep(&spec)?;
    }
    Ok((same, format!("{} presets run twice at 24 points, byte-identical: {same}", PRESETS.len())))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("I0 closed form", i0_substitutions),
        ("flat-defect unitarity", unitarity),
        ("exact-solution structure", exact_structure),
        ("amplification", amplification),
        ("single-defect placement", placement),
        ("feasibility numbers", feasibility),
        ("eta-linearity and limits", linearity_and_limits),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += !pass as usize;
        println!("{} {}. {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

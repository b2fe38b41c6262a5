use std::f64::consts::PI;

use geoscatter::flatdefects::{DefectSet, Kinematics};
use geoscatter::geoamp::{
    amplitude, cross_section, f1_geometric, peak_over_k, AmplitudeOptions, ClosedFormOptions, KVariant,
};
use geoscatter::surface::{BumpProfile, CurvatureCoefficients};
use geoscatter::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TL: CurvatureCoefficients = CurvatureCoefficients::THIN_LAYER;

fn bump(eta: f64) -> BumpProfile {
    BumpProfile::from_eta(eta).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn frozen_amplitudes() {
    let k = Kinematics::from_degrees(1.0, 0.0, 30.0).unwrap();
    let d = DefectSet::uniform(&[-3.0, 3.0], 1.0).unwrap();
    let f = f1_geometric(&k, &d, &bump(0.1), TL).unwrap();
    assert!(rel(f, Complex64::new(0.034056621782354246, 0.008486580066139027)) < 1e-12);

    let k = Kinematics::from_degrees(1.3, 0.0, 45.0).unwrap();
    let d = DefectSet::uniform(&[3.0], 1.0).unwrap();
    let f = f1_geometric(&k, &d, &bump(0.1), TL).unwrap();
    assert!(rel(f, Complex64::new(0.04570050617048562, 0.034544737477600666)) < 1e-12);

    let k = Kinematics::from_degrees(1.0, 0.0, 180.0).unwrap();
    let f = f1_geometric(&k, &DefectSet::empty(), &bump(0.1), TL).unwrap();
    let want = -0.5 * Complex64::from_polar(1.0, PI / 4.0) / (2.0 * PI).sqrt() * (-0.025 * PI * (-1.0f64).exp());
    assert!(rel(f, want) < 1e-14);
}

#[test]
fn eta_linearity_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let n = rng.random_range(0..=4);
        let pos: Vec<f64> = (0..n).map(|i| -4.0 + 2.5 * i as f64 + rng.random_range(0.0..1.0)).collect();
        let d = DefectSet::uniform(&pos, rng.random_range(0.2..3.0)).unwrap();
        let k = Kinematics::from_degrees(rng.random_range(0.2..4.0), 0.0, rng.random_range(5.0..85.0)).unwrap();
        let cc = CurvatureCoefficients::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)).unwrap();
        // Powers of two keep η·(…) bit-exact under doubling.
        let f1 = f1_geometric(&k, &d, &bump(0.0625), cc).unwrap();
        let f2 = f1_geometric(&k, &d, &bump(0.125), cc).unwrap();
        assert!((f2 - 2.0 * f1).norm() <= 4.0 * f64::EPSILON * f2.norm());
    }
}

#[test]
fn flat_plane_gives_nothing() {
    let d = DefectSet::uniform(&[-3.0, 3.0], 1.0).unwrap();
    for theta in [10.0, 60.0, 135.0, 250.0] {
        let k = Kinematics::from_degrees(1.7, 0.0, theta).unwrap();
        assert_eq!(cross_section(&k, &d, &bump(0.0), TL).unwrap(), 0.0);
    }
}

#[test]
fn weak_couplings_recover_the_bare_bump() {
    let d = DefectSet::uniform(&[-3.0, 0.5, 3.0], 1e-8).unwrap();
    for theta in [20.0, 70.0, 160.0] {
        let k = Kinematics::from_degrees(1.2, 0.0, theta).unwrap();
        let bare = f1_geometric(&k, &DefectSet::empty(), &bump(0.1), TL).unwrap();
        let weak = f1_geometric(&k, &d, &bump(0.1), TL).unwrap();
        assert!(rel(weak, bare) <= 1e-6, "theta {theta}: {weak} vs {bare}");
    }
}

#[test]
fn negligible_second_defect() {
    let one = DefectSet::uniform(&[1.5], 1.0).unwrap();
    let two = DefectSet::new(vec![1.5, -2.0], vec![Complex64::new(1.0, 0.0), Complex64::new(1e-12, 0.0)]).unwrap();
    for theta in [25.0, 100.0, 200.0] {
        let k = Kinematics::from_degrees(0.9, 10.0, theta).unwrap();
        let a = f1_geometric(&k, &one, &bump(0.1), TL).unwrap();
        let b = f1_geometric(&k, &two, &bump(0.1), TL).unwrap();
        assert!(rel(b, a) <= 1e-8);
    }
}

#[test]
fn regularization_is_stable() {
    let k = Kinematics::from_degrees(1.0, 0.0, 90.0).unwrap();
    for pos in [vec![-3.0, 3.0], vec![-3.0, 0.0, 3.0]] {
        let d = DefectSet::uniform(&pos, 1.0).unwrap();
        let f = |eps: f64| {
            let o = AmplitudeOptions { epsilon: eps, ..Default::default() };
            let r = amplitude(&k, &d, &bump(0.1), TL, &o).unwrap();
            assert!(r.regularized);
            r.f1
        };
        assert!(rel(f(1e-4), f(1e-3)) <= 1e-4);
    }
    // Symmetric average at ε = 1e-5, where truncation and roundoff are both below 1e-8.
    let d = DefectSet::uniform(&[-3.0, 3.0], 1.0).unwrap();
    let r = amplitude(&k, &d, &bump(0.1), TL, &AmplitudeOptions::default()).unwrap();
    assert!(rel(r.f1, Complex64::new(0.0020568344664866345, -0.005542390719028845)) <= 1e-6);
}

#[test]
fn on_support_angles_are_refused() {
    let d = DefectSet::uniform(&[0.0], 1.0).unwrap();
    for (t0, t) in [(0.0, 0.0), (20.0, 160.0), (-30.0, 210.0)] {
        let k = Kinematics::from_degrees(1.0, t0, t).unwrap();
        assert!(matches!(cross_section(&k, &d, &bump(0.1), TL), Err(Error::SingularAngle { .. })));
        let r = amplitude(&k, &d, &bump(0.1), TL, &AmplitudeOptions::default()).unwrap();
        assert!(r.on_singular_support);
    }
}

#[test]
fn x2_variant_only_differs_where_the_k_piece_enters() {
    let opts = AmplitudeOptions {
        forms: ClosedFormOptions { kmmnn: KVariant::X2, ..Default::default() },
        ..Default::default()
    };
    let k = Kinematics::from_degrees(1.0, 0.0, 30.0).unwrap();
    let single = DefectSet::uniform(&[0.0], 1.0).unwrap();
    let a = amplitude(&k, &single, &bump(0.1), TL, &opts).unwrap().f1;
    let b = f1_geometric(&k, &single, &bump(0.1), TL).unwrap();
    assert!(rel(a, b) > 1e-6);
    // s = 1 makes 𝔎² and S² coincide.
    let back = Kinematics::from_degrees(1.0, 0.0, 180.0).unwrap();
    let a = amplitude(&back, &single, &bump(0.1), TL, &opts).unwrap().f1;
    let b = f1_geometric(&back, &single, &bump(0.1), TL).unwrap();
    assert!(rel(a, b) < 1e-13);
}

fn peak(pos: &[f64]) -> f64 {
    let d = DefectSet::uniform(pos, 1.0).unwrap();
    peak_over_k(0.0, 30f64.to_radians(), &d, &bump(0.1), TL, (0.01, 5.0), 250, &AmplitudeOptions::default())
        .unwrap()
        .cross_section
}

#[test]
fn reference_peaks() {
    let cases: [(&[f64], f64); 7] = [
        (&[], 0.09819),
        (&[-3.0], 0.014691),
        (&[0.0], 0.0074),
        (&[3.0], 0.009925),
        (&[-3.0, 0.0], 0.03533),
        (&[0.0, 3.0], 0.07125),
        (&[-3.0, 3.0], 1.36956),
    ];
    for (pos, want) in cases {
        let got = peak(pos);
        assert!((got - want).abs() <= 1e-2 * want, "{pos:?}: peak {got}, expected about {want}");
    }
}

#[test]
fn mirror_asymmetry_is_small_but_reported() {
    let a = peak(&[-3.0]);
    let b = peak(&[3.0]);
    println!("single-defect mirror asymmetry at theta = 30 deg: {:.3e}", (a - b).abs() / a.max(b));
}

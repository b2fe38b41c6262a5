//! Closed forms of the first-order geometric coefficients.
//!
//! Notation: `S = s𝔎`, `Δ = α_m - α_n`, `E' = e^{iS(α_m' + α_n')}`. Every product
//! of a Gaussian factor with an error function is evaluated through
//! [`scaled_erfc`]/[`scaled_erf`], so no intermediate overflows for any real `α`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::is_finite;
use crate::specfun::{erf_unchecked, erfc_unchecked, scaled_erf, scaled_erfc};
use crate::surface::CurvatureCoefficients;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const SQRT_PI: f64 = 1.772_453_850_905_516;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// `e^{w}` for complex `w`.
fn ex(w: Complex64) -> Complex64 {
    w.exp()
}

/// Which reading of the stray symbol in the `k` piece to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KVariant {
    /// `𝔎²(-1 + s²(1 + 4λ₁))`, matching the parallel term.
    #[default]
    Kappa2,
    /// The stray `x²` read as `(s𝔎)²`.
    X2,
}

impl KVariant {
    pub fn name(&self) -> &'static str {
        match self {
            KVariant::Kappa2 => "kappa2",
            KVariant::X2 => "x2",
        }
    }
}

impl std::str::FromStr for KVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa2" => Ok(KVariant::Kappa2),
            "x2" => Ok(KVariant::X2),
            other => Err(Error::invalid(format!("unknown k-piece variant `{other}` (kappa2|x2)"))),
        }
    }
}

/// Whether to use the quadrature-validated form of a coefficient or its
/// literal transcription.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transcription {
    #[default]
    Validated,
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct ClosedFormOptions {
    pub kmmnn: KVariant,
    pub imn: Transcription,
    pub h: Transcription,
    /// Flips the sign of one term of `J_mn`; only for checking that the
    /// verifier notices a corrupted formula.
    #[doc(hidden)]
    pub inject_fault: bool,
}

/// Scalar inputs shared by all coefficients at one `(s, 𝔎)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoCoefficientInputs {
    pub s: f64,
    pub big_k: f64,
    pub alphas: Vec<f64>,
    pub eta: f64,
    pub cc: CurvatureCoefficients,
}

impl GeoCoefficientInputs {
    pub fn new(s: f64, big_k: f64, alphas: Vec<f64>, eta: f64, cc: CurvatureCoefficients) -> Result<Self> {
        if !(s.abs() <= 1.0) {
            return Err(Error::invalid(format!("s must lie in [-1, 1], got {s}")));
        }
        if !(big_k > 0.0 && big_k.is_finite()) {
            return Err(Error::invalid(format!("kσ must be positive and finite, got {big_k}")));
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::invalid(format!("eta must be finite and non-negative, got {eta}")));
        }
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("defect positions must be finite"));
        }
        Ok(Self { s, big_k, alphas, eta, cc })
    }

    fn alpha(&self, i: usize) -> Result<f64> {
        self.alphas
            .get(i)
            .copied()
            .ok_or_else(|| Error::invalid(format!("index {i} out of range for {} defects", self.alphas.len())))
    }

    pub(crate) fn point(&self) -> Point {
        Point::new(self.s, self.big_k, self.eta, self.cc)
    }
}

/// Precomputed scalars for one `(s, 𝔎, η, λ)` point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Point {
    s: f64,
    eta: f64,
    l1: f64,
    l2: f64,
    /// `S = s𝔎`.
    ss: f64,
    k2: f64,
    /// `2λ₂ + λ₂S⁴ + 𝔎²(4λ₁s² - 1)`.
    p: f64,
    /// `𝔎² - 2λ₂`.
    q0: f64,
    /// `(s² - 1)𝔎² + 2λ₂`.
    c2: f64,
}

impl Point {
    pub(crate) fn new(s: f64, big_k: f64, eta: f64, cc: CurvatureCoefficients) -> Self {
        let (l1, l2) = (cc.lambda1, cc.lambda2);
        let ss = s * big_k;
        let k2 = big_k * big_k;
        let s4 = ss.powi(4);
        Self {
            s,
            eta,
            l1,
            l2,
            ss,
            k2,
            p: 2.0 * l2 + l2 * s4 + k2 * (4.0 * l1 * s * s - 1.0),
            q0: k2 - 2.0 * l2,
            c2: (s * s - 1.0) * k2 + 2.0 * l2,
        }
    }
}

fn finite(v: Complex64, what: &str) -> Result<Complex64> {
    if is_finite(v) {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what} evaluated to {v}")))
    }
}

/// `I₀ = (πη e^{-S²}/2)[(4λ₁s² - 1)𝔎² + λ₂(S⁴ + 2)]`.
pub(crate) fn i0_at(p: &Point) -> Complex64 {
    let bracket = (4.0 * p.l1 * p.s * p.s - 1.0) * p.k2 + p.l2 * (p.ss.powi(4) + 2.0);
    re(PI * p.eta * (-p.ss * p.ss).exp() / 2.0 * bracket)
}

pub(crate) fn imn_at(am: f64, an: f64, p: &Point, form: Transcription) -> Complex64 {
    let (s, a, l1, l2) = (p.ss, an, p.l1, p.l2);
    let b = match form {
        Transcription::Validated => {
            Complex64::new(2.0 * a * (l2 - 2.0) * s, -2.0 * a * a * l2 + 8.0 * l1 + l2 + 2.0 * l2 * s * s)
        }
        Transcription::AsPrinted => {
            Complex64::new(-2.0 * a * (l2 - 2.0) * s, -2.0 * a * a * l2 + 8.0 * l1 + l2 - 2.0 * l2 * s * s)
        }
    };
    let t1 = SQRT_PI * s * b * ex(Complex64::new(-a * a, 2.0 * s * a));
    let t2 = 2.0 * PI * p.p * scaled_erfc(re(-s * s), Complex64::new(-a, s));
    let t3 = -2.0 * PI * p.q0 * cis(2.0 * s * a) * erfc_unchecked(re(a));
    p.eta / 8.0 * cis(s * (am - an)) * (t1 + t2 + t3)
}

pub(crate) fn jmn_at(am: f64, an: f64, p: &Point, inject_fault: bool) -> Complex64 {
    let (s, a, l1, l2) = (p.ss, an, p.l1, p.l2);
    let d =
        Complex64::new(-4.0 + 8.0 * l1 + l2 + 2.0 * s * s * l2 - 2.0 * a * a * (4.0 + l2), -2.0 * a * s * (l2 - 2.0));
    let t1 = 2.0 * SQRT_PI * p.p * scaled_erfc(Complex64::new(-s * s, -s * a), Complex64::new(a, -s));
    let t2 = -2.0 * SQRT_PI * p.q0 * cis(s * a) * erfc_unchecked(re(-a));
    let mut t3 = -I * s * d * ex(Complex64::new(-a * a, s * a));
    if inject_fault {
        t3 = -t3;
    }
    p.eta / 8.0 * SQRT_PI * cis(am * s) * (t1 + t2 + t3)
}

/// The pieces of `I_{mm'nn'}`; only three of them enter any one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImmPieces {
    pub q: Complex64,
    pub s: Complex64,
    pub t: Complex64,
    pub h: Complex64,
    pub k: Complex64,
    pub l: Complex64,
}

impl ImmPieces {
    fn scaled(self, e: Complex64) -> Self {
        Self { q: self.q * e, s: self.s * e, t: self.t * e, h: self.h * e, k: self.k * e, l: self.l * e }
    }

    /// Combines the pieces according to the order of the two kink positions.
    pub fn combine(&self, am: f64, an: f64) -> Complex64 {
        if am > an {
            self.s + self.h + self.l
        } else if am < an {
            self.t + self.k + self.l
        } else {
            self.q + self.k + self.l
        }
    }
}

fn q_core(am: f64, an: f64, p: &Point) -> Complex64 {
    let s = p.ss;
    let d = am - an;
    let pre = 0.25 * SQRT_PI * p.eta * s;
    let term1 = cis(-s * d) * (SQRT_PI * s * (erfc_unchecked(re(an)) - 2.0))
        + ex(Complex64::new(-an * an, -s * d)) * Complex64::new(2.0 * an * s, 1.0 - 2.0 * an * an);
    let term2 = -I * cis(s * d) * (-I * s * SQRT_PI * erfc_unchecked(re(am)))
        - I * ex(Complex64::new(-am * am, s * d)) * Complex64::new(2.0 * am * am - 1.0, -2.0 * s * am);
    pre * (term1 + term2)
}

fn s_core(am: f64, an: f64, p: &Point) -> Complex64 {
    let s = p.ss;
    let d = am - an;
    let pre = 0.25 * SQRT_PI * p.eta * s;
    let x = Complex64::new(-s * s, -s * (am + an));
    let t1 = s * SQRT_PI * (scaled_erfc(x, Complex64::new(am, -s)) - scaled_erfc(x, Complex64::new(an, -s)));
    let t2 = s * SQRT_PI * cis(-s * d) * (erfc_unchecked(re(an)) - 2.0);
    let t3 = -s * SQRT_PI * cis(s * d) * erfc_unchecked(re(am));
    let t4 = -2.0 * am * s * ex(Complex64::new(-am * am, s * d));
    let t5 = 2.0 * Complex64::new(an * s, 1.0 - 2.0 * an * an) * ex(Complex64::new(-an * an, -s * d));
    pre * (t1 + t2 + t3 + t4 + t5)
}

fn t_core(am: f64, an: f64, p: &Point) -> Complex64 {
    let s = p.ss;
    let d = am - an;
    let pre = 0.25 * SQRT_PI * p.eta * s;
    let u1 = s * SQRT_PI * (erfc_unchecked(re(am)) - 2.0) * cis(-s * d);
    let u2 = 2.0 * am * s * ex(Complex64::new(-am * am, -s * d));
    let c = Complex64::new(-s * s, s * (am + an));
    let u3 = SQRT_PI * s * (scaled_erfc(c, Complex64::new(an, s)) - scaled_erfc(c, Complex64::new(am, s)));
    let u4 = -SQRT_PI * s * cis(s * d) * erfc_unchecked(re(an))
        - Complex64::new(2.0 * an * s, 4.0 * an * an - 2.0) * ex(Complex64::new(-an * an, s * d));
    pre * (u1 + u2 + u3 + u4)
}

fn k_core(am: f64, an: f64, p: &Point, variant: KVariant) -> Complex64 {
    let (s, l1, l2) = (p.ss, p.l1, p.l2);
    let d = am - an;
    let v1 = -am * (-8.0 * l1 + (2.0 * am * am - 3.0) * l2) * ex(Complex64::new(-am * am, -s * d))
        + an * (-8.0 * l1 + (2.0 * an * an - 3.0) * l2) * ex(Complex64::new(-an * an, -s * d));
    let tail = 8.0 * l1 + l2 + 2.0 * s * s * l2;
    let r1 = Complex64::new(
        8.0 * an * l1 - 2.0 * an.powi(3) * l2 + an * (3.0 + 2.0 * s * s) * l2,
        2.0 * an * an * s * (8.0 + l2) - s * tail,
    );
    let r2 = Complex64::new(
        2.0 * am.powi(3) * l2 - am * (8.0 * l1 + (3.0 + 2.0 * s * s) * l2),
        -2.0 * am * am * s * l2 + s * tail,
    );
    let v2 = r1 * ex(Complex64::new(-an * an, s * d)) + r2 * ex(Complex64::new(-am * am, -s * d));
    let v3 = 2.0 * SQRT_PI * p.c2 * cis(-s * d) * (erf_unchecked(re(am)) - erf_unchecked(re(an)));
    let stray = match variant {
        KVariant::Kappa2 => p.k2,
        KVariant::X2 => s * s,
    };
    let shape = -1.0 + p.s * p.s * (1.0 + 4.0 * l1);
    let tail4 = 2.0 * l2 + s.powi(4) * l2;
    let c = Complex64::new(-s * s, s * (am + an));
    let v4 = -2.0 * SQRT_PI * (stray * shape + tail4) * scaled_erf(c, Complex64::new(am, s))
        + 2.0 * SQRT_PI * (p.k2 * shape + tail4) * scaled_erf(c, Complex64::new(an, s));
    p.eta / 8.0 * SQRT_PI * (v1 + v2 + v3 + v4)
}

fn l_core(am: f64, an: f64, p: &Point) -> Complex64 {
    let (s, l1, l2) = (p.ss, p.l1, p.l2);
    let d = am - an;
    let a = an;
    let w1 = 2.0 * PI * p.c2 * cis(-s * d) * erfc_unchecked(re(-a));
    let w2 = 2.0 * PI * p.c2 * cis(s * d) * erfc_unchecked(re(a));
    let w3 = SQRT_PI * a * ((2.0 * a * a - 3.0) * l2 - 8.0 * l1) * ex(Complex64::new(-a * a, s * d));
    let w4 = SQRT_PI * (-2.0 * a.powi(3) * l2 + 8.0 * a * l1 + 3.0 * a * l2) * ex(Complex64::new(-a * a, -s * d));
    p.eta / 8.0 * (w1 + w2 + w3 + w4)
}

/// Literal transcription of the `h` piece, kept to document its disagreement
/// with quadrature.
fn h_core_printed(am: f64, an: f64, p: &Point) -> Complex64 {
    let (s, l1, l2, eta) = (p.ss, p.l1, p.l2, p.eta);
    let d = am - an;
    let q = 4.0 * l1 + 6.0 * l2 + 3.0 * l2 * s.powi(4) + p.k2 * ((4.0 * l1 + 3.0) * p.s * p.s - 3.0);
    let ta = 12.0 * PI * eta * (erf_unchecked(re(an)) - erf_unchecked(re(am))) * p.c2 * cis(s * d);
    let c = Complex64::new(-s * s, -s * (am + an));
    let tb = 4.0 * PI * eta * q * (scaled_erf(c, Complex64::new(am, -s)) - scaled_erf(c, Complex64::new(an, -s)));
    let h1 = Complex64::new(
        6.0 * an * an * (l2 + 8.0) * s - s * (8.0 * l1 + 3.0 * l2 + 6.0 * l2 * s * s),
        an * (8.0 * l1 + 9.0 * l2 + 6.0 * l2 * s * s),
    );
    let h2 = 3.0 * l2 * s * Complex64::new(2.0 * am * s, -2.0 * am * am + 2.0 * s * s + 1.0)
        + Complex64::new(-16.0 * am * l1, 8.0 * l1 * s);
    let td = 2.0
        * SQRT_PI
        * (I * ex(Complex64::new(-an * an, -s * d)) * h1
            + cis(s * d) * (3.0 * (-an * an).exp() * an * (8.0 * l1 + 3.0 * l2) + (-am * am).exp() * h2));
    let te = -24.0 * I * SQRT_PI * (-an * an).exp() * an.powi(3) * l2 * (s * d).sin();
    eta / 16.0 * (ta + tb + td + te)
}

pub(crate) fn imm_pieces_core(am: f64, an: f64, p: &Point, opts: &ClosedFormOptions) -> ImmPieces {
    let k = k_core(am, an, p, opts.kmmnn);
    let h = match opts.h {
        Transcription::Validated => -k_core(am, an, p, KVariant::Kappa2).conj(),
        Transcription::AsPrinted => h_core_printed(am, an, p),
    };
    ImmPieces { q: q_core(am, an, p), s: s_core(am, an, p), t: t_core(am, an, p), h, k, l: l_core(am, an, p) }
}

pub(crate) fn imm_core_at(am: f64, an: f64, p: &Point, opts: &ClosedFormOptions) -> Complex64 {
    imm_pieces_core(am, an, p, opts).combine(am, an)
}

pub fn i0_closed(inp: &GeoCoefficientInputs) -> Complex64 {
    i0_at(&inp.point())
}

pub fn imn_closed(m: usize, n: usize, inp: &GeoCoefficientInputs, opts: &ClosedFormOptions) -> Result<Complex64> {
    let v = imn_at(inp.alpha(m)?, inp.alpha(n)?, &inp.point(), opts.imn);
    finite(v, "I_mn")
}

pub fn jmn_closed(m: usize, n: usize, inp: &GeoCoefficientInputs, opts: &ClosedFormOptions) -> Result<Complex64> {
    let v = jmn_at(inp.alpha(m)?, inp.alpha(n)?, &inp.point(), opts.inject_fault);
    finite(v, "J_mn")
}

/// Pieces `q, s, t, h, k, l` of `I_{mm'nn'}`, each including `E'`.
pub fn immnn_pieces(
    m: usize,
    mp: usize,
    n: usize,
    np: usize,
    inp: &GeoCoefficientInputs,
    opts: &ClosedFormOptions,
) -> Result<ImmPieces> {
    let (am, an) = (inp.alpha(m)?, inp.alpha(n)?);
    let e = cis(inp.s * inp.big_k * (inp.alpha(mp)? + inp.alpha(np)?));
    Ok(imm_pieces_core(am, an, &inp.point(), opts).scaled(e))
}

pub fn immnn_closed(
    m: usize,
    mp: usize,
    n: usize,
    np: usize,
    inp: &GeoCoefficientInputs,
    opts: &ClosedFormOptions,
) -> Result<Complex64> {
    let pieces = immnn_pieces(m, mp, n, np, inp, opts)?;
    finite(pieces.combine(inp.alpha(m)?, inp.alpha(n)?), "I_mm'nn'")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(s: f64, k: f64, alphas: &[f64], l1: f64, l2: f64) -> GeoCoefficientInputs {
        GeoCoefficientInputs::new(s, k, alphas.to_vec(), 0.1, CurvatureCoefficients::new(l1, l2).unwrap()).unwrap()
    }

    #[test]
    fn i0_substitutions() {
        let v = i0_closed(&inputs(0.0, 1.0, &[], 0.0, 0.0));
        assert!((v.re + 0.05 * PI).abs() < 1e-15 && v.im == 0.0);
        let v = i0_closed(&inputs(1.0, 1.0, &[], 0.5, -0.5));
        assert!((v.re + 0.025 * PI * (-1.0f64).exp()).abs() <= 1e-12 * v.re.abs());
    }

    #[test]
    fn eta_zero_kills_everything() {
        let mut inp = inputs(0.4, 1.2, &[-1.0, 2.0], 0.5, -0.5);
        inp.eta = 0.0;
        let o = ClosedFormOptions::default();
        assert_eq!(i0_closed(&inp).norm(), 0.0);
        assert_eq!(imn_closed(0, 1, &inp, &o).unwrap().norm(), 0.0);
        assert_eq!(jmn_closed(1, 0, &inp, &o).unwrap().norm(), 0.0);
        assert_eq!(immnn_closed(0, 1, 1, 0, &inp, &o).unwrap().norm(), 0.0);
    }

    #[test]
    fn stays_finite_far_from_the_bump() {
        let o = ClosedFormOptions::default();
        for &a in &[-40.0, -26.5, 26.5, 40.0] {
            let inp = inputs(0.6, 3.0, &[a, -a * 0.5], 0.5, -0.5);
            assert!(imn_closed(0, 0, &inp, &o).is_ok());
            assert!(jmn_closed(0, 1, &inp, &o).is_ok());
            for (m, n) in [(0, 0), (0, 1), (1, 0)] {
                assert!(immnn_closed(m, 1, n, 0, &inp, &o).is_ok());
            }
        }
    }

    #[test]
    fn index_out_of_range() {
        let inp = inputs(0.6, 1.0, &[0.0], 0.5, -0.5);
        assert!(imn_closed(0, 1, &inp, &ClosedFormOptions::default()).is_err());
    }

    #[test]
    fn input_validation() {
        let cc = CurvatureCoefficients::THIN_LAYER;
        assert!(GeoCoefficientInputs::new(1.5, 1.0, vec![], 0.1, cc).is_err());
        assert!(GeoCoefficientInputs::new(0.5, 0.0, vec![], 0.1, cc).is_err());
        assert!(GeoCoefficientInputs::new(0.5, 1.0, vec![], -0.1, cc).is_err());
        assert!(GeoCoefficientInputs::new(-0.5, 1.0, vec![], 0.1, cc).is_ok());
    }
}

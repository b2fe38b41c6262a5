//! Parsers for grid, list, complex and unit-suffixed arguments.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `lo:hi:n`, evenly spaced and inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::invalid("grid bounds must be finite"));
        }
        if n < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 points, got {n}")));
        }
        if hi <= lo {
            return Err(Error::invalid(format!("grid must be strictly increasing, got {lo}:{hi}")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| if i == self.n - 1 { self.hi } else { self.lo + step * i as f64 }).collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("grid `{s}` is not of the form lo:hi:n")));
        }
        let lo = parse_f64(parts[0], "grid lower bound")?;
        let hi = parse_f64(parts[1], "grid upper bound")?;
        let n = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::invalid(format!("grid point count `{}` is not a positive integer", parts[2])))?;
        Grid::new(lo, hi, n)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

pub fn parse_f64(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::invalid(format!("{what}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::invalid(format!("{what}: `{s}` is not finite")));
    }
    Ok(v)
}

/// Comma-separated reals; the empty string is the empty list.
pub fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').enumerate().map(|(i, p)| parse_f64(p, &format!("{what}[{i}]"))).collect()
}

/// `a`, `bi`, `a+bi` or `a-bi`, exponents allowed.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    let bad = || Error::invalid(format!("`{s}` is not a complex number (a, bi, a+bi)"));
    let Some(body) = t.strip_suffix('i') else {
        return parse_f64(t, "coupling").map(|re| Complex64::new(re, 0.0));
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn format_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
}

fn split_unit(s: &str) -> (&str, &str) {
    let t = s.trim();
    let end = t
        .char_indices()
        .find(|&(i, c)| {
            let exp_sign = (c == '+' || c == '-') && i > 0 && matches!(t.as_bytes()[i - 1], b'e' | b'E');
            let exp =
                (c == 'e' || c == 'E') && t[i + 1..].starts_with(|d: char| d.is_ascii_digit() || d == '-' || d == '+');
            !(c.is_ascii_digit() || c == '.' || exp || exp_sign || (i == 0 && (c == '-' || c == '+')))
        })
        .map_or(t.len(), |(i, _)| i);
    (t[..end].trim(), t[end..].trim())
}

fn with_unit(s: &str, what: &str, default_unit: &str, units: &[(&str, f64)]) -> Result<f64> {
    let (num, unit) = split_unit(s);
    let v = parse_f64(num, what)?;
    let unit = if unit.is_empty() { default_unit } else { unit };
    units.iter().find(|(u, _)| *u == unit).map(|(_, scale)| v * scale).ok_or_else(|| {
        let known: Vec<&str> = units.iter().map(|(u, _)| *u).collect();
        Error::invalid(format!("{what}: unknown unit `{unit}` (expected one of {})", known.join(", ")))
    })
}

/// Energy in eV. Accepts `eV`, `meV`, `keV`, `ueV`; bare numbers are eV.
pub fn parse_energy(s: &str) -> Result<f64> {
    with_unit(s, "energy", "eV", &[("eV", 1.0), ("meV", 1e-3), ("keV", 1e3), ("ueV", 1e-6), ("µeV", 1e-6)])
}

/// Length in nm. Accepts `nm`, `pm`, `um`, `A`/`Å`, `m`; bare numbers are nm.
pub fn parse_length(s: &str) -> Result<f64> {
    with_unit(
        s,
        "length",
        "nm",
        &[("nm", 1.0), ("pm", 1e-3), ("um", 1e3), ("µm", 1e3), ("A", 0.1), ("Å", 0.1), ("m", 1e9)],
    )
}

/// Mass in units of the electron mass. Accepts a bare ratio or a `me` suffix.
pub fn parse_mass_ratio(s: &str) -> Result<f64> {
    with_unit(s, "mass ratio", "me", &[("me", 1.0), ("m_e", 1.0)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g: Grid = "0.5:5:10".parse().unwrap();
        let p = g.points();
        assert_eq!((p.len(), p[0], p[9]), (10, 0.5, 5.0));
        assert!("1:1:3".parse::<Grid>().is_err());
        assert!("0:1:1".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
        assert_eq!(format!("{g}").parse::<Grid>().unwrap(), g);
    }

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("1.5+0.25i").unwrap(), c(1.5, 0.25));
        assert_eq!(parse_complex("-2-3i").unwrap(), c(-2.0, -3.0));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e-1i").unwrap(), c(1e-3, 0.2));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert!(parse_complex("abc").is_err());
        for z in [c(1.0, 0.0), c(0.5, -0.125), c(-3.0, 2.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn units() {
        assert_eq!(parse_energy("1eV").unwrap(), 1.0);
        assert_eq!(parse_energy("1e-3 eV").unwrap(), 1e-3);
        assert!((parse_energy("2 meV").unwrap() - 2e-3).abs() < 1e-18);
        assert_eq!(parse_energy("0.5").unwrap(), 0.5);
        assert_eq!(parse_length("1nm").unwrap(), 1.0);
        assert!((parse_length("10A").unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(parse_mass_ratio("0.01me").unwrap(), 0.01);
        assert_eq!(parse_mass_ratio("0.01").unwrap(), 0.01);
        assert!(parse_energy("1 furlong").is_err());
    }
}

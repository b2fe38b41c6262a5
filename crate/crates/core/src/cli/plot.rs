//! Static SVG line charts of sweep files.

use std::fmt::Write as _;

use super::sweep::SweepData;
use crate::error::{Error, Result};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

/// `(stroke, dashed)` in figure order.
const THETA_STYLES: [(&str, bool); 6] = [
    ("#000000", false),
    ("#800080", true),
    ("#0000ff", false),
    ("#008000", true),
    ("#ffa500", false),
    ("#ff0000", true),
];
const LAMBDA_STYLES: [(&str, bool); 4] = [("#000000", false), ("#0000ff", true), ("#008000", false), ("#ff0000", true)];

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn tick_label(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !(1e-3..1e5).contains(&step) {
        return format!("{v:.1e}");
    }
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    format!("{v:.decimals$}")
}

fn field<'a>(marker: &'a str, key: &str) -> Option<&'a str> {
    marker.split_whitespace().filter_map(|f| f.split_once('=')).find(|(k, _)| *k == key).map(|(_, v)| v)
}

fn label(mode: &str, marker: &str) -> String {
    match mode {
        "kscan" => match field(marker, "theta_deg") {
            Some(t) => format!("θ = {t}°"),
            None => marker.to_string(),
        },
        _ => match (field(marker, "lambda1"), field(marker, "lambda2")) {
            (Some(a), Some(b)) => format!("λ₁ = {a}, λ₂ = {b}"),
            _ => marker.to_string(),
        },
    }
}

/// Renders `|f₁|²/σ` against the sweep axis.
pub fn render_svg(data: &SweepData) -> Result<String> {
    if data.curves.is_empty() || data.curves.iter().all(|c| c.rows.is_empty()) {
        return Err(Error::invalid("no data rows to plot"));
    }
    if let Some(c) = data.curves.iter().find(|c| c.rows.len() < 2) {
        return Err(Error::invalid(format!("curve `{}` has fewer than 2 points", c.marker)));
    }
    let (xcol, xlabel, styles): (usize, &str, &[(&str, bool)]) = match data.mode.as_str() {
        "kscan" => (0, "kσ", &THETA_STYLES),
        "anglescan" => (1, "θ (deg)", &LAMBDA_STYLES),
        m => return Err(Error::invalid(format!("unknown sweep mode `{m}`"))),
    };
    let all = data.curves.iter().flat_map(|c| c.rows.iter());
    let (mut xmin, mut xmax, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for r in all {
        xmin = xmin.min(r[xcol]);
        xmax = xmax.max(r[xcol]);
        ymax = ymax.max(r[5]);
    }
    if xmax.partial_cmp(&xmin) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::invalid("plot axis has zero extent"));
    }
    let ytop = if ymax > 0.0 { ymax * 1.05 } else { 1.0 };
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - xmin) / (xmax - xmin) * pw;
    let sy = |y: f64| TOP + ph - y / ytop * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(s, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>");
    let _ =
        writeln!(s, "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"#000000\"/>");

    let xs = nice_step(xmax - xmin);
    let mut t = (xmin / xs).ceil() * xs;
    while t <= xmax + 1e-9 * xs {
        let x = sx(t);
        let _ = writeln!(
            s,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#000000\"/>",
            TOP + ph,
            TOP + ph + 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            TOP + ph + 18.0,
            tick_label(t, xs)
        );
        t += xs;
    }
    let ys = nice_step(ytop);
    let mut t = 0.0;
    while t <= ytop + 1e-9 * ys {
        let y = sy(t);
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{LEFT:.2}\" y2=\"{y:.2}\" stroke=\"#000000\"/>",
            LEFT - 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            LEFT - 8.0,
            y + 4.0,
            tick_label(t, ys)
        );
        t += ys;
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xlabel}</text>",
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        "<text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">|f|²/σ</text>",
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (i, c) in data.curves.iter().enumerate() {
        let (stroke, dashed) = styles[i % styles.len()];
        let dash = if dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let pts: Vec<String> = c.rows.iter().map(|r| format!("{:.2},{:.2}", sx(r[xcol]), sy(r[5]))).collect();
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>",
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = LEFT + pw + 15.0;
        let _ = writeln!(
            s,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash}/>",
            lx + 30.0
        );
        let _ =
            writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>", lx + 36.0, ly + 4.0, label(&data.mode, &c.marker));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

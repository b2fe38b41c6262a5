//! Closed forms against an independent double-precision transcription.

use geoscatter::geoamp::{
    i0_closed, immnn_closed, immnn_pieces, imn_closed, jmn_closed, ClosedFormOptions, GeoCoefficientInputs,
    Transcription,
};
use geoscatter::surface::CurvatureCoefficients;
use geoscatter::Complex64;

struct Row(Vec<f64>);

impl Row {
    fn c(&self, i: usize) -> Complex64 {
        Complex64::new(self.0[i], self.0[i + 1])
    }
}

fn rows() -> Vec<Row> {
    include_str!("data/closed_form_xref.csv")
        .lines()
        .skip(1)
        .map(|l| Row(l.split(',').map(|v| v.parse().unwrap()).collect()))
        .collect()
}

fn check(what: &str, i: usize, got: Complex64, want: Complex64) {
    let err = (got - want).norm();
    assert!(err <= 1e-10 * want.norm().max(1.0), "row {i} {what}: got {got}, want {want}");
}

#[test]
fn matches_reference_rows() {
    let rows = rows();
    assert_eq!(rows.len(), 40);
    let validated = ClosedFormOptions::default();
    let printed = ClosedFormOptions { imn: Transcription::AsPrinted, h: Transcription::AsPrinted, ..validated };
    for (i, r) in rows.iter().enumerate() {
        let v = &r.0;
        let cc = CurvatureCoefficients::new(v[6], v[7]).unwrap();
        let inp = GeoCoefficientInputs::new(v[4], v[5], vec![v[0], v[1], v[2], v[3]], v[8], cc).unwrap();
        check("I0", i, i0_closed(&inp), r.c(9));
        check("Imn", i, imn_closed(0, 2, &inp, &validated).unwrap(), r.c(11));
        check("Imn printed", i, imn_closed(0, 2, &inp, &printed).unwrap(), r.c(13));
        check("Jmn", i, jmn_closed(0, 2, &inp, &validated).unwrap(), r.c(15));

        let p = immnn_pieces(0, 1, 2, 3, &inp, &validated).unwrap();
        let e = Complex64::from_polar(1.0, v[4] * v[5] * (v[1] + v[3]));
        check("q", i, p.q, r.c(17));
        check("s", i, p.s, r.c(19));
        check("t", i, p.t, r.c(21));
        check("k", i, p.k, r.c(25));
        check("l", i, p.l, r.c(27));
        check("h", i, p.h, -(r.c(25) / e).conj() * e);
        check("h printed", i, immnn_pieces(0, 1, 2, 3, &inp, &printed).unwrap().h, r.c(23));

        let total = immnn_closed(0, 1, 2, 3, &inp, &validated).unwrap();
        let branch = if v[0] > v[2] {
            p.s + p.h + p.l
        } else if v[0] < v[2] {
            p.t + p.k + p.l
        } else {
            p.q + p.k + p.l
        };
        check("Immnn", i, total, branch);
    }
}

#[test]
fn equal_positions_are_exercised() {
    assert!(rows().iter().filter(|r| r.0[0] == r.0[2]).count() >= 8);
}

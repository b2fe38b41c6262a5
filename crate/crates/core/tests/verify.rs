use geoscatter::geoamp::ClosedFormOptions;
use geoscatter::oracle::{verify_all, GridKind, VerifyConfig};

fn reduced() -> VerifyConfig {
    VerifyConfig { grid: GridKind::Reduced, ..Default::default() }
}

#[test]
fn reduced_grid_passes() {
    let report = verify_all(&reduced()).unwrap();
    for r in report.records.iter().filter(|r| r.kind != "probe" && !r.pass) {
        eprintln!("{r:?}");
    }
    assert!(report.passed(), "{} of {} checks failed", report.failures(), report.checks());
    for (v, m, t) in report.variant_summary() {
        eprintln!("{v}: {m}/{t}");
    }
}

#[test]
fn corrupted_form_is_caught() {
    let cfg = VerifyConfig {
        forms: ClosedFormOptions { inject_fault: true, ..Default::default() },
        probes: false,
        linearity: false,
        ..reduced()
    };
    let report = verify_all(&cfg).unwrap();
    assert!(report.failures() > 0);
    assert!(report.records.iter().filter(|r| !r.pass).all(|r| r.coefficient == "Jmn"));
}

#[test]
fn report_is_jsonl() {
    let cfg = VerifyConfig { probes: false, linearity: false, ..reduced() };
    let report = verify_all(&cfg).unwrap();
    let mut buf = Vec::new();
    report.write_jsonl(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), report.records.len() + 1);
    assert_eq!(lines.last().unwrap()["kind"], "summary");
    assert!(lines[0].get("oracle").is_some() && lines[0].get("error_estimate").is_some());
}

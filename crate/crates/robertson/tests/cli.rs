use std::path::Path;
use std::process::Command;

use robertson::cli::run_with;
use robertson::report::{ComparisonJson, ErrorJson};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["robertson"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn classify_prints_the_regime() {
    let (code, out, _) = run(&["classify", "--eps1", "1.3333e-9", "--eps2", "3.3333e-4"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "B2");
    let (_, out, _) = run(&["classify", "--eps1", "1e-3", "--eps2", "1e-4"]);
    assert_eq!(out.trim(), "B11");
    let (_, out, _) = run(&["classify", "--eps1", "1e-3", "--eps2", "1e-2", "--beta1", "0.01"]);
    assert_eq!(out.trim(), "B11");
}

#[test]
fn classify_without_parameters_is_a_usage_error() {
    let (code, _, err) = run(&["classify"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn bad_values_are_usage_errors() {
    assert_eq!(run(&["sweep", "--eps1-range", "1:2", "--eps2-range", "1:2:3", "--out", "x.csv"]).0, 2);
    assert_eq!(run(&["orbit", "--regime", "b5", "--chart-param", "1", "--out", "x.csv"]).0, 2);
    assert_eq!(run(&["simulate", "--classic", "--eps", "1", "2", "--out", "x.csv"]).0, 2);
    assert_eq!(run(&["simulate", "--out", "x.csv"]).0, 2);
}

#[test]
fn classic_simulation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ts.csv");
    let (code, _, err) = run(&["simulate", "--classic", "--t-end", "1e6", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["t", "x", "y", "z"]);
    let peak = rows.iter().map(|r| num(&r[2])).fold(0.0, f64::max);
    assert!((peak - 3.65e-5).abs() < 0.01 * 3.65e-5, "{peak}");
    for r in &rows {
        let s = num(&r[1]) + num(&r[2]) + num(&r[3]);
        assert!((s - 1.0).abs() <= 1e-9);
    }
    assert_eq!(num(&rows.last().unwrap()[0]), 1e6);
}

#[test]
fn planar_simulation_has_two_species() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ts.csv");
    let (code, _, _) =
        run(&["simulate", "--eps", "1e-4", "1e-2", "--c", "1", "--t-end", "1e5", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["t", "y", "z"]);
    assert!(rows.len() > 64);
}

#[test]
fn orbit_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.csv");
    let (code, _, _) =
        run(&["orbit", "--regime", "b3", "--chart-param", "5e-4", "--points", "100", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["segment", "kind", "chart", "c1", "c2", "c3"]);
    assert_eq!(rows.len(), 300);
    assert_eq!(rows[0][..3], ["0", "fast", "K3_2"]);
    assert_eq!(rows[299][..3], ["2", "slow", "K3_3"]);
    let (_, rows) = {
        let p2 = dir.path().join("b2.csv");
        run(&["orbit", "--regime", "B2", "--chart-param", "1", "--points", "10", "--out", p2.to_str().unwrap()]);
        read_csv(&p2)
    };
    assert!(rows.iter().all(|r| r[5].is_empty()));
}

#[test]
fn compare_json_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &Path| {
        vec![
            "compare".to_string(),
            "--eps1".into(),
            "1e-6".into(),
            "--eps2".into(),
            "1e-3".into(),
            "--c".into(),
            "1".into(),
            "--json".into(),
            "--points".into(),
            "512".into(),
            "--out".into(),
            p.to_str().unwrap().into(),
        ]
    };
    let va = args(&a);
    let vb = args(&b);
    assert_eq!(run(&va.iter().map(String::as_str).collect::<Vec<_>>()).0, 0);
    assert_eq!(run(&vb.iter().map(String::as_str).collect::<Vec<_>>()).0, 0);
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let report: ComparisonJson = serde_json::from_slice(&ta).unwrap();
    assert_eq!(report.regime, "B2");
    assert_eq!(report.status, "ok");
    assert_eq!(report.params.eps1, 1e-6);
    assert!(report.params.k1.is_none());
    assert!(report.hausdorff.chart > 0.0 && report.hausdorff.original > 0.0);
    assert_eq!(report.solver.scheme, "radau-iia-5");
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    for key in ["params", "regime", "chart", "y_max", "hausdorff", "orbit", "solver", "tolerances", "status"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    for key in ["k1", "k2", "k3", "eps1", "eps2", "c"] {
        assert!(v["params"].get(key).is_some(), "{key}");
    }
    for key in ["numeric", "predicted", "rel_gap"] {
        assert!(v["y_max"].get(key).is_some(), "{key}");
    }
    for key in ["steps", "rejected", "scheme"] {
        assert!(v["solver"].get(key).is_some(), "{key}");
    }
}

#[test]
fn compare_with_rates_reports_them() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let (code, _, err) =
        run(&["compare", "--rates", "4e-2", "3e7", "1e4", "--json", "--points", "256", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let r: ComparisonJson = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(r.params.k2, Some(3e7));
    assert!((r.y_max.numeric - 3.6515e-5).abs() < 0.01 * 3.6515e-5);
}

#[test]
fn compare_at_origin_fails_with_structured_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let (code, _, err) = run(&["compare", "--eps1", "0", "--eps2", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let e: ErrorJson = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e.status, "error");
    assert_eq!(e.kind, "RegimeOrigin");
    assert!(!path.exists());
}

#[test]
fn compare_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let (code, _, _) =
        run(&["compare", "--eps1", "1e-6", "--eps2", "1e-3", "--points", "256", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (header, rows) = read_csv(&path);
    assert_eq!(header[..4], ["eps1", "eps2", "c", "regime"]);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][3], "B2");
}

#[test]
fn study_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let (code, out, err) = run(&[
        "study",
        "--regime",
        "b2",
        "--fixed-coord",
        "1",
        "--r-seq",
        "1e-2,3e-3,1e-3,3e-4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("B2 fixed=1 slope=0.8"), "{out}");
    assert!(out.trim_end().ends_with("PASS"), "{out}");
    let (header, rows) = read_csv(&path);
    assert_eq!(header[0], "r");
    assert_eq!(rows.len(), 4);
    let d: Vec<f64> = rows.iter().map(|r| num(&r[3])).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn study_outside_the_regime_fails() {
    let (code, _, err) =
        run(&["study", "--regime", "b3", "--fixed-coord", "0.5", "--r-seq", "1e-2,1e-3,1e-4", "--out", "unused.csv"]);
    assert_eq!(code, 1);
    assert!(err.contains("RegimeMismatch"), "{err}");
}

#[test]
fn sweep_records_errors_per_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sw.csv");
    let (code, _, err) =
        run(&["sweep", "--eps1-range", "0:1e-6:2", "--eps2-range", "0:1e-3:2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["eps1", "eps2", "regime", "ymax_num", "ymax_pred", "rel_gap", "t_half", "error"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][2], "Origin");
    assert!(rows[0][7].contains("no dynamics"));
    assert!(rows[0][3].is_empty());
    let last = &rows[3];
    assert_eq!(last[2], "B2");
    assert!(last[7].is_empty());
    assert!(num(&last[5]) <= 0.05);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_robertson");
    let ok = Command::new(bin).args(["classify", "--eps1", "1.3333e-9", "--eps2", "3.3333e-4"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "B2");
    let usage = Command::new(bin).arg("classify").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let fail = Command::new(bin)
        .args(["orbit", "--regime", "b2", "--chart-param", "1", "--c=-1", "--out", "x.csv"])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

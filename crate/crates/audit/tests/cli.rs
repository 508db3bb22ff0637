use std::path::Path;
use std::process::{Command, Output};

use berezin_audit::{summarize, AuditReport, TrialRow};
use serde_json::Value;

fn berezin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berezin")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn audit_writes_consistent_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"models": ["diagonal:3", "hardy:8"], "entries": ["C01", "C06", "C23"], "trials": 6, "seed": 7}"#).unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let out = berezin(&[
        "audit",
        "--config",
        cfg.to_str().unwrap(),
        "--out-json",
        json.to_str().unwrap(),
        "--out-csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let (header, rows) = read_csv(&csv);
    assert_eq!(header, ["id", "model", "dim", "trial", "lhs", "rhs", "margin", "ratio", "outcome", "seed"]);
    assert_eq!(rows.len(), 3 * 2 * 6);

    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    for key in ["config", "entries", "duration_ms", "version"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(report["config"]["seed"], 7);
    assert_eq!(report["config"]["trials"], 6);

    // aggregates recomputed from the CSV rows
    let margins = column(&header, &rows, "margin");
    let ratios = column(&header, &rows, "ratio");
    for entry in report["entries"].as_array().unwrap() {
        let id = entry["id"].as_str().unwrap();
        let mine: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][0] == id).collect();
        let scored: Vec<usize> = mine.iter().copied().filter(|&i| rows[i][8] != "not-applicable").collect();
        assert_eq!(entry["trials"].as_u64().unwrap() as usize, mine.len());
        assert_eq!(entry["failures"].as_u64().unwrap() as usize, mine.iter().filter(|&&i| rows[i][8] == "fail").count());
        assert_eq!(entry["not_applicable"].as_u64().unwrap() as usize, mine.len() - scored.len());
        if scored.is_empty() {
            assert!(entry["min_margin"].is_null() && entry["witness"].is_null());
            continue;
        }
        let min_margin = scored.iter().map(|&i| margins[i]).fold(f64::INFINITY, f64::min);
        let max_ratio = scored.iter().map(|&i| ratios[i]).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(entry["min_margin"].as_f64().unwrap(), min_margin);
        assert_eq!(entry["max_ratio"].as_f64().unwrap(), max_ratio);
        assert_eq!(entry["witness"]["ratio"].as_f64().unwrap(), max_ratio);
    }
    // C23 only applies to the Hardy model
    let c23: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "C23").collect();
    assert!(c23.iter().all(|r| (r[1] == "diagonal(3)") == (r[8] == "not-applicable")));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let out = berezin(&[
        "audit", "--entries", "C02,L2", "--model", "diagonal", "--dims", "2,3", "--trials", "4", "--seed", "5", "--refine",
        "1", "--quiet", "--out-csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let (_, rows) = read_csv(&csv);
    assert_eq!(rows.len(), 2 * 2 * 4);
    let models: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(&models[..8], ["diagonal(2)"; 4].iter().chain(["diagonal(3)"; 4].iter()).copied().collect::<Vec<_>>());
}

#[test]
fn zero_trials_is_an_empty_success() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let out = berezin(&["audit", "--entries", "all", "--trials", "0", "--out-csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(read_csv(&csv).1.is_empty());
}

#[test]
fn config_and_io_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"trials\": ").unwrap();
    let missing = dir.path().join("missing.json");
    let unwritable = dir.path().join("no/such/dir/r.csv");
    for args in [
        vec!["audit", "--config", bad.to_str().unwrap()],
        vec!["audit", "--config", missing.to_str().unwrap()],
        vec!["audit", "--entries", "C99", "--trials", "1"],
        vec!["audit", "--model", "sobolev:4", "--trials", "1"],
        vec!["audit", "--entries", "C01", "--model", "diagonal:2", "--trials", "1", "--out-csv", unwritable.to_str().unwrap()],
        vec!["profile", "--model", "hardy:8", "--matrix", "[[1, 2]]"],
        vec!["profile", "--model", "hardy:8"],
        vec!["power", "--model", "hardy:4", "--symbol", "{\"one\": [1, 0]}"],
        vec!["audit", "--no-such-flag"],
    ] {
        let out = berezin(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn any_failure_forces_exit_1() {
    let row = |outcome: &'static str, ratio: f64| TrialRow {
        id: "C01".into(),
        model: "diagonal(2)".into(),
        dim: 2,
        trial: 0,
        lhs: ratio,
        rhs: 1.0,
        margin: 1.0 - ratio,
        ratio,
        outcome,
        seed: 0,
        kind: berezin::ensemble::EnsembleKind::Ginibre,
        operands: vec![],
        pointwise: None,
    };
    let rows = vec![row("pass", 0.5), row("fail", 1.5), row("pass", 0.9)];
    let report = AuditReport {
        config: Default::default(),
        entries: summarize(&["C01"], &rows),
        duration_ms: 0,
        version: "test",
        rows,
    };
    assert_eq!(report.failures(), 1);
    assert_eq!(report.exit_code(), 1);
    assert_eq!(report.entries[0].max_ratio, Some(1.5));
    assert_eq!(report.entries[0].min_margin, Some(-0.5));
}

#[test]
fn profile_oracles() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let p = csv.to_str().unwrap();

    let identity = serde_json::to_string(&(0..8).map(|i| (0..8).map(|j| u8::from(i == j)).collect::<Vec<_>>()).collect::<Vec<_>>()).unwrap();
    assert_eq!(code(&berezin(&["profile", "--model", "hardy:8", "--matrix", &identity, "--out-csv", p])), 0);
    let (header, rows) = read_csv(&csv);
    assert_eq!(header, ["re_lambda", "im_lambda", "re_symbol", "im_symbol", "abs_symbol"]);
    assert!(column(&header, &rows, "abs_symbol").iter().all(|v| (v - 1.0).abs() < 1e-12));

    assert_eq!(code(&berezin(&["profile", "--model", "hardy:32", "--symbol", r#"{"1": [1, 0]}"#, "--out-csv", p])), 0);
    let (header, rows) = read_csv(&csv);
    let max = column(&header, &rows, "abs_symbol").into_iter().fold(0.0, f64::max);
    assert!((0.95..=31.0 / 32.0).contains(&max), "{max}");

    assert_eq!(code(&berezin(&["profile", "--model", "diagonal:2", "--matrix", "[[1, 0], [0, [0, 2]]]", "--out-csv", p])), 0);
    let (header, rows) = read_csv(&csv);
    assert_eq!(header, ["label", "re_symbol", "im_symbol", "abs_symbol"]);
    assert_eq!(column(&header, &rows, "abs_symbol"), [1.0, 2.0]);
}

#[test]
fn profile_reads_operator_files_and_ensembles() {
    let dir = tempfile::tempdir().unwrap();
    let sym = dir.path().join("s.json");
    std::fs::write(&sym, r#"{"0": [3, 0]}"#).unwrap();
    let json = dir.path().join("p.json");
    let arg = format!("@{}", sym.display());
    let out = berezin(&["profile", "--model", "bergman:6", "--symbol", &arg, "--grid", "4x16", "--out-json", json.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["model"]["kind"], "bergman");
    assert!((v["ber_estimate"].as_f64().unwrap() - 3.0).abs() < 1e-12);

    let a = berezin(&["profile", "--model", "hardy:4", "--ensemble", "ginibre:1", "--seed", "3"]);
    let b = berezin(&["profile", "--model", "hardy:4", "--ensemble", "ginibre:1", "--seed", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn toeplitz_power_and_tighten_commands() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let json = dir.path().join("t.json");
    let out = berezin(&[
        "toeplitz", "--symbol", r#"{"1": [1, 0], "-1": [1, 0]}"#, "--dims", "4,8", "--out-csv", csv.to_str().unwrap(), "--out-json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let (header, rows) = read_csv(&csv);
    assert_eq!(header[0], "n");
    assert_eq!(rows.len(), 2);
    assert!(column(&header, &rows, "sup_norm").iter().all(|v| (v - 2.0).abs() < 1e-9));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["checks"][0]["id"], "C23");

    let out = berezin(&["power", "--model", "hardy:8", "--symbol", r#"{"1": [1, 0]}"#, "--max-power", "2", "--out-csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let (header, rows) = read_csv(&csv);
    assert_eq!(header, ["id", "model", "dims", "lhs", "rhs", "margin", "ratio", "outcome", "seed", "grid", "refinement"]);
    let ids: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ids, ["C22", "C24", "C22", "C24"]);
    assert!(rows.iter().all(|r| r[9] == "24x96x0.995"));

    let out = berezin(&["tighten", "--entries", "C17", "--model", "hardy:4", "--trials", "20", "--out-json", json.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v[0]["id"], "C17");
    assert_eq!(v[0]["evaluations"], 20);
    assert!(v[0]["ratio"].as_f64().unwrap() <= 1.0 + 1e-8);
}

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sgcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgcalc")).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--output", dir.to_str().unwrap()]);
    sgcalc(&all)
}

fn read_json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn all_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        out.insert(p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap());
    }
    out
}

#[test]
fn sweep_on_shift_has_positive_margins_below_one_half() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["sweep"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("u,norm_F,rho_F,ray_max,margin"));
    let mut rows = 0;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 5);
        if cols[0] < 0.5 {
            assert!(cols[4] > 0.0, "{line}");
            rows += 1;
        }
    }
    assert_eq!(rows, 255);

    // plot data is two numeric columns
    let dat = std::fs::read_to_string(tmp.path().join("sweep_norm.dat")).unwrap();
    for line in dat.lines() {
        let cols: Vec<f64> = line.split_whitespace().map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 2);
    }
    let summary = read_json(tmp.path().join("summary.json"));
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["command"], "sweep");
}

#[test]
fn curve_exports_vertices_and_parameters() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["curve"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(tmp.path().join("curve_vertices.csv")).unwrap();
    assert!(csv.lines().count() > 4);
    let params = read_json(tmp.path().join("curve_params.json"));
    let curve = &params["curve"];
    assert_eq!(curve["m"], 2);
    assert!(curve["delta"].as_f64().unwrap() > 0.0);
    assert!((curve["alpha"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-8);
    assert!(curve["margins"]["condition_i"].as_f64().unwrap() > 0.0);
}

#[test]
fn identical_config_and_seed_give_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        assert_eq!(run_in(dir, &["resolvent-check", "--seed", "11"]).status.code(), Some(0));
    }
    assert_eq!(all_files(a.path()), all_files(b.path()));
    assert_eq!(run_in(c.path(), &["resolvent-check", "--seed", "12"]).status.code(), Some(0));
    assert_ne!(all_files(a.path())["resolvent.json"], all_files(c.path())["resolvent.json"]);

    let d = tempfile::tempdir().unwrap();
    let e = tempfile::tempdir().unwrap();
    for dir in [d.path(), e.path()] {
        assert_eq!(run_in(dir, &["idempotents"]).status.code(), Some(0));
    }
    assert_eq!(all_files(d.path()), all_files(e.path()));
}

#[test]
fn config_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"command":"sweep","backend":{"backend":"nilpotent_shift","n":8}}"#).unwrap();
    assert_eq!(sgcalc(&["sweep", "--config", bad.to_str().unwrap()]).status.code(), Some(2));

    // configs for another command are rejected
    assert_eq!(sgcalc(&["sweep", "--config", "curve"]).status.code(), Some(2));

    let grid = tmp.path().join("grid.json");
    std::fs::write(
        &grid,
        r#"{"command":"sweep","backend":{"backend":"nilpotent_shift","n":8},"measure":{"standard":"two_point"},
            "u_grid":{"kind":"list","values":[0.5,0.25]}}"#,
    )
    .unwrap();
    let out = run_in(&tmp.path().join("o"), &["sweep", "--config", grid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("increasing"));

    let tol = tmp.path().join("tol.json");
    std::fs::write(&tol, r#"{"command":"curve","measure":{"standard":"two_point"},"babylem_margin":-1.0}"#).unwrap();
    assert_eq!(run_in(&tmp.path().join("o"), &["curve", "--config", tol.to_str().unwrap()]).status.code(), Some(2));

    // hypotheses of the module are config errors too: nonzero mass
    let mass = tmp.path().join("mass.json");
    std::fs::write(
        &mass,
        r#"{"command":"sweep","backend":{"backend":"nilpotent_shift","n":8},"measure":{"atoms":[{"t":1.0,"re":1.0}]},
            "u_grid":{"kind":"list","values":[0.25]}}"#,
    )
    .unwrap();
    assert_eq!(run_in(&tmp.path().join("o"), &["sweep", "--config", mass.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failed_checks_exit_with_one_and_name_the_check() {
    let tmp = tempfile::tempdir().unwrap();
    let measure = tmp.path().join("mu.json");
    std::fs::write(&measure, r#"{"atoms":[{"t":1.0,"re":1.0},{"t":2.0,"re":-1.0}]}"#).unwrap();
    let cfg = tmp.path().join("strict.json");
    std::fs::write(
        &cfg,
        r#"{"command":"sweep","backend":{"backend":"nilpotent_shift","n":64},"measure":{"file":"mu.json"},
            "u_grid":{"kind":"grid_aligned","n":64,"k_lo":1,"k_hi":40},"min_margin":1.0}"#,
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let out = run_in(&out_dir, &["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let summary = read_json(out_dir.join("summary.json"));
    assert_eq!(summary["passed"], false);
    let check = &summary["checks"][0];
    assert_eq!(check["name"], "margin_positive");
    assert!(check["margin"].as_f64().unwrap() < 0.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL margin_positive"));
}

#[test]
fn verify_all_on_shipped_configs_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["verify-all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = read_json(tmp.path().join("summary.json"));
    assert_eq!(summary["passed"], true);
    let runs = summary["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 10);
    for r in runs {
        let name = r["config"].as_str().unwrap();
        assert!(tmp.path().join(name).join("summary.json").exists(), "{name}");
    }
}

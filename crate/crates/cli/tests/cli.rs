use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spinladder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinladder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn sidecar(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn help_exits_cleanly() {
    let out = spinladder(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("usage: spinladder"));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    for args in [
        vec!["not-an-experiment", "--out", out_dir],
        vec!["reference", "--bogus", "1", "--out", out_dir],
        vec!["reference", "--n_rungs", "6", "--out", out_dir],
        vec!["reference", "--g", "abc", "--out", out_dir],
        vec!["reference"],
    ] {
        let out = spinladder(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }

    let cfg = dir.path().join("dup.cfg");
    fs::write(&cfg, "h = 100\nh = 200\n").unwrap();
    let out = spinladder(&["reference", "--config", cfg.to_str().unwrap(), "--out", out_dir]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn io_errors_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    let out = spinladder(&["reference", "--config", missing.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 4);

    let file = dir.path().join("plain-file");
    fs::write(&file, "").unwrap();
    let blocked = file.join("out");
    let out = spinladder(&["reference", "--t_end", "1", "--n_points", "11", "--out", blocked.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
}

#[test]
fn reference_run_writes_table_and_replayable_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let out = spinladder(&[
        "reference", "--t_end", "2", "--n_points", "201", "--mutual_info", "true", "--out", first.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(first.join("reference.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,C12,C34,C56,F,I12,I56,I12_56,I34");
    assert_eq!(lines.count(), 201);

    let meta = sidecar(&first.join("reference.json"));
    assert_eq!(meta["experiment"], "reference");
    let f_max = meta["results"]["F_max"].as_f64().unwrap();
    assert!(f_max > 0.99 && f_max <= 1.0, "{f_max}");

    // The echoed config alone reproduces the table byte for byte.
    let cfg = dir.path().join("replay.cfg");
    fs::write(&cfg, meta["config_text"].as_str().unwrap()).unwrap();
    let second = dir.path().join("second");
    let out = spinladder(&["reference", "--config", cfg.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(csv, fs::read_to_string(second.join("reference.csv")).unwrap());
}

#[test]
fn zero_disorder_ensemble_has_no_spread() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinladder(&[
        "disorder", "--deltas", "0", "--n_samples", "3", "--t_end", "2", "--n_points", "201",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let meta = sidecar(&dir.path().join("disorder_delta_0.0.json"));
    assert_eq!(meta["results"]["std_peak_fidelity"].as_f64(), Some(0.0));
    let peaks = fs::read_to_string(dir.path().join("disorder_delta_0.0_peaks.csv")).unwrap();
    assert_eq!(peaks.lines().count(), 4);
}

#[test]
fn heatmap_matrix_has_axis_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinladder(&[
        "heatmap", "--g_points", "2", "--d_points", "3", "--t_end", "2", "--n_points", "201",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("heatmap.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], "g\\d");
    assert!(rows.iter().all(|r| r.len() == 4));
}

/// Numeric cells within 1e-9, everything else exact.
fn assert_tables_match(expected: &str, got: &str, what: &str) {
    let (e, g): (Vec<&str>, Vec<&str>) = (expected.lines().collect(), got.lines().collect());
    assert_eq!(e.len(), g.len(), "{what}: row count");
    assert_eq!(e[0], g[0], "{what}: header");
    for (row, (a, b)) in e.iter().zip(&g).enumerate().skip(1) {
        for (x, y) in a.split(',').zip(b.split(',')) {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) => assert!((x - y).abs() <= 1e-9, "{what} row {row}: {x} vs {y}"),
                _ => assert_eq!(x, y, "{what} row {row}"),
            }
        }
    }
}

#[test]
fn golden_examples_regenerate() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/golden");
    let dir = tempfile::tempdir().unwrap();
    for experiment in ["reference", "heatmap", "disorder", "scaling"] {
        let cfg = golden.join(format!("{experiment}.cfg"));
        let out_dir = dir.path().join(experiment);
        let out = spinladder(&[experiment, "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        for entry in fs::read_dir(golden.join(experiment)).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "csv") {
                let name = path.file_name().unwrap();
                let expected = fs::read_to_string(&path).unwrap();
                let got = fs::read_to_string(out_dir.join(name)).unwrap();
                assert_tables_match(&expected, &got, &format!("{experiment}/{}", name.to_string_lossy()));
            }
        }
    }
}

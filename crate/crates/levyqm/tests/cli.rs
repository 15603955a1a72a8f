use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn levyqm(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levyqm"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn summary(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn reproduces_all_table_rows() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&levyqm(dir.path(), &["reproduce-tables"]));
    assert_eq!(s["passed"], 5);
    assert_eq!(s["all_pass"], true);
    assert!(dir.path().join("reproduce_tables.json").exists());
    assert!(dir.path().join("reproduce_tables.provenance.json").exists());
}

#[test]
fn spectrum_fit_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (masses, want) in [
        ("5.11e-4,0.1056,1.77", [-2.35e-5, 2.35e-5, -1.95e-12]),
        ("7e-3,0.12,4.27", [-3.41e-3, 3.41e-3, -9.14e-9]),
    ] {
        let s = summary(&levyqm(dir.path(), &["spectrum", "fit", "--masses", masses]));
        let l = &s["lambdas"];
        for (key, w) in ["lambda1", "lambda2", "lambda3"].iter().zip(want) {
            assert!(rel(l[key].as_f64().unwrap(), w) < 5e-3, "{masses} {key}");
        }
        assert_eq!(s["roots"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn degenerate_and_invalid_inputs_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = levyqm(dir.path(), &["spectrum", "fit", "--masses", "1,1,1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
    let written: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(written["degenerate"], true);

    let out = levyqm(
        dir.path(),
        &["spectrum", "solve", "--lambdas", "-2,3,-1", "--base-mass", "1"],
    );
    assert_eq!(out.status.code(), Some(3));
    let out = levyqm(dir.path(), &["spectrum", "fit", "--masses", "3,2,1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = levyqm(dir.path(), &["density", "--mass", "-1", "--dt", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = levyqm(
        dir.path(),
        &["evolve", "--preset", "table3", "--mass", "1", "--branch", "5"],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = levyqm(
        dir.path(),
        &["density", "--mass", "1", "--dt", "1", "--points", "1024", "--dx", "1.0"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_io_code() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = levyqm(&blocker.join("sub"), &["reproduce-tables"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn density_csv_sums_to_one_and_matches_summary() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&levyqm(dir.path(), &["density", "--mass", "1", "--dt", "1"]));
    let (header, rows) = read_csv(&dir.path().join("density.csv"));
    assert_eq!(header, ["x", "value"]);
    let dx = rows[1][0] - rows[0][0];
    assert!(rel(dx, s["dx"].as_f64().unwrap()) < 1e-12);
    let mass = levyqm_core::quad::compensated_sum(rows.iter().map(|r| r[1])) * s["dx"].as_f64().unwrap();
    assert!((mass - 1.0).abs() < 1e-6);
    assert_eq!(mass, s["mass_sum"].as_f64().unwrap());
    let variance =
        levyqm_core::quad::compensated_sum(rows.iter().map(|r| r[0] * r[0] * r[1])) * s["dx"].as_f64().unwrap();
    assert!(rel(variance, s["variance"].as_f64().unwrap()) < 1e-15);
}

#[test]
fn loop_preset_has_quartic_tail() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&levyqm(
        dir.path(),
        &["loop", "--preset", "table3", "--variant", "scalar"],
    ));
    let exponent = s["variants"]["modified_scalar"]["power_exponent"].as_f64().unwrap();
    assert!((exponent + 4.0).abs() < 0.5);
    assert!(s["variants"]["unmodified_scalar"]["log_slope"].as_f64().unwrap() > 0.0);
    let (header, rows) = read_csv(&dir.path().join("loop.csv"));
    assert_eq!(header, ["cutoff", "unmodified_scalar", "modified_scalar"]);
    assert_eq!(rows.len(), 17);
    let last = s["variants"]["modified_scalar"]["final_value"].as_f64().unwrap();
    assert_eq!(rows[16][2], last);
}

#[test]
fn propagator_reports_certified_poles() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&levyqm(dir.path(), &["propagator", "--preset", "table1a"]));
    let poles = s["poles"].as_array().unwrap();
    assert_eq!(poles.len(), 3);
    for (p, mass) in poles.iter().zip([3e-3, 70e-3, 4.13]) {
        assert!(rel(p["p2"].as_f64().unwrap(), mass * mass) < 1e-6);
        assert_eq!(p["fit_pass"], true);
    }
    assert_eq!(s["scan_peaks"].as_array().unwrap().len(), 3);
    let out = levyqm(
        dir.path(),
        &[
            "propagator",
            "--lambdas",
            "-2.35e-5,2.35e-5,-1.95e-12",
            "--mass",
            "5.11e-4",
        ],
    );
    assert_eq!(summary(&out)["poles"].as_array().unwrap().len(), 3);
}

#[test]
fn evolve_tracks_group_velocity_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&levyqm(
        dir.path(),
        &[
            "evolve",
            "--steps",
            "100",
            "--dt",
            "0.05",
            "--snapshot-every",
            "50",
            "--points",
            "2048",
        ],
    ));
    let v = s["centroid_velocity"].as_f64().unwrap();
    assert!(rel(v, 1.0 / 2f64.sqrt()) < 0.01);
    assert!(s["max_norm_drift"].as_f64().unwrap() < 1e-10);
    let (header, rows) = read_csv(&dir.path().join("evolve.csv"));
    assert_eq!(header, ["t", "norm", "centroid", "variance", "momentum_centroid"]);
    assert_eq!(rows.len(), 101);
    let (_, snaps) = read_csv(&dir.path().join("evolve_snapshots.csv"));
    assert_eq!(snaps.len(), 3 * 2048);

    let s = summary(&levyqm(
        dir.path(),
        &[
            "evolve", "--preset", "table3", "--mass", "1", "--branch", "1", "--steps", "2",
        ],
    ));
    assert!(s["branch_mass"].as_f64().unwrap() > 200.0);
}

#[test]
fn levy_measure_columns() {
    let dir = tempfile::tempdir().unwrap();
    summary(&levyqm(
        dir.path(),
        &["levy-measure", "--mass", "2", "--dim", "3", "--points", "50"],
    ));
    let (header, rows) = read_csv(&dir.path().join("levy_measure.csv"));
    assert_eq!(header, ["r", "w"]);
    assert_eq!(rows.len(), 50);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0] && w[1][1] < w[0][1]));
}

#[test]
fn simulation_is_byte_identical_and_round_trips() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "simulate",
        "--paths",
        "5000",
        "--steps",
        "4",
        "--seed",
        "99",
        "--full-paths",
    ];
    let sa = summary(&levyqm(a.path(), &args));
    summary(&levyqm(b.path(), &args));
    for name in [
        "simulate.csv",
        "simulate_paths.csv",
        "simulate.json",
        "simulate.provenance.json",
    ] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
    let (_, rows) = read_csv(&a.path().join("simulate.csv"));
    let endpoints: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let (mean, variance) = levyqm::commands::mean_variance(&endpoints);
    assert_eq!(mean, sa["mean"].as_f64().unwrap());
    assert_eq!(variance, sa["variance"].as_f64().unwrap());
    let prov: Value = serde_json::from_slice(&fs::read(a.path().join("simulate.provenance.json")).unwrap()).unwrap();
    assert_eq!(prov["seed"], 99);
    assert_eq!(prov["created_unix"], 1700000000u64);
    assert_eq!(prov["parameters"]["paths"], 5000);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_levyqm"))
        .arg("reproduce-tables")
        .env("LEVYQM_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("reproduce_tables.json").exists());
}

#[test]
fn precision_flag_controls_digits() {
    let dir = tempfile::tempdir().unwrap();
    summary(&levyqm(
        dir.path(),
        &["--precision", "5", "levy-measure", "--mass", "1", "--points", "3"],
    ));
    let text = fs::read_to_string(dir.path().join("levy_measure.csv")).unwrap();
    let first = text.lines().nth(1).unwrap();
    assert_eq!(first.split(',').next().unwrap(), "1.0000e-3");
}

//! End-to-end tests of the `lur` binary: exit-code contract, output formats,
//! and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

use lur::operators::Spin;
use lur::states::{noise_model_state, singlet, werner, State, WernerParams};

fn lur_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lur"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_state(dir: &Path, name: &str, state: &State) -> String {
    let path = dir.join(name);
    std::fs::write(&path, state.to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn bounds_reports_certified_values() {
    let out = lur_bin(&["bounds", "spin1_xy"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("analytic: 0.4375"));
    assert!(text.contains("numeric:  0.4375"));

    let out = lur_bin(&["bounds", "pauli3", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["analytic"], 2.0);
    assert_eq!(doc["numeric"], 2.0);

    let out = lur_bin(&["bounds", "spin3", "--l", "2", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["analytic"], 2.0);
}

#[test]
fn bounds_requires_l_for_spin3() {
    let out = lur_bin(&["bounds", "spin3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_state_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // Singlet: conclusive with maximal relative violation.
    let singlet_file = write_state(
        dir.path(),
        "singlet1.json",
        &State::Pure(singlet(Spin::ONE)),
    );
    let out = lur_bin(&["check-state", &singlet_file, "--spec", "spin1_xy", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verdict"], "entangled");
    assert_eq!(report["c_lur"], 1.0);

    // Werner(0.2): total 4.8 > 4, inconclusive.
    let weak = write_state(
        dir.path(),
        "werner02.json",
        &State::Density(werner(WernerParams::new(0.2).unwrap())),
    );
    let out = lur_bin(&["check-state", &weak, "--spec", "pauli3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verdict"], "inconclusive");
    assert_eq!(report["total"], 4.8);

    // Werner(0.69): entangled with c_lur = 0.535.
    let strong = write_state(
        dir.path(),
        "werner069.json",
        &State::Density(werner(WernerParams::new(0.69).unwrap())),
    );
    let out = lur_bin(&["check-state", &strong, "--spec", "pauli3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["c_lur"], 0.535);

    // Invalid input: unnormalized pure state.
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"dim": 2, "kind": "pure", "data": [[1.0, 0.0], [1.0, 0.0]]}"#,
    )
    .unwrap();
    let out = lur_bin(&["check-state", bad.to_str().unwrap(), "--spec", "pauli3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not normalized"));
}

#[test]
fn simulate_then_check_data_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let state_file = write_state(
        dir.path(),
        "noise069.json",
        &State::Density(noise_model_state(0.69).unwrap()),
    );
    let data_file = dir.path().join("noise069_data.json");

    let out = lur_bin(&[
        "simulate",
        &state_file,
        "--spec",
        "spin1_xy",
        "--exact",
        "-o",
        data_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = lur_bin(&[
        "check-data",
        data_file.to_str().unwrap(),
        "--spec",
        "spin1_xy",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c_lur = report["c_lur"].as_f64().unwrap();
    assert!((c_lur - (32.0 * 0.69 - 11.0) / 21.0).abs() < 1e-9);

    // The same state through check-state agrees.
    let out = lur_bin(&[
        "check-state",
        &state_file,
        "--spec",
        "spin1_xy",
        "--format",
        "json",
    ]);
    let direct: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((direct["c_lur"].as_f64().unwrap() - c_lur).abs() < 1e-9);
}

#[test]
fn check_data_error_paths() {
    let dir = tempfile::tempdir().unwrap();

    // A dataset missing the L_y setting.
    let partial = dir.path().join("partial.json");
    std::fs::write(
        &partial,
        r#"{"dims":[3,3],"mode":"probabilities","settings":[
            {"label":"L_x","outcomes":[{"a":1.0,"b":-1.0,"w":1.0}]}
        ]}"#,
    )
    .unwrap();
    let out = lur_bin(&["check-data", partial.to_str().unwrap(), "--spec", "spin1_xy"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing setting 'L_y'"));

    // Maximally mixed statistics: 2 × 4/3 = 8/3 > 7/8, inconclusive.
    let state_file = write_state(
        dir.path(),
        "mixed9.json",
        &State::Density(lur::DensityMatrix::maximally_mixed(9)),
    );
    let data_file = dir.path().join("mixed9_data.json");
    lur_bin(&[
        "simulate",
        &state_file,
        "--spec",
        "spin1_xy",
        "--exact",
        "-o",
        data_file.to_str().unwrap(),
    ]);
    let out = lur_bin(&[
        "check-data",
        data_file.to_str().unwrap(),
        "--spec",
        "spin1_xy",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((report["total"].as_f64().unwrap() - 8.0 / 3.0).abs() < 1e-9);
}

#[test]
fn werner_sweep_table() {
    let out = lur_bin(&["werner-sweep", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "p_s,c_lur_pauli3,c_lur_pauli2,concurrence");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[5], "1,1,1,1");

    // All columns are nondecreasing in p_s.
    let parse_row = |line: &str| -> Vec<f64> {
        line.split(',').map(|x| x.parse().unwrap()).collect()
    };
    for w in lines[1..].windows(2) {
        let (prev, next) = (parse_row(w[0]), parse_row(w[1]));
        for col in 0..4 {
            assert!(next[col] >= prev[col] - 1e-12);
        }
    }

    let out = lur_bin(&["werner-sweep", "--from", "0.5", "--to", "0.2", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let state_file = write_state(
        dir.path(),
        "singlet.json",
        &State::Pure(singlet(Spin::HALF)),
    );

    let a = lur_bin(&["check-state", &state_file, "--spec", "pauli3", "--format", "json"]);
    let b = lur_bin(&["check-state", &state_file, "--spec", "pauli3", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);

    let s1 = lur_bin(&["simulate", &state_file, "--spec", "pauli3", "--shots", "10000", "--seed", "42"]);
    let s2 = lur_bin(&["simulate", &state_file, "--spec", "pauli3", "--shots", "10000", "--seed", "42"]);
    assert_eq!(s1.stdout, s2.stdout);
    assert!(!s1.stdout.is_empty());

    let w1 = lur_bin(&["werner-sweep", "--steps", "11", "--format", "json"]);
    let w2 = lur_bin(&["werner-sweep", "--steps", "11", "--format", "json"]);
    assert_eq!(w1.stdout, w2.stdout);
}

#[test]
fn config_file_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{"restarts": 4, "seed": 9}"#).unwrap();

    let out = lur_bin(&[
        "bounds",
        "pauli2",
        "--format",
        "json",
        "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["restarts"], 4);
    assert_eq!(doc["seed"], 9);

    let bad_config = dir.path().join("bad.json");
    std::fs::write(&bad_config, r#"{"restartz": 4}"#).unwrap();
    let out = lur_bin(&["bounds", "pauli2", "--config", bad_config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

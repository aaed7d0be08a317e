use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TWO_PHOTONS: &str = r#"{"photons": [
  {"label": 1, "alpha1": [0.6, 0.0], "alpha2": [0.0, 0.8]},
  {"label": 2, "alpha1": [0.5, 0.5], "alpha2": [0.5, -0.5]}
]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photon-product"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn prob_prints_the_success_probability() {
    let out = run(&["prob", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "0.03125");
    assert_eq!(run(&["prob", "--n", "0"]).status.code(), Some(1));
}

#[test]
fn verify_single_photon() {
    let dir = TempDir::new().unwrap();
    let t = file(
        &dir,
        "t.json",
        r#"{"photons": [{"label": 1, "alpha1": [0.0, 0.6], "alpha2": [0.8, 0.0]}]}"#,
    );
    let report = json(&run(&["verify", "--target", s(&t), "--oracle"]));
    assert!(report["fidelity"].as_f64().unwrap() >= 1.0 - 1e-12);
    assert_eq!(report["probability"].as_f64().unwrap(), 1.0);
    assert!(report["oracle"]["max_amp_diff"].as_f64().unwrap() < 1e-12);
}

#[test]
fn synth_then_simulate_reproduces_target() {
    let dir = TempDir::new().unwrap();
    let t = file(&dir, "t.json", TWO_PHOTONS);
    let net = dir.path().join("c.net");
    let rep = dir.path().join("synth.json");
    let out = run(&[
        "synth",
        "--target",
        s(&t),
        "--out-netlist",
        s(&net),
        "--report",
        s(&rep),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let synth: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert!(synth["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert!((synth["probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    for stage in ["A", "B", "C", "D"] {
        assert!(synth["settings"][stage]["theta"].is_f64(), "{stage}");
    }

    let netlist = std::fs::read_to_string(&net).unwrap();
    assert_eq!(netlist.lines().filter(|l| l.starts_with("bs")).count(), 4);
    assert_eq!(netlist.lines().filter(|l| l.starts_with("det")).count(), 2);

    let sim = json(&run(&["simulate", "--netlist", s(&net), "--target", s(&t)]));
    assert!(sim["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert!((sim["probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let t = file(&dir, "t.json", TWO_PHOTONS);
    for args in [
        vec!["verify", "--target", s(&t)],
        vec!["nogo", "--sweep", "3", "--seed", "9"],
        vec!["closure", "--k", "3", "--trials", "20", "--seed", "4"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn nogo_on_a_target_respects_the_bound() {
    let dir = TempDir::new().unwrap();
    let t = file(&dir, "t.json", TWO_PHOTONS);
    let r = json(&run(&["nogo", "--target", s(&t)]));
    let best = r["best_fidelity"].as_f64().unwrap();
    assert!(best <= r["bound_1d"].as_f64().unwrap() + 1e-4);
}

#[test]
fn closure_reports_statistics() {
    let r = json(&run(&["closure", "--k", "2", "--trials", "30", "--seed", "1"]));
    assert!(r["max_distance"].as_f64().unwrap() > 1e-3);
    assert!(r["max_fit_residual"].as_f64().unwrap() <= 1e-9);

    let r = json(&run(&[
        "closure",
        "--k",
        "3",
        "--trials",
        "30",
        "--seed",
        "1",
        "--zero-phases",
    ]));
    assert!(r["max_distance"].as_f64().unwrap() < 1e-6);
    assert_eq!(r["phases"], "zero");
}

#[test]
fn malformed_target_is_a_positioned_diagnostic() {
    let dir = TempDir::new().unwrap();
    let t = file(
        &dir,
        "t.json",
        "{\"photons\": [\n  {\"label\": 1, \"alpha1\": [1, 0]}\n]}",
    );
    let out = run(&["synth", "--target", s(&t)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("t.json:2:"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_netlist_is_a_positioned_diagnostic() {
    let dir = TempDir::new().unwrap();
    let t = file(&dir, "t.json", TWO_PHOTONS);
    let net = file(&dir, "c.net", "modes 4\n# ok\nxx 0 1\n");
    let out = run(&["simulate", "--netlist", s(&net), "--target", s(&t)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("c.net:3:1: unknown directive"));
}

#[test]
fn domain_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let t = file(
        &dir,
        "t.json",
        r#"{"photons": [{"label": 3, "alpha1": [0.9, 0], "alpha2": [0, 0]}]}"#,
    );
    let out = run(&["verify", "--target", s(&t)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("ω3"));

    // every photon lands on a detector
    let t = file(&dir, "t2.json", TWO_PHOTONS);
    let net = file(&dir, "dark.net", "modes 4\ndet 1\ndet 2\ndet 0\n");
    let out = run(&["simulate", "--netlist", s(&net), "--target", s(&t)]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["verify", "--target", s(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["nogo"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn pretty_view_is_plain_text() {
    let dir = TempDir::new().unwrap();
    let t = file(&dir, "t.json", TWO_PHOTONS);
    let out = run(&["--pretty", "verify", "--target", s(&t)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fidelity"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}

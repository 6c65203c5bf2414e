use std::path::Path;
use std::process::{Command, Output};

use quasiconvex::corpus;
use quasiconvex::io::PolylineFile;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasiconvex")).args(args).output().unwrap()
}

fn write_curve(dir: &Path, name: &str, curve: &quasiconvex::PolyCurve) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(&PolylineFile::from_curve(curve)).unwrap()).unwrap();
    p.display().to_string()
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

#[test]
fn build_verify_render_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_curve(dir.path(), "hairpin.json", &corpus::hairpin(0.05));
    let (dump, report, svg) = (dir.path().join("d.json"), dir.path().join("r.json"), dir.path().join("h.svg"));
    let out = run(&["build", &input, "--dump", &s(&dump), "--report", &s(&report), "--svg", &s(&svg)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dump.exists() && report.exists() && svg.exists());

    let out = run(&["verify", &s(&dump)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let svg2 = dir.path().join("again.svg");
    let out = run(&["render", &s(&dump), "--svg", &s(&svg2), "--cubes"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&svg2).unwrap().contains("id=\"cubes\""));
}

#[test]
fn failed_invariant_exits_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_curve(dir.path(), "hairpin.json", &corpus::hairpin(0.05));
    let cfg = dir.path().join("tight.json");
    std::fs::write(&cfg, r#"{"stretch_bound": 1.5}"#).unwrap();
    let out = run(&["build", &input, "--config", &s(&cfg)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("assertion failed") && err.contains("stretch"), "{err}");
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vertices": [[0, 0]], "extra": true}"#).unwrap();
    assert_eq!(run(&["build", &s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["build", &s(&dir.path().join("missing.json"))]).status.code(), Some(2));
    assert_eq!(run(&["build", &s(&dir.path().join("curve.txt"))]).status.code(), Some(2));
    let input = write_curve(dir.path(), "seg.json", &corpus::segment());
    let cfg = dir.path().join("bad_cfg.json");
    std::fs::write(&cfg, r#"{"eps": 2.0}"#).unwrap();
    assert_eq!(run(&["build", &input, "--config", &s(&cfg)]).status.code(), Some(2));
    assert_eq!(run(&["verify", &s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["render", &input]).status.code(), Some(2));
}

#[test]
fn point_cloud_and_strict_preset() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cloud.csv");
    std::fs::write(&csv, "x,y\n0,0\n1,0\n2,0.1\n3,0\n").unwrap();
    let out = run(&["--preset", "strict", "--kmax", "6", "build", &s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn oracle_subcommand_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("oracle.json");
    let out = run(&["oracle", "--report", &s(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

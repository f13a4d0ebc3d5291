use std::process::{Command, Output};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metric-embed"))
        .args(args)
        .env_remove("METRIC_EMBED_SEED")
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn data(name: &str) -> String {
    format!("{DATA}/{name}")
}

#[test]
fn envelope_and_wald() {
    let out = run(&["wald", "-q", "1,1,1,1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "wald");
    assert!(v["verdict"].is_null());
    assert_eq!(v["report"]["classification"], "spherical");
}

#[test]
fn verdicts_set_the_exit_status() {
    let ok = run(&["check-global", "-g", &data("k4.txt"), "-k", "0"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["verdict"], true);
    let bad = run(&["check-local", "-g", &data("star.json"), "-v", "h"]);
    assert_eq!(bad.status.code(), Some(1));
    let v = json(&bad);
    assert_eq!(v["verdict"], false);
    assert_eq!(v["report"]["witness"]["condition"]["kind"], "flat-excess");
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(run(&["wald"]).status.code(), Some(64));
    assert_eq!(run(&["check-global", "-g", &data("k4.txt")]).status.code(), Some(64));
    let missing = run(&["qc-bound", "-m", "/nonexistent.off"]);
    assert_eq!(missing.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "a b 1\nb c -2\n").unwrap();
    let out = run(&["check-global", "-g", bad.to_str().unwrap(), "-k", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.txt:2:"), "{err}");
    let q = run(&["wald", "-q", "1,1,1"]);
    assert_eq!(q.status.code(), Some(2));
    assert!(String::from_utf8(q.stderr).unwrap().starts_with("metric-embed: --quadruple: "));
}

#[test]
fn exact_wedge_values() {
    let v = json(&run(&["wedge", "-a", "2pi/3"]));
    assert_eq!(v["report"]["exact_k_i"], "3/2");
    let v = json(&run(&["wedge", "-f", "6"]));
    assert_eq!(v["report"]["exact_k_i"], "5/3");
}

#[test]
fn mesh_commands() {
    let v = json(&run(&["qc-bound", "-m", &data("cube.off")]));
    assert_eq!(v["report"]["bound"].as_f64().unwrap(), 2.0);
    let v = json(&run(&["link-volume", "-m", &data("cube.off"), "-v", "0"]));
    assert!((v["report"]["volumes"][0]["value"].as_f64().unwrap() - 0.125).abs() < 1e-12);
}

#[test]
fn seed_comes_from_the_environment() {
    let args = ["link-volume", "-m", &data("tetrahedron.off"), "-v", "0", "--method", "monte-carlo", "--samples", "5000"];
    let default = run(&args).stdout;
    let explicit = Command::new(env!("CARGO_BIN_EXE_metric-embed"))
        .args(args)
        .env("METRIC_EMBED_SEED", "42")
        .output()
        .unwrap()
        .stdout;
    let other = Command::new(env!("CARGO_BIN_EXE_metric-embed"))
        .args(args)
        .env("METRIC_EMBED_SEED", "7")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(default, explicit);
    assert_ne!(default, other);
}

#[test]
fn obj_export_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("e.obj");
    let report = dir.path().join("r.json");
    let out = run(&[
        "-o",
        report.to_str().unwrap(),
        "bz-element",
        "--big",
        "1,1,1",
        "--small",
        "0.9,0.9,0.9",
        "--obj",
        obj.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 7);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 6);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(report).unwrap()).unwrap();
    assert_eq!(v["command"], "bz-element");
}

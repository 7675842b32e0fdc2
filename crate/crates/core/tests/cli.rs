use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pesym(out_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pesym"))
        .args(args)
        .env("PESYM_OUT_DIR", out_dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(dir: &Path, name: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn residual_on_stratified_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = pesym(dir.path(), &["residual", "--points", "200"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(dir.path(), "residual");
    assert_eq!(r["command"], "residual");
    assert!(r["metrics"]["linf"].as_f64().unwrap() < 1e-10);
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS residual"));
}

#[test]
fn negative_control_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["group-verify", "--trials", "3", "--points", "50", "--perturb", "omega-scale", "1.01"];
    let o = pesym(dir.path(), &args);
    assert_eq!(code(&o), 1);
    let r = report(dir.path(), "group-verify");
    assert_eq!(r["verdicts"][0]["pass"], false);
    assert_eq!(code(&pesym(dir.path(), &args[..5])), 0);
}

#[test]
fn megaideals_lists_eleven_entries() {
    let dir = tempfile::tempdir().unwrap();
    let o = pesym(dir.path(), &["megaideals", "--degree", "4"]);
    assert_eq!(code(&o), 0);
    let r = report(dir.path(), "megaideals");
    assert_eq!(r["details"]["entries"].as_array().unwrap().len(), 11);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&pesym(dir.path(), &["residual", "--field", "no-such-field"])), 2);
    assert_eq!(code(&pesym(dir.path(), &["residual", "--points", "many"])), 2);
    assert_eq!(code(&pesym(dir.path(), &[])), 2);
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"command": "residual", "pionts": 5}"#).unwrap();
    assert_eq!(code(&pesym(dir.path(), &["--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&pesym(dir.path(), &["--config", "/nonexistent/run.json"])), 2);
}

#[test]
fn domain_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&pesym(dir.path(), &["megaideals", "--degree", "3"])), 3);
    assert_eq!(code(&pesym(dir.path(), &["symmetry-check", "--field", "inertial", "--extended"])), 3);
    let spec = dir.path().join("spec.json");
    let mut cfg: Value = serde_json::to_value(pesym::reduction::ReductionConfig::builtin("constant-frame").unwrap()).unwrap();
    cfg["sigma"] = cfg["gamma"].clone();
    std::fs::write(&spec, cfg.to_string()).unwrap();
    assert_eq!(code(&pesym(dir.path(), &["reduce", "--spec", spec.to_str().unwrap()])), 3);
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command": "isomorphism", "points": 10, "seed": 3}"#).unwrap();
    let from_file = dir.path().join("file.json");
    let from_flags = dir.path().join("flags.json");
    let o = pesym(dir.path(), &["--config", cfg.to_str().unwrap(), "--report", from_file.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = pesym(dir.path(), &["isomorphism", "--points", "10", "--seed", "3", "--report", from_flags.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let strip = |p: &Path| {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("wall_time");
        v
    };
    assert_eq!(strip(&from_file), strip(&from_flags));
}

#[test]
fn reports_are_byte_identical_apart_from_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = pesym(dir.path(), &["reduce", "--spec", "constant-frame", "--verify", "--points", "20", "--grid", "4", "--report", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        let text = std::fs::read_to_string(path).unwrap();
        text.lines().filter(|l| !l.trim_start().starts_with("\"wall_time\"")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn emit_samples_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("samples.csv");
    let o = pesym(dir.path(), &["reduce", "--spec", "constant-frame", "--points", "7", "--emit-samples", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x,y,p,u,v,omega,phi,T");
    assert_eq!(lines.len(), 8);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 9));
}

#[test]
fn derotate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for direction in ["to-rotating", "to-rest"] {
        let field = if direction == "to-rest" { "inertial" } else { "subsiding-shear" };
        let o = pesym(dir.path(), &["derotate", "--field", field, "--direction", direction, "--verify", "--points", "100"]);
        assert_eq!(code(&o), 0, "{direction}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

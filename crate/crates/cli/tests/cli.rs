use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liequant")).args(args).env_remove("LIEQUANT_REPORT_DIR").output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), value)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn check_passes_on_bundled_groups() {
    for name in ["galilei", "hw", "fixtures/schrodinger.spec"] {
        let (code, v) = json(&["check", name]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["passed"], true);
        assert_eq!(v["schema_version"], 1);
    }
}

#[test]
fn mutated_cocycle_fails_with_residual() {
    let dir = tempfile::tempdir().unwrap();
    let text = liequant::fixtures::fixture_text("galilei").unwrap().replace("V'^2/2", "V'^2");
    let path = dir.path().join("mutated.spec");
    std::fs::write(&path, text).unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("cocycle fails: residual"), "{text}");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.spec");
    std::fs::write(&path, "name = broken\n[law\n").unwrap();
    assert_eq!(run(&["check", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["check", "no-such-group"]).status.code(), Some(2));
    assert_eq!(run(&["represent", "su2", "--lambda", "1/2"]).status.code(), Some(2));
    assert_eq!(run(&["represent", "galilei"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn analyze_reports() {
    let (code, v) = json(&["analyze", "schrodinger"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["characteristic"].as_array().unwrap().len(), 4);
    assert_eq!(strings(&v["report"]["gauge_generators"]), vec!["A + D"]);
    let (_, v) = json(&["analyze", "su2"]);
    assert_eq!(strings(&v["report"]["gauge_generators"]), vec!["z1 + z1c"]);
    let (_, v) = json(&["analyze", "rk"]);
    assert_eq!(strings(&v["report"]["characteristic"]), vec!["a"]);
}

#[test]
fn polarize_template_and_schrodinger() {
    let (code, v) = json(&["polarize", "template"]);
    assert_eq!(code, 0);
    let anomaly = v["report"]["anomaly"].as_array().unwrap();
    assert_eq!(anomaly[0]["verdict"], "exists");
    assert_eq!(anomaly[1]["at"], "k = 0");
    assert_eq!(anomaly[1]["verdict"], "absent");
    let (_, v) = json(&["polarize", "schrodinger"]);
    assert_eq!(v["report"]["anomaly"][0]["verdict"], "absent");
}

#[test]
fn su2_weight_three() {
    let (code, v) = json(&["represent", "su2", "--lambda", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["dimension"], 4);
    assert_eq!(v["report"]["casimir"], "15/4");
}

#[test]
fn metaplectic_casimir() {
    let (code, v) = json(&["represent", "schrodinger", "--ho", "v", "--cutoff", "12"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["casimir"], "-3/16");
}

#[test]
fn heisenberg_weyl_pictures() {
    for p in ["configuration", "momentum", "complex"] {
        let (code, v) = json(&["represent", "hw", "--picture", p]);
        assert_eq!(code, 0, "{p}");
        assert_eq!(v["report"]["operators"]["Xi"], "(i)");
    }
}

#[test]
fn virasoro_resonance() {
    let (code, v) = json(&["virasoro", "--c", "1", "--r", "2", "--no-fock"]);
    assert_eq!(code, 0);
    let roots: Vec<i64> = v["report"]["characteristic"]["roots"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    assert_eq!(roots, vec![-2, 0, 2]);
    assert_eq!(v["report"]["classical_h"], "-1/8");
}

#[test]
fn json_is_deterministic_and_mirrored_to_report_dir() {
    let a = run(&["--json", "analyze", "hw"]);
    let b = run(&["--json", "analyze", "hw"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_liequant"))
        .args(["check", "hw"])
        .env("LIEQUANT_REPORT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("check-hw.json")).unwrap()).unwrap();
    assert_eq!(saved["command"], "check");
}

#[test]
fn envelope_matches_schema_keys() {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("report.schema.json")).unwrap())
            .unwrap();
    let (_, v) = json(&["check", "hw"]);
    let mut required = strings(&schema["required"]);
    let mut present: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
    required.sort();
    present.sort();
    assert_eq!(required, present);
}

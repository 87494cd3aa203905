use std::io::Write;
use std::process::{Command, Output};

fn volform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volform")).args(args).output().expect("binary runs")
}

fn example(name: &str) -> String {
    format!("{}/../../docs/examples/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn doc_file(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".vf").tempfile().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn validate(json: &serde_json::Value) {
    let schema: serde_json::Value = serde_json::from_str(include_str!("../../../report.schema.json")).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let errors: Vec<String> = match compiled.validate(json) {
        Ok(()) => Vec::new(),
        Err(errs) => errs.map(|e| e.to_string()).collect(),
    };
    assert!(errors.is_empty(), "{}", errors.join("\n"));
}

#[test]
fn surface_json_validates() {
    let o = volform(&["check", "surface:p=x,q=y", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    validate(&json);
    assert_eq!(json["summary"]["fail"], 0);
    assert!(json["checks"].as_array().unwrap().iter().all(|c| c["status"] == "PASS"));
}

#[test]
fn every_scenario_validates_and_passes() {
    for t in ["torus:2", "sl2", "quadric", "xm1:2", "product:quadric,torus:1"] {
        let o = volform(&["check", t, "--format", "json", "--timings"]);
        assert_eq!(o.status.code(), Some(0), "{t}");
        let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        validate(&json);
        assert!(json["checks"][0]["wall_time_ms"].is_number());
    }
}

#[test]
fn same_seed_gives_identical_json() {
    let args = ["check", "torus:3", "--format", "json", "--seed", "7", "--points", "5"];
    let (a, b) = (volform(&args), volform(&args));
    assert_eq!(a.stdout, b.stdout);
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["seed"], 7);
    assert_eq!(json["points"], 5);
}

#[test]
fn xm1_reports_exactness() {
    let o = volform(&["check", "xm1:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[   PASS] exact(omega, tau)"), "{}", stdout(&o));
}

#[test]
fn wrong_potential_fails_with_residual() {
    let o = volform(&["check", &example("wrong_potential.vf")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("[   FAIL] potential(z, delta_z, omega)"), "{out}");
    assert!(out.contains("residual:"), "{out}");
}

#[test]
fn shipped_examples_pass() {
    for f in ["surface.vf", "quadric_torus.vf"] {
        assert_eq!(volform(&["check", &example(f)]).status.code(), Some(0), "{f}");
    }
}

#[test]
fn unknown_exits_zero_with_warning() {
    let f = doc_file(
        "chart { vars a1*, a2, b1, b2; rel a1*b2 - a2*b1 - 1 solve b2; }\n\
         field xi = b1 d/da1 + b2 d/da2;\n\
         check semicompat(xi, xi, 2);\n",
    );
    let o = volform(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("UNKNOWN"), "{out}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning") || out.contains("warning"));
}

#[test]
fn parse_errors_exit_two() {
    let f = doc_file("chart { vars x; }\nfield v = x d/dx\n");
    let o = volform(&["parse", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error at 3:1"));
    assert_eq!(volform(&["check", f.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn parse_accepts_valid_syntax() {
    let o = volform(&["parse", &example("surface.vf")]);
    assert_eq!(o.status.code(), Some(0));
    let o = volform(&["parse", &example("surface.vf"), "--print"]);
    assert!(stdout(&o).starts_with("chart {"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(volform(&["check", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(volform(&["check", "torus:0"]).status.code(), Some(2));
    assert_eq!(volform(&["check", "sl2", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(volform(&[]).status.code(), Some(2));
}

#[test]
fn scenarios_lists_catalog() {
    let o = volform(&["scenarios"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["torus", "sl2", "surface", "xm1", "quadric", "product"] {
        assert!(out.contains(name), "{out}");
    }
}

#[test]
fn show_round_trips_through_parse() {
    let o = volform(&["show", "sl2"]);
    assert_eq!(o.status.code(), Some(0));
    let f = doc_file(&stdout(&o));
    let again = volform(&["show", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&again), stdout(&o));
}

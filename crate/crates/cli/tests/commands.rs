use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(format!("{name}.loop"))
}

fn scratch(name: &str, src: &str) -> PathBuf {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, src).unwrap();
    p
}

fn linterm(args: &[&str], file: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linterm"))
        .args(&args[..1])
        .arg(file)
        .args(&args[1..])
        .env_remove("LINTERM_PROFILE")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report-schema.json");
        let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        jsonschema::validator_for(&schema).unwrap()
    })
}

fn json(args: &[&str], file: &Path) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = linterm(&a, file);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
    (code(&o), v)
}

#[test]
fn analyze_exit_codes_follow_the_verdict() {
    let (c, v) = json(&["analyze"], &corpus("count_down"));
    assert_eq!((c, v["verdict"].as_str()), (0, Some("TERMINATING")));
    assert!(v["witness"].is_null());
    let (c, v) = json(&["analyze"], &corpus("count_up"));
    assert_eq!((c, v["verdict"].as_str()), (1, Some("NONTERMINATING")));
    assert_eq!(v["witness"]["point"], serde_json::json!(["1"]));
    let (c, v) = json(&["analyze"], &corpus("negate"));
    assert_eq!((c, v["reduction"]["power"].as_u64()), (0, Some(2)));
    let o = linterm(&["analyze"], &corpus("count_down"));
    assert!(stdout(&o).starts_with("TERMINATING"));
}

#[test]
fn malformed_input_exits_64() {
    let bad = scratch("malformed.loop", "vars x; while x > 0 do x := x * x end");
    assert_eq!(code(&linterm(&["analyze"], &bad)), 64);
    let o = Command::new(env!("CARGO_BIN_EXE_linterm")).arg("frobnicate").output().unwrap();
    assert_eq!(code(&o), 64);
    let missing = Path::new(env!("CARGO_TARGET_TMPDIR")).join("missing.loop");
    assert_eq!(code(&linterm(&["analyze"], &missing)), 3);
}

#[test]
fn strict_budget_failure_exits_2() {
    let o = linterm(&["analyze", "--strict", "--power-cap", "1"], &corpus("negate"));
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    let (c, v) = json(&["analyze", "--power-cap", "1"], &corpus("negate"));
    assert_eq!((c, v["verdict"].as_str()), (2, Some("UNKNOWN")));
}

#[test]
fn simulate_reports_the_exit_step() {
    let o = linterm(&["simulate", "--init", "5"], &corpus("count_down"));
    assert_eq!(stdout(&o).trim(), "terminated at 5");
    let (c, v) = json(&["simulate", "--init", "3", "--steps", "50"], &corpus("count_up"));
    assert_eq!((c, v["outcome"].as_str(), v["steps_executed"].as_u64()), (0, Some("survived"), Some(50)));
    assert_eq!(code(&linterm(&["simulate", "--init", "1,2"], &corpus("count_down"))), 3);
}

#[test]
fn spectrum_lists_minimal_polynomials() {
    let (_, v) = json(&["spectrum"], &corpus("rotation"));
    let eig = v["spectrum"]["eigenvalues"].as_array().unwrap();
    let rot: Vec<&Value> = eig.iter().filter(|e| e["min_poly"] == "x^2 - 6x + 25").collect();
    assert_eq!(rot.len(), 2);
    assert!(rot.iter().all(|e| e["modulus"]["exact"] == "5" && e["modulus"]["approx"]["value"] == "5.000000000000"));
    let o = linterm(&["spectrum"], &corpus("rotation"));
    assert!(stdout(&o).contains("x^2 - 6x + 25"));
}

#[test]
fn relations_of_the_rotation() {
    let (c, v) = json(&["relations"], &corpus("rotation"));
    assert_eq!(c, 0);
    let groups = v["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0]["basis"], serde_json::json!([[1, 1]]));
    assert_eq!(groups[0]["complete"], true);
}

#[test]
fn box_search_finds_survivors() {
    let (_, v) = json(&["box", "--bound", "3", "--steps", "100"], &corpus("count_up"));
    assert_eq!(v["survivor"], serde_json::json!(["1"]));
    let (_, v) = json(&["box", "--bound", "5", "--steps", "100"], &corpus("count_down"));
    assert!(v["survivor"].is_null());
    assert_eq!(v["points_checked"].as_u64(), Some(11));
}

#[test]
fn json_output_is_deterministic() {
    let a = stdout(&linterm(&["relations", "--json"], &corpus("pell")));
    let b = stdout(&linterm(&["relations", "--json", "--workers", "1"], &corpus("pell")));
    assert_eq!(a, b);
    let strip = |s: String| -> Value {
        let mut v: Value = serde_json::from_str(&s).unwrap();
        v["timings"] = Value::Null;
        v
    };
    let x = strip(stdout(&linterm(&["analyze", "--json"], &corpus("pell"))));
    let y = strip(stdout(&linterm(&["analyze", "--json", "--workers", "2"], &corpus("pell"))));
    assert_eq!(x, y);
}

#[test]
fn profile_environment_is_accepted() {
    let o = Command::new(env!("CARGO_BIN_EXE_linterm"))
        .arg("analyze")
        .arg(corpus("count_up"))
        .env("LINTERM_PROFILE", "quick")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    let o = Command::new(env!("CARGO_BIN_EXE_linterm"))
        .arg("analyze")
        .arg(corpus("count_up"))
        .env("LINTERM_PROFILE", "bogus")
        .output()
        .unwrap();
    assert_eq!(code(&o), 64);
}

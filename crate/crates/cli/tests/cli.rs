//! End-to-end tests of the `cubiform` binary: schemas, determinism, and
//! the exit-code contract (0 success/obstructed, 2 input error,
//! 3 inconclusive).

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubiform"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_abelian(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("abelian.json");
    let out = run(&["abelian", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    path
}

fn write_quotient(dir: &Path, zeta: &str, name: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let out = run(&["quotient", "--zeta", zeta, "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    path
}

#[test]
fn abelian_emits_the_expected_tensor() {
    let out = run(&["abelian"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["m"], 15);
    assert_eq!(v["field"], "Q");
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 15);
    // the triple (z12, z3b1, zb2b3) has coefficient 1
    let expected = serde_json::json!([[1, 10, 15], "1"]);
    assert!(entries.contains(&expected), "missing entry {expected}");
}

#[test]
fn commands_are_byte_deterministic() {
    let a = run(&["abelian"]);
    let b = run(&["abelian"]);
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let form = write_quotient(dir.path(), "i", "x4.json");
    let model = dir.path().join("model.json");
    let out = run(&[
        "resolve",
        "--form",
        form.to_str().unwrap(),
        "--a",
        "-1,1,3",
        "--out",
        model.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v1 = run(&["obstruct", "--model", model.to_str().unwrap()]);
    let v2 = run(&["obstruct", "--model", model.to_str().unwrap()]);
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn emitted_forms_round_trip_through_parsing() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_abelian(dir.path());
    let bytes = std::fs::read(&path).unwrap();
    // feeding the emitted form back reproduces it bit-exactly
    let reparsed: cubiform::CubicForm =
        serde_json::from_slice(&bytes).expect("emitted form parses");
    let mut again = serde_json::to_string_pretty(&reparsed).unwrap();
    again.push('\n');
    assert_eq!(again.into_bytes(), bytes);
}

#[test]
fn trivial_quotient_equals_abelian_output() {
    let a = run(&["abelian"]);
    let q = run(&["quotient", "--zeta", "1"]);
    assert_eq!(a.stdout, q.stdout);
}

#[test]
fn order_two_quotient_doubles_every_coefficient() {
    let a = stdout_json(&run(&["abelian"]));
    let q = stdout_json(&run(&["quotient", "--zeta", "-1"]));
    assert_eq!(q["m"], 15);
    let a_entries = a["entries"].as_array().unwrap();
    let q_entries = q["entries"].as_array().unwrap();
    assert_eq!(a_entries.len(), q_entries.len());
    for (ae, qe) in a_entries.iter().zip(q_entries) {
        assert_eq!(ae[0], qe[0]);
        let av: i64 = ae[1].as_str().unwrap().parse().unwrap();
        let qv: i64 = qe[1].as_str().unwrap().parse().unwrap();
        assert_eq!(2 * av, qv);
    }
}

#[test]
fn order_four_quotient_has_nine_variables() {
    let q = stdout_json(&run(&["quotient", "--zeta", "i"]));
    assert_eq!(q["m"], 9);
    assert_eq!(q["entries"].as_array().unwrap().len(), 6);
}

#[test]
fn unknown_zeta_is_an_input_error() {
    let out = run(&["quotient", "--zeta", "omega^2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn quotient_accepts_an_action_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("action.json");
    std::fs::write(&spec, r#"{"zeta": "-omega", "order": 6}"#).unwrap();
    let q = stdout_json(&run(&["quotient", "--action", spec.to_str().unwrap()]));
    assert_eq!(q["m"], 9);

    std::fs::write(&spec, r#"{"zeta": "-omega", "order": 4}"#).unwrap();
    let out = run(&["quotient", "--action", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rank_of_point_blowup_at_exceptional_class_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let abelian = write_abelian(dir.path());
    let blown = dir.path().join("blown.json");
    let out = run(&[
        "blowup-point",
        "--form",
        abelian.to_str().unwrap(),
        "--a",
        "2",
        "--out",
        blown.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let mut point = vec!["0"; 16];
    point[0] = "1";
    let point_json = serde_json::to_string(&point).unwrap();
    let rep = stdout_json(&run(&[
        "rank",
        "--form",
        blown.to_str().unwrap(),
        "--point",
        &point_json,
    ]));
    assert_eq!(rep["rank"], 1);
}

#[test]
fn rank_at_zero_point_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let abelian = write_abelian(dir.path());
    let zeros = serde_json::to_string(&vec!["0"; 15]).unwrap();
    let rep = stdout_json(&run(&[
        "rank",
        "--form",
        abelian.to_str().unwrap(),
        "--point",
        &zeros,
    ]));
    assert_eq!(rep["rank"], 0);
}

#[test]
fn rank_with_named_coordinates_on_the_quotient_form() {
    let dir = tempfile::tempdir().unwrap();
    let form = write_quotient(dir.path(), "i", "x4.json");
    let rep = stdout_json(&run(&[
        "rank",
        "--form",
        form.to_str().unwrap(),
        "--point",
        r#"{"z1b1": "1", "z2b2": "1", "z3b3": "1"}"#,
    ]));
    assert_eq!(rep["rank"], 9);
}

#[test]
fn rank_dimension_mismatch_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let abelian = write_abelian(dir.path());
    let out = run(&[
        "rank",
        "--form",
        abelian.to_str().unwrap(),
        "--point",
        r#"["1", "0"]"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hessian_prints_linear_forms() {
    let dir = tempfile::tempdir().unwrap();
    let cube = dir.path().join("cube.json");
    std::fs::write(&cube, r#"{"m": 1, "field": "Q", "entries": [[[1,1,1], "1"]]}"#).unwrap();
    let rep = stdout_json(&run(&["hessian", "--form", cube.to_str().unwrap()]));
    assert_eq!(rep["m"], 1);
    assert_eq!(rep["matrix"][0][0], "6*x_1");
}

#[test]
fn obstruct_on_the_order_four_model_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let form = write_quotient(dir.path(), "i", "x4.json");
    let model = dir.path().join("model.json");
    assert!(run(&[
        "resolve",
        "--form",
        form.to_str().unwrap(),
        "--a",
        "1",
        "--out",
        model.to_str().unwrap(),
    ])
    .status
    .success());
    let out = run(&["obstruct", "--model", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "OBSTRUCTED");
    assert_eq!(v["certificate"]["steps"].as_array().unwrap().len(), 9);
    assert!(!v["residual_assumptions"].as_array().unwrap().is_empty());
}

#[test]
fn obstruct_on_a_cube_sum_is_inconclusive_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let form = dir.path().join("cubes.json");
    std::fs::write(
        &form,
        r#"{"m": 2, "field": "Q", "entries": [[[1,1,1], "1"], [[2,2,2], "1"]]}"#,
    )
    .unwrap();
    let model = dir.path().join("model.json");
    assert!(run(&[
        "resolve",
        "--form",
        form.to_str().unwrap(),
        "--a",
        "1",
        "--out",
        model.to_str().unwrap(),
    ])
    .status
    .success());
    let out = run(&["obstruct", "--model", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "INCONCLUSIVE");
    assert_eq!(v["counterexample"], serde_json::json!(["1", "0"]));
}

#[test]
fn zero_exceptional_cube_is_rejected_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let form = write_quotient(dir.path(), "i", "x4.json");
    let out = run(&["resolve", "--form", form.to_str().unwrap(), "--a", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("nonzero"), "stderr was: {msg}");

    // the same constraint holds for hand-written model files
    let model = dir.path().join("model.json");
    let text = format!(
        r#"{{"form": {}, "k": 1, "a": ["0"]}}"#,
        std::fs::read_to_string(&form).unwrap().trim()
    );
    std::fs::write(&model, text).unwrap();
    let out = run(&["obstruct", "--model", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonzero"));
}

#[test]
fn certify_exit_codes_follow_the_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let form = write_quotient(dir.path(), "-omega", "x6.json");
    let out = run(&["certify", "--form", form.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["result"], "certificate");

    let cube = dir.path().join("cube.json");
    std::fs::write(&cube, r#"{"m": 1, "field": "Q", "entries": [[[1,1,1], "1"]]}"#).unwrap();
    let out = run(&["certify", "--form", cube.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["result"], "counterexample");
    assert_eq!(v["point"], serde_json::json!(["1"]));
}

#[test]
fn threads_flag_and_env_are_accepted() {
    let out = bin()
        .args(["abelian"])
        .env("CUBIFORM_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let flag = run(&["--threads", "2", "abelian"]);
    assert_eq!(out.stdout, flag.stdout);
}

#[test]
fn malformed_model_files_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["obstruct", "--model", bad.to_str().unwrap()]).status.code(), Some(2));

    std::fs::write(&bad, r#"{"m": 2, "field": "Q", "entries": [[[2,1,1], "1"]]}"#).unwrap();
    assert_eq!(run(&["rank", "--form", bad.to_str().unwrap(), "--point", "[\"1\",\"0\"]"]).status.code(), Some(2));

    std::fs::write(&bad, r#"{"unrelated": true}"#).unwrap();
    assert_eq!(run(&["hessian", "--form", bad.to_str().unwrap()]).status.code(), Some(2));
}

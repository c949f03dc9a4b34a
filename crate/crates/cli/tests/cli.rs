//! End-to-end tests of the binary: pipe composability, exit codes,
//! strict parsing, and deterministic machine output.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn pslat(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pslat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn pslat");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("wait for pslat")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn model_pipes_into_analyze() {
    let model = pslat(&["model", "P2"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let analyzed = pslat(&["analyze", "--machine"], &model_text);
    let v = stdout_json(&analyzed);
    assert_eq!(v["status"], "ok");
    let surface = &v["result"]["surface"];
    assert_eq!(surface["ns_rank"], 1);
    assert_eq!(surface["k_squared"], "9");
    assert_eq!(surface["defect"]["defect"], 0);
    assert_eq!(surface["geometric"], true);
    assert_eq!(surface["minimal"]["status"], "yes");
}

#[test]
fn f1_reduce_reaches_rank_one() {
    let model = pslat(&["model", "F1", "--c", "1"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let reduced = pslat(&["reduce", "--machine"], &model_text);
    let v = stdout_json(&reduced);
    assert_eq!(v["result"]["pattern"], "all-ranks-one");
    let ranks = v["result"]["final_ranks"].as_array().unwrap();
    assert!(ranks.iter().all(|r| r == 1));
    assert!(!v["result"]["word"].as_str().unwrap().is_empty());
}

#[test]
fn criterion_cases_via_cli() {
    let model = pslat(&["model", "P1xP1", "--c", "0"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let verdict = pslat(&["criterion", "--machine"], &model_text);
    let v = stdout_json(&verdict);
    assert_eq!(v["result"]["case"], 2);

    let model = pslat(&["model", "BlowupP2", "--k", "4"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let verdict = pslat(&["criterion", "--machine"], &model_text);
    let v = stdout_json(&verdict);
    assert_eq!(v["result"]["case"], 3);
}

#[test]
fn criterion_refuses_ruled_surface_with_exit_4() {
    let model = pslat(&["model", "ruled_surface", "--genus", "2"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let out = pslat(&["criterion"], &model_text);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("defect -16"), "stderr: {err}");
}

#[test]
fn mmp_contracts_f1_to_the_plane() {
    let model = pslat(&["model", "F1", "--c", "1"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let out = pslat(&["mmp", "--machine"], &model_text);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["steps"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["classification"]["kind"], "P2");
    assert_eq!(v["result"]["final"]["defect"], 0);
}

#[test]
fn parse_rejects_ragged_and_unknown_and_floats() {
    for bad in [
        r#"{"gram": [[1,2],[3]]}"#,
        r#"{"gram": [[1]], "extra": 1}"#,
        r#"{"gram": [[1.5]]}"#,
        r#"{"gram": [[1,2],[3,4]"#,
        r#"{"gram": [[1,0],[0,1]], "point": [1,0,0]}"#,
    ] {
        let out = pslat(&["analyze"], bad);
        assert_eq!(out.status.code(), Some(1), "input: {bad}");
    }
}

#[test]
fn bad_point_is_rejected_as_not_surface_like() {
    let out = pslat(&["analyze"], r#"{"gram": [[1]], "point": [0]}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn definite_symmetric_form_is_inconclusive_exit_3() {
    let out = pslat(&["analyze", "--bound", "6"], r#"{"gram": [[1,0],[0,1]]}"#);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn mutate_output_feeds_every_consumer() {
    let model = pslat(&["model", "P1xP1", "--c", "1"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let mutated = pslat(&["mutate", "--word", "L3,F3"], &model_text);
    assert!(mutated.status.success());
    let mutated_text = String::from_utf8(mutated.stdout).unwrap();
    for consumer in [vec!["analyze", "--machine"], vec!["toric", "--machine"], vec!["mmp", "--machine"]] {
        let out = pslat(&consumer, &mutated_text);
        assert!(
            out.status.success(),
            "consumer {consumer:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn machine_output_is_deterministic() {
    let model = pslat(&["model", "BlowupP2", "--k", "3"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let a = pslat(&["analyze", "--machine"], &model_text);
    let b = pslat(&["analyze", "--machine"], &model_text);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn toric_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("fan.svg");
    let model = pslat(&["model", "P2"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let out = pslat(
        &["toric", "--machine", "--svg", svg_path.to_str().unwrap()],
        &model_text,
    );
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<line"));
}

#[test]
fn arbitrary_precision_integers_round_trip() {
    let big = "1234567890123456789012345678901234567890";
    let input = format!(r#"{{"gram": [[1, {big}], [0, 1]], "basis": [[1, 0], [0, 1]]}}"#);
    let out = pslat(&["mutate", "--word", ""], &input);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(big), "big integer was not preserved: {text}");
}

#[test]
fn k3_mukai_analyze_reports_symmetric_case() {
    let model = pslat(&["model", "K3Mukai"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let out = pslat(&["analyze", "--machine"], &model_text);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["surface"]["unimodular"], true);
    assert_eq!(v["result"]["surface"]["defect"]["defect"], -8);
}

#[test]
fn analyze_without_point_reports_family_when_ambiguous() {
    // genus-1 ruled surface: K^2 = 0, the kernel is two-dimensional
    let model = pslat(&["model", "ruled", "--genus", "1"], "");
    let model_text = String::from_utf8(model.stdout).unwrap();
    let stripped: Value = serde_json::from_str(&model_text).unwrap();
    let mut obj = stripped.as_object().unwrap().clone();
    obj.remove("point");
    let out = pslat(&["analyze", "--machine"], &Value::Object(obj).to_string());
    let v = stdout_json(&out);
    assert_eq!(v["status"], "point-choice-required");
    assert_eq!(v["result"]["detection"]["kernel_rank"], 2);
}

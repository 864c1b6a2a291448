use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn sppq(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sppq"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_spp() {
    let o = sppq(&["count", "--class", "SPP", "--n", "2", "--M", "1"], "");
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn enumerate_is_one_object_per_line() {
    let o = sppq(&["enumerate", "--class", "QTCPP", "--n", "2", "--M", "1"], "");
    assert!(o.status.success());
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|v| v["kind"] == "plane"));
}

#[test]
fn pstair_example_maps() {
    let o = sppq(
        &["map", "--class", "pstairPP", "--n", "4", "--M", "8"],
        "[[8,6,6,3],[4,4,0],[4,2],[1]]",
    );
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["output"]["rows"],
        serde_json::json!([[8, 7, 7, 4], [6, 6, 2], [6, 4], [3]])
    );
}

#[test]
fn map_then_map_back() {
    let fwd = sppq(
        &["map", "--class", "SPP", "--n", "3", "--M", "4", "--trace"],
        "[[4,3,1],[2,1],[0]]",
    );
    assert!(fwd.status.success());
    let v: Value = serde_json::from_str(&stdout(&fwd)).unwrap();
    assert_eq!(v["stat_ledger"]["S_in"], v["stat_ledger"]["S_out"]);
    assert!(v["trace"].as_array().is_some_and(|t| !t.is_empty()));
    let image = serde_json::to_string(&v["output"]).unwrap();
    let back = sppq(&["map", "--class", "QTCPP", "--n", "3", "--M", "4"], &image);
    let w: Value = serde_json::from_str(&stdout(&back)).unwrap();
    assert_eq!(w["output"], v["input"]);
}

#[test]
fn verify_examples_passes() {
    let o = sppq(&["verify", "--suite", "examples", "--format", "json"], "");
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["failures"], serde_json::json!([]));
}

#[test]
fn flag_errors_exit_two() {
    assert_eq!(
        sppq(&["count", "--class", "SPP", "--n", "2"], "").status.code(),
        Some(2)
    );
    assert_eq!(
        sppq(&["count", "--class", "XYZ", "--n", "2", "--M", "1"], "")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sppq(&["verify", "--suite", "nope"], "").status.code(), Some(2));
    assert_eq!(
        sppq(&["map", "--class", "SPP", "--n", "2", "--M", "1"], "[[3]]")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn render_writes_svg() {
    let o = sppq(&["render", "--class", "stairPP", "--n", "2", "--m", "2"], "[[2,1],[1]]");
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("<svg"));
}

//! Exit codes and diagnostics of the command-line front end.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relay-bounds"))
}

#[test]
fn invalid_parameter_exits_2_naming_the_field() {
    let out = bin().args(["bounds", "--n2", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("n2"),
        "diagnostic should name the field: {err}"
    );
}

#[test]
fn non_stochastic_dm_spec_exits_2_with_cell_index() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"sizes":{"s":1,"x1":2,"x2":1,"y2":2,"y3":2},
            "state_pmf":[1.0],
            "kernel":[0.9,0.0,0.0,0.1,0.1,0.0,0.0,0.95]}"#,
    )
    .unwrap();
    let out = bin().arg("dm").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("x1=1"), "cell index missing: {err}");
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = bin().arg("dm").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dm_reports_bound_and_degradedness_verdict() {
    let out = bin()
        .args([
            "dm",
            concat!(env!("CARGO_MANIFEST_DIR"), "/examples/relay_bsc.json"),
            "--budget",
            "4",
            "--seed",
            "11",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bits/use"));
    assert!(text.contains("physically degraded kernel: true"));
    assert!(text.contains("best factorization:"));
}

#[test]
fn bounds_json_is_machine_readable() {
    let out = bin()
        .args(["bounds", "--grid-points", "41", "--refine", "2", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is valid JSON");
    assert!(value["threshold"].is_number());
    assert!(value["bounds"].as_array().unwrap().len() >= 4);
}

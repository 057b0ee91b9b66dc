use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use igl_cli::Report;

fn igl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igl")).args(args).output().expect("binary runs")
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).to_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn unknown_verdict_exits_zero() {
    let out = igl(&["decide", &corpus("prufer_gate.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: Unknown"));
}

#[test]
fn expr_prints_the_group() {
    let out = igl(&["expr", &corpus("prufer_y.json")]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "Z ⊕ Z ⊕ Z");
}

#[test]
fn verify_passes_on_corpus() {
    let out = igl(&["verify", &corpus("")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn directory_batch_is_a_json_array_in_name_order() {
    let out = igl(&["decide", &corpus(""), "--format", "json"]);
    assert!(out.status.success());
    let reports: Vec<Report> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports.len(), 26);
    assert_eq!(reports[0].name.as_deref(), Some("amalgam_cyclic"));
    assert_eq!(reports[25].name.as_deref(), Some("zeta7_pullback"));
}

#[test]
fn step_inputs_only_with_full_trace() {
    let plain = igl(&["decide", &corpus("f2_three_branches.json"), "--format", "json"]);
    let full = igl(&["decide", &corpus("f2_three_branches.json"), "--format", "json", "--trace", "full"]);
    let plain = Report::from_json(std::str::from_utf8(&plain.stdout).unwrap().trim()).unwrap();
    let full = Report::from_json(std::str::from_utf8(&full.stdout).unwrap().trim()).unwrap();
    assert!(plain.certificate.iter().all(|s| s.inputs.is_empty()));
    assert!(full.certificate.iter().any(|s| !s.inputs.is_empty()));
    assert_eq!(plain.verdict, full.verdict);
}

#[test]
fn precondition_violations_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let conductor = write(
        dir.path(),
        "conductor.json",
        r#"{"v":1,"kind":"noeth_local","k":{"finite":{"p":2,"r":1}},"branches":[{"L":{"finite":{"p":2,"r":1}},"e":1}],"conductor_nonzero":false}"#,
    );
    let trace = write(
        dir.path(),
        "trace.json",
        r#"{"v":1,"kind":"scattered_space","bound":"w^2","labels":{"0":["Z"],"1":["Z"],"2":["Z"]},"trace":[["0",true],["w",false]]}"#,
    );
    for p in [conductor, trace] {
        let out = igl(&["decide", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn batch_exit_code_is_the_worst_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", include_str!("../corpus/dvr.json"));
    write(dir.path(), "b.json", "{\"v\":1,\n\"kind\":\"krull\",\n\"domain\":\"ring\"}");
    let out = igl(&["decide", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("dvr"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b.json:3:"));
}

#[test]
fn missing_file_exits_two() {
    let out = igl(&["decide", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(2));
}

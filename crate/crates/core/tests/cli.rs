//! The `feederpath` binary end to end.

use std::path::{Path, PathBuf};
use std::process::Command;

use feederpath::io::emit::geojson;
use feederpath::synthetic::{Radial, RadialSpec};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&std::ffi::OsStr]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_feederpath"))
        .args(args)
        .output()
        .unwrap();
    out.status.code().expect("exited normally")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn academic_config_exits_with_issues() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solution.json");
    let diag = dir.path().join("diagnostics.json");
    let code = run(&[
        "--config".as_ref(),
        fixture("academic.cfg").as_os_str(),
        "--out".as_ref(),
        out.as_os_str(),
        "--diagnostics-out".as_ref(),
        diag.as_os_str(),
    ]);
    assert_eq!(code, 2);
    let sol = read_json(&out);
    assert_eq!(sol["status"], "optimal");
    assert_eq!(sol["paths"].as_array().unwrap().len(), 5);
    assert_eq!(sol["uncovered"], serde_json::json!(["e2"]));
    assert!(read_json(&diag).to_string().contains("customer-without-path"));
}

#[test]
fn complete_synthetic_network_exits_clean() {
    let r = Radial::generate(RadialSpec {
        feeders: 4,
        customers: 20,
        seed: 9,
    });
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.geojson");
    std::fs::write(&net, geojson(&r.network, None, None)).unwrap();
    let length = r.search.max_length.to_string();
    let code = run(&[
        "--network".as_ref(),
        net.as_os_str(),
        "--max-paths".as_ref(),
        "3".as_ref(),
        "--max-distance".as_ref(),
        "10".as_ref(),
        "--max-length".as_ref(),
        length.as_ref(),
    ]);
    assert_eq!(code, 0);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solution.json");
    // Too short for any path: every customer ends up uncovered.
    let code = run(&[
        "--config".as_ref(),
        fixture("academic.cfg").as_os_str(),
        "--max-length".as_ref(),
        "5".as_ref(),
        "--out".as_ref(),
        out.as_os_str(),
    ]);
    assert_eq!(code, 2);
    let sol = read_json(&out);
    assert!(sol["paths"].as_array().unwrap().is_empty());
    assert_eq!(sol["uncovered"].as_array().unwrap().len(), 6);
}

#[test]
fn mps_extension_selects_mps() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.mps");
    let code = run(&[
        "--config".as_ref(),
        fixture("academic.cfg").as_os_str(),
        "--lp-out".as_ref(),
        model.as_os_str(),
    ]);
    assert_eq!(code, 2);
    let text = std::fs::read_to_string(model).unwrap();
    assert!(text.starts_with("NAME"), "{text}");
}

#[test]
fn missing_network_file_fails() {
    let code = run(&[
        "--network".as_ref(),
        "does-not-exist.geojson".as_ref(),
        "--max-distance".as_ref(),
        "10".as_ref(),
        "--max-length".as_ref(),
        "30".as_ref(),
    ]);
    assert_eq!(code, 1);
}

#[test]
fn invalid_settings_fail() {
    let code = run(&[
        "--config".as_ref(),
        fixture("academic.cfg").as_os_str(),
        "--max-length=-1".as_ref(),
    ]);
    assert_eq!(code, 1);
    let code = run(&[
        "--config".as_ref(),
        fixture("academic.cfg").as_os_str(),
        "--alpha".as_ref(),
        "0.5".as_ref(),
    ]);
    assert_eq!(code, 1);
}

#[test]
fn node_limit_abort_fails() {
    let code = run(&[
        "--config".as_ref(),
        fixture("academic.cfg").as_os_str(),
        "--node-limit".as_ref(),
        "1".as_ref(),
    ]);
    assert_eq!(code, 1);
}

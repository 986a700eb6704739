//! Every runnable example, executed as a test.

#[path = "../examples/academic.rs"]
mod academic;
#[path = "../examples/candidate_search.rs"]
mod candidate_search;
#[path = "../examples/files.rs"]
mod files;
#[path = "../examples/model_export.rs"]
mod model_export;
#[path = "../examples/synthetic_recovery.rs"]
mod synthetic_recovery;
#[path = "../examples/validity_check.rs"]
mod validity_check;

#[test]
fn academic_selects_five_paths_and_flags_e2() {
    let out = academic::run_example().unwrap();
    assert_eq!(out.lines().filter(|l| l.starts_with(" * ")).count(), 5, "{out}");
    assert!(out.contains("objective = 4.8 (Optimal"), "{out}");
    assert!(out.contains("customer-without-path e2"), "{out}");
    assert!(out.contains("element-unassigned e10"), "{out}");
    assert!(out.contains("suggestion: junction e14"), "{out}");
    assert!(out.trim_end().ends_with("exit status 2"), "{out}");
}

#[test]
fn candidate_search_reports_both_alphas() {
    let out = candidate_search::run_example().unwrap();
    assert!(out.contains("alpha = 2\n") && out.contains("alpha = 1.05\n"), "{out}");
    assert!(!out.contains("valid false"), "{out}");
    assert!(out.contains(": 46944"), "{out}");
}

#[test]
fn validity_check_separates_the_two_cases() {
    let out = validity_check::run_example().unwrap();
    assert!(out.contains("feasible: true"), "{out}");
    assert!(out.contains("feasible: false"), "{out}");
    assert!(out.contains("violated V_e6_1"), "{out}");
}

#[test]
fn model_export_round_trips() {
    let out = model_export::run_example().unwrap();
    assert!(out.contains("34 binaries, 22 rows"), "{out}");
    assert_eq!(out.matches("re-import identical: true").count(), 2, "{out}");
}

#[test]
fn synthetic_recovery_matches_construction() {
    let out = synthetic_recovery::run_example().unwrap();
    assert!(out.contains("exit status 0"), "{out}");
    assert!(out.contains("match: true"), "{out}");
}

#[test]
fn files_writes_every_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = files::run_example_in(dir.path()).unwrap();
    assert!(out.starts_with("exit status 2"), "{out}");
    for name in [
        "solution.json",
        "colored.geojson",
        "network.svg",
        "model.lp",
        "diagnostics.json",
    ] {
        assert!(dir.path().join(name).is_file(), "{name} missing");
    }
}

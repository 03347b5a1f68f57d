use std::io::Write;
use std::process::{Command, Output};

use ::quantumness::cli::{Report, StateFile};
use ::quantumness::{bell_state, example_separable, random_density};
use tempfile::NamedTempFile;

fn state_file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantumness")).args(args).output().unwrap()
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

fn assert_fails(out: &Output, code: i32, needle: &str) {
    assert_eq!(out.status.code(), Some(code), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains(needle), "stderr {stderr:?} lacks {needle:?}");
}

#[test]
fn measures_on_bell_state() {
    let f = state_file(&StateFile::from_density(&bell_state()).to_json());
    let out = run(&["measures", path(&f), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let m = report.measures.unwrap();
    assert!((m.mutual_information - 2.0).abs() < 1e-9);
    assert!((m.discord - 1.0).abs() < 1e-6);
    assert_eq!(report.dims, Some(vec![2, 2]));
    assert_eq!(report.input_sha256.unwrap().len(), 64);

    let text = run(&["measures", path(&f)]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("2.00000000000"), "{text}");
}

#[test]
fn json_report_round_trips_bit_exactly() {
    let f = state_file(&StateFile::from_density(&random_density(&[2, 2], 3).unwrap()).to_json());
    let out = run(&["measures", path(&f), "--json"]);
    let json = String::from_utf8(out.stdout).unwrap();
    let report = Report::from_json(&json).unwrap();
    assert_eq!(report.to_json(), json.trim_end());
    let again = Report::from_json(&report.to_json()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn bmap_demo_and_validate_succeed() {
    let out = run(&["bmap-demo", "0.3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let bmap = report.bmap.unwrap();
    assert_eq!(bmap.verdict, "NCP");
    assert!(bmap.insensitivity_residual < 1e-13);

    let f = state_file(&StateFile::from_density(&random_density(&[2, 2, 2], 1).unwrap()).to_json());
    let out = run(&["validate", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn quantumness_of_separable_example_is_small() {
    let f = state_file(&StateFile::from_density(&example_separable(0.5).unwrap()).to_json());
    let out = run(&["quantumness", path(&f), "--restarts", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let q = report.quantumness.unwrap();
    assert!(q.upper_bound < 1e-3);
    assert_eq!((q.terms, q.seed), (8, 0));
}

#[test]
fn corrupt_json_reports_position() {
    let f = state_file("{\n  \"dims\": [2, 2],\n  \"matrix\": [[1, 0]\n");
    assert_fails(&run(&["measures", path(&f)]), 2, "line ");
    let f = state_file("{\"dims\": [2, 2], \"matrix\": [], \"extra\": 1}");
    assert_fails(&run(&["validate", path(&f)]), 2, "line 1, column");
}

#[test]
fn shape_errors_are_parse_errors() {
    let mut file = StateFile::from_density(&bell_state());
    file.dims = vec![2, 3];
    let f = state_file(&file.to_json());
    assert_fails(&run(&["measures", path(&f)]), 2, "do not multiply");

    let mut ragged = StateFile::from_density(&bell_state());
    ragged.matrix[1].pop();
    let f = state_file(&ragged.to_json());
    assert_fails(&run(&["validate", path(&f)]), 2, "row 1");

    assert_fails(&run(&["validate", "/nonexistent/state.json"]), 2, "error:");
}

#[test]
fn invalid_density_is_a_validation_error() {
    let mut file = StateFile::from_density(&bell_state());
    file.matrix[0][0] = [1.2, 0.0];
    file.matrix[3][3] = [-0.2, 0.0];
    let f = state_file(&file.to_json());
    assert_fails(&run(&["measures", path(&f)]), 3, "negative eigenvalue");

    let mut asymmetric = StateFile::from_density(&bell_state());
    asymmetric.matrix[0][3] = [0.5, 0.1];
    let f = state_file(&asymmetric.to_json());
    assert_fails(&run(&["validate", path(&f)]), 3, "error:");
}

#[test]
fn non_qubit_pairs_are_unsupported() {
    let f = state_file(&StateFile::from_density(&random_density(&[2, 3], 2).unwrap()).to_json());
    assert_fails(&run(&["measures", path(&f)]), 4, "dimensions [2, 3]");
    assert_fails(&run(&["quantumness", path(&f)]), 4, "two-qubit");
}

#[test]
fn out_of_range_arguments() {
    assert_fails(&run(&["bmap-demo", "1.5"]), 5, "1.5");
    let f = state_file(&StateFile::from_density(&bell_state()).to_json());
    assert_fails(&run(&["measures", path(&f), "--grid", "4"]), 5, "grid");
    assert_fails(&run(&["measures", path(&f), "--tol", "0"]), 5, "tolerance");
    assert_fails(&run(&["quantumness", path(&f), "--terms", "2"]), 5, "terms");
}

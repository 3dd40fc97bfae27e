//! End-to-end runs of the `skeleton-solve` binary.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_skeleton-solve")).args(args).arg("--output-dir").arg(dir).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn chain_example_one_is_regular() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run(dir.path(), &["chain", fixture("example1.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let report = read_json(&dir.path().join("chain.json"));
    assert_eq!(report["length"], 1);
    assert_eq!(report["kind"], "regular");
    assert_eq!(report["passed"], true);
}

#[test]
fn chain_example_two_is_singular_index_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(dir.path(), &["chain", fixture("example2.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let report = read_json(&dir.path().join("chain.json"));
    assert_eq!(report["kind"], "singular");
    assert_eq!(report["nilpotency_index"], 2);
}

#[test]
fn chain_random_is_seeded() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run(a.path(), &["chain", "--random", "6", "--seed", "4"]).0, 0);
    assert_eq!(run(b.path(), &["chain", "--random", "6", "--seed", "4"]).0, 0);
    assert_eq!(read_json(&a.path().join("chain.json")), read_json(&b.path().join("chain.json")));
}

#[test]
fn chain_of_identity_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("identity.json");
    std::fs::write(&input, r#"{"B": {"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 1.0]]}}"#).unwrap();
    assert_eq!(run(dir.path(), &["chain", input.to_str().unwrap()]).0, 2);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    std::fs::write(&input, "{not json").unwrap();
    assert_eq!(run(dir.path(), &["solve", input.to_str().unwrap()]).0, 2);
}

#[test]
fn solve_example_one_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run(dir.path(), &["solve", fixture("example1.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let csv = std::fs::read_to_string(dir.path().join("solution.csv")).unwrap();
    assert!(csv.starts_with("t,v1,v2,v3"));
    assert_eq!(csv.lines().count(), 1002);
    let report = read_json(&dir.path().join("solution.json"));
    assert_eq!(report["chain_length"], 1);
    assert!(report["residual"].as_f64().unwrap() <= report["residual_limit"].as_f64().unwrap());
}

#[test]
fn csv_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("example1.json");
    assert_eq!(run(dir.path(), &["solve", input.to_str().unwrap()]).0, 0);
    let solution = dir.path().join("solution.csv");
    let (code, text) = run(dir.path(), &["verify", input.to_str().unwrap(), "--solution", solution.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("difference 0e0"), "{text}");
}

#[test]
fn verify_catches_an_edited_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("example1.json");
    assert_eq!(run(dir.path(), &["solve", input.to_str().unwrap()]).0, 0);
    let solution = dir.path().join("solution.csv");
    let csv = std::fs::read_to_string(&solution).unwrap();
    let mut lines: Vec<String> = csv.lines().map(String::from).collect();
    let mut cells: Vec<String> = lines[500].split(',').map(String::from).collect();
    cells[1] = "1.0e0".into();
    lines[500] = cells.join(",");
    std::fs::write(&solution, lines.join("\n") + "\n").unwrap();
    assert_eq!(run(dir.path(), &["verify", input.to_str().unwrap(), "--solution", solution.to_str().unwrap()]).0, 3);
}

#[test]
fn solve_zero_parabolic_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run(dir.path(), &["solve", fixture("parabolic_zero.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let csv = std::fs::read_to_string(dir.path().join("solution.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,t,u1,u2,u3"));
    for line in lines {
        assert!(line.split(',').skip(2).all(|v| v.parse::<f64>().unwrap() == 0.0), "{line}");
    }
}

#[test]
fn pde_round_trips_through_verify() {
    for name in ["parabolic_generic.json", "mixed.json", "integro.json"] {
        let dir = tempfile::tempdir().unwrap();
        let input = fixture(name);
        assert_eq!(run(dir.path(), &["solve", input.to_str().unwrap()]).0, 0, "{name}");
        let solution = dir.path().join("solution.csv");
        let (code, text) = run(dir.path(), &["verify", input.to_str().unwrap(), "--solution", solution.to_str().unwrap()]);
        assert_eq!(code, 0, "{name}: {text}");
    }
}

#[test]
fn initial_condition_on_singular_chain_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["solve", fixture("example2_c0.json").to_str().unwrap()]).0, 4);
}

#[test]
fn mode_overflow_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["solve", fixture("parabolic_generic.json").to_str().unwrap(), "--modes", "100000"]).0, 4);
}

#[test]
fn injected_faults_exit_three() {
    for name in ["example1.json", "example2.json", "parabolic_generic.json", "mixed.json", "integro.json"] {
        let dir = tempfile::tempdir().unwrap();
        let (code, text) = run(dir.path(), &["solve", fixture(name).to_str().unwrap(), "--inject-fault"]);
        assert_eq!(code, 3, "{name}: {text}");
    }
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["chain", fixture("example1.json").to_str().unwrap(), "--inject-fault"]).0, 3);
}

#[test]
fn demos_pass_and_unknown_exits_five() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["example1", "example2", "pde24", "integro30", "projector"] {
        let (code, text) = run(dir.path(), &["demo", name]);
        assert_eq!(code, 0, "{name}: {text}");
        assert!(!text.contains("FAIL"), "{text}");
    }
    assert_eq!(run(dir.path(), &["demo", "wave"]).0, 5);
}

//! End-to-end tests of the `cover` binary: exit-code contract, JSON output,
//! and reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cover"))
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn verify_theorem1_example_values() {
    let out = run(&["verify-theorem1", "--n", "3", "--mu", "2", "--nu", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["formula"], serde_json::json!([63, 1]));
    assert_eq!(v["geometric"], serde_json::json!([63, 1]));
    assert_eq!(v["match"], serde_json::json!(true));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["verify-theorem1", "--n", "3"]).status.code(), Some(1));
    assert_eq!(
        run(&["verify-theorem1", "--n", "3", "--mu", "x", "--nu", "1"])
            .status
            .code(),
        Some(1)
    );
    // Out-of-range and non-positive inputs.
    assert_eq!(
        run(&["verify-theorem1", "--n", "9", "--mu", "1", "--nu", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["verify-theorem1", "--n", "2", "--mu", "0", "--nu", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["covering-check", "--help"]).status.code(), Some(0));
}

#[test]
fn malformed_input_reports_position_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "vertices": [[[0,1],[0,1]], [[1,0]"#).unwrap();
    let out = run(&[
        "density",
        "--body",
        bad.to_str().unwrap(),
        "--lattice",
        &fixture("z2.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "missing position info: {err}");

    let bad_rat = dir.path().join("badrat.json");
    std::fs::write(
        &bad_rat,
        r#"{"dim": 2, "vertices": [[[0,1],[0,0]], [[1,1],[0,1]], [[0,1],[1,1]]]}"#,
    )
    .unwrap();
    let out = run(&[
        "density",
        "--body",
        bad_rat.to_str().unwrap(),
        "--lattice",
        &fixture("z2.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("vertices[0][1]"), "missing coordinate path: {err}");
}

#[test]
fn covering_check_exit_codes() {
    // Cube tiling certifies: exit 0.
    let out = run(&[
        "covering-check",
        "--body",
        &fixture("cube2.json"),
        "--lattice",
        &fixture("z2.json"),
        "--depth",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["certificate"]["verdict"], serde_json::json!("Covered"));
    assert_eq!(v["density"]["frac"], serde_json::json!([1, 1]));

    // The exactly-critical triangle lattice stays inconclusive: exit 2,
    // certificate still printed.
    let out = run(&[
        "covering-check",
        "--body",
        &fixture("t2.json"),
        "--lattice",
        &fixture("fary.json"),
        "--depth",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["certificate"]["verdict"], serde_json::json!("Inconclusive"));

    // Slightly shrunk lattice certifies at depth 12: exit 0, density 3/2·(1025/1024)².
    let out = run(&[
        "covering-check",
        "--body",
        &fixture("t2.json"),
        "--lattice",
        &fixture("fary-safe.json"),
        "--depth",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["certificate"]["verdict"], serde_json::json!("Covered"));
    assert_eq!(v["density"]["frac"], serde_json::json!([3151875, 2097152]));
}

#[test]
fn t3_fixture_certifies_with_audits() {
    let out = run(&[
        "covering-check",
        "--body",
        &fixture("t3.json"),
        "--lattice",
        &fixture("t3-lattice.json"),
        "--depth",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["certificate"]["verdict"], serde_json::json!("Covered"));

    let out = run(&[
        "theorem2-audit",
        "--simplex",
        &fixture("t3.json"),
        "--lattice",
        &fixture("t3-lattice.json"),
        "--depth",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let rows = v["report"]["rows"].as_array().unwrap();
    let final_row = rows
        .iter()
        .find(|r| r["check"] == "final_density_bound")
        .expect("final bound row");
    assert!(final_row["context"]
        .as_str()
        .unwrap()
        .contains("1.0000152587890625"));

    let out = run(&[
        "hadwiger-audit",
        "--body",
        &fixture("t3.json"),
        "--lattice",
        &fixture("t3-lattice.json"),
        "--depth",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn audits_reject_non_coverings_with_exit_two() {
    let out = run(&[
        "hadwiger-audit",
        "--body",
        &fixture("t2.json"),
        "--lattice",
        &fixture("z2.json"),
        "--depth",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn star_number_with_oracle_agrees() {
    let out = run(&[
        "star-number",
        "--body",
        &fixture("t2.json"),
        "--lattice",
        &fixture("fary.json"),
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["star_number"], serde_json::json!(12));
    assert_eq!(v["oracle"], serde_json::json!(12));
}

#[test]
fn decompose_and_bounds_audit_pass() {
    let out = run(&["decompose", "--n", "2", "--mu", "3", "--nu", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["pieces"].as_array().unwrap().len(), 4);
    assert_eq!(v["verification"]["all_satisfied"], serde_json::json!(true));

    let out = run(&["bounds-audit", "--body", &fixture("t2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["all_satisfied"], serde_json::json!(true));
    let chain = v["ratio_chain"].as_array().unwrap();
    assert_eq!(chain.len(), 12);
    assert_eq!(chain[2]["sum"], serde_json::json!(63));
}

#[test]
fn homothety_answers_both_ways() {
    let out = run(&[
        "homothety",
        "--body",
        &fixture("t2.json"),
        "--point",
        "1/2,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["homothetic"], serde_json::json!(true));
    assert_eq!(v["lambda"], serde_json::json!([1, 2]));

    let out = run(&[
        "homothety",
        "--body",
        &fixture("cube2.json"),
        "--point",
        "1/2,1/4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["homothetic"], serde_json::json!(false));
}

#[test]
fn mixed_volumes_of_square_are_constant() {
    let out = run(&["mixed-volumes", "--body", &fixture("cube2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["profile"], serde_json::json!([[1, 1], [1, 1], [1, 1]]));
}

#[test]
fn lemma3_estimate_is_deterministic_and_within_error() {
    let args = [
        "lemma3-estimate",
        "--simplex",
        &fixture("t2.json"),
        "--lattice",
        &fixture("fary-safe.json"),
        "--samples",
        "20000",
        "--seed",
        "42",
        "--depth",
        "12",
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout, "same seed must give identical bytes");
    let v = stdout_json(&a);
    let est = v["estimated_det"].as_f64().unwrap();
    let sigma = v["std_error"].as_f64().unwrap();
    let det = 1048576.0 / 3151875.0;
    assert!((est - det).abs() <= 4.0 * sigma);
}

#[test]
fn optimize_plane_is_deterministic_and_below_target() {
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("hist.csv");
    let args = [
        "optimize".to_string(),
        "--dim".into(),
        "2".into(),
        "--seed".into(),
        "2024".into(),
        "--restarts".into(),
        "2".into(),
        "--iterations".into(),
        "40".into(),
        "--history".into(),
        hist.to_string_lossy().into_owned(),
    ];
    let a = bin().args(&args).output().unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let v = stdout_json(&a);
    assert_eq!(v["certificate"]["verdict"], serde_json::json!("Covered"));
    let density = v["best_density"]["decimal"].as_str().unwrap();
    let density: f64 = density.parse().unwrap();
    assert!(density <= 1.505, "density {density}");
    let csv = std::fs::read_to_string(&hist).unwrap();
    assert!(csv.starts_with("evaluation,best_density\n"));
    assert!(csv.lines().count() > 10);

    let b = bin().args(&args[..args.len() - 2]).output().unwrap();
    let c = bin().args(&args[..args.len() - 2]).output().unwrap();
    assert_eq!(b.stdout, c.stdout, "fixed seed must reproduce bytes");
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "density",
        "--body",
        &fixture("t2.json"),
        "--lattice",
        &fixture("fary.json"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["density"]["frac"], serde_json::json!([3, 2]));
    assert_eq!(v["density"]["decimal"], serde_json::json!("1.5"));
}

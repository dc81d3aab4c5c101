//! End-to-end checks of the binary: output schemas re-parse into the
//! library's types, identical command lines give identical bytes, and exit
//! codes follow the 0/2/3 contract.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use kantoro_core::{tower_profile, ConvergenceReport, Matrix, PartitionTree};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kantoro"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn workdir() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("kantoro-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).expect("temp dir");
        dir
    })
}

fn fixture(name: &str, contents: &str) -> String {
    let path = workdir().join(name);
    fs::write(&path, contents).expect("fixture written");
    path.display().to_string()
}

const PATH_INSTANCE: &str = r#"{
  "n": 3,
  "cost": [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]],
  "mu": [0.5, 0.5, 0.0],
  "nu": [0.0, 0.5, 0.5],
  "metric": true
}"#;

#[test]
fn solve_output_reparses_and_repeats_byte_for_byte() {
    let instance = fixture("solve.json", PATH_INSTANCE);
    let first = run(&["solve", "--instance", &instance]);
    let second = run(&["solve", "--instance", &instance]);
    assert_eq!(first.stdout, second.stdout, "same command line, different bytes");

    let payload: serde_json::Value = serde_json::from_str(&stdout_of(&first)).unwrap();
    assert_eq!(payload["value"].as_f64().unwrap(), 1.0);
    assert_eq!(payload["gap"].as_f64().unwrap(), 0.0);
    let plan: Matrix = serde_json::from_value(payload["plan"].clone()).unwrap();
    assert_eq!(plan.rows(), 3);
    let potential: Vec<f64> = serde_json::from_value(payload["potential"].clone()).unwrap();
    assert_eq!(potential.len(), 3);
    assert_eq!(potential[0], 0.0, "potential is pinned at index 0");
}

#[test]
fn verify_confirms_the_solution() {
    let instance = fixture("verify.json", PATH_INSTANCE);
    let payload: serde_json::Value =
        serde_json::from_str(&stdout_of(&run(&["verify", "--instance", &instance]))).unwrap();
    assert_eq!(payload["optimal"], serde_json::Value::Bool(true));
    assert!(payload["violations"].as_array().unwrap().is_empty());
}

#[test]
fn krnorm_reports_matching_primal_and_dual() {
    let instance = fixture("krnorm-inst.json", PATH_INSTANCE);
    let measure = fixture("krnorm-m.json", r#"{"weights": [0.3, -0.5, 0.2]}"#);
    let payload: serde_json::Value = serde_json::from_str(&stdout_of(&run(&[
        "krnorm", "--measure", &measure, "--instance", &instance,
    ])))
    .unwrap();
    assert!((payload["norm"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((payload["dual"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(payload["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn line_distance_of_a_distribution_to_itself_is_zero() {
    let csv = "position,weight\n0.1,0.25\n0.4,0.5\n0.9,0.25\n";
    let a = fixture("line-a.csv", csv);
    let payload: serde_json::Value =
        serde_json::from_str(&stdout_of(&run(&["line", "--mu", &a, "--nu", &a]))).unwrap();
    assert_eq!(payload["k1"].as_f64().unwrap(), 0.0);
}

#[test]
fn line_plan_file_carries_the_rearrangement() {
    let a = fixture("line-from.csv", "position,weight\n0.0,0.5\n1.0,0.5\n");
    let b = fixture("line-to.csv", "position,weight\n0.5,1.0\n");
    let plan_path = workdir().join("line-plan.csv");
    let payload: serde_json::Value = serde_json::from_str(&stdout_of(&run(&[
        "line", "--mu", &a, "--nu", &b, "--plan", plan_path.to_str().unwrap(),
    ])))
    .unwrap();
    assert!((payload["k1"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let plan = fs::read_to_string(&plan_path).unwrap();
    assert_eq!(plan, "from,to,mass\n0,0.5,0.5\n1,0.5,0.5\n");
}

#[test]
fn assign_accepts_csv_costs() {
    let cost = fixture("assign.csv", "0.0,1.0\n1.0,0.0\n");
    let payload: serde_json::Value =
        serde_json::from_str(&stdout_of(&run(&["assign", "--cost", &cost]))).unwrap();
    assert_eq!(payload["value"].as_f64().unwrap(), 0.0);
    assert_eq!(payload["permutation"], serde_json::json!([0, 1]));
}

#[test]
fn matdist_report_reparses_and_is_deterministic() {
    let args = [
        "matdist", "--mu", "uniform01", "--map", "square", "--n", "25,50", "--trials", "5",
        "--seed", "42",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    let report: ConvergenceReport = serde_json::from_str(&stdout_of(&first)).unwrap();
    assert_eq!(report.n_grid, vec![25, 50]);
    assert_eq!(report.trials, 5);
    assert_eq!(report.seed, 42);
    let exact = report.exact.expect("unit-line reference");
    assert!((exact - 1.0 / 6.0).abs() < 1e-3);
}

#[test]
fn matdist_csv_has_one_row_per_sample() {
    let text = stdout_of(&run(&[
        "matdist", "--mu", "twopoint:0.25", "--n", "10,20", "--trials", "2", "--format", "csv",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,trial,estimate");
    assert_eq!(lines.len(), 1 + 4);
    // The identity map compares the sample with itself: every estimate is 0.
    for line in &lines[1..] {
        assert!(line.ends_with(",0"), "unexpected row: {line}");
    }
}

#[test]
fn dbar_curve_is_csv_by_default() {
    let chain =
        fixture("flip.json", r#"{"states": 2, "transition": [[0.0, 1.0], [1.0, 0.0]]}"#);
    let text = stdout_of(&run(&["dbar", "--chain", &chain, "--horizons", "2,4"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,value");
    assert_eq!(lines[1], "2,0.5");
    assert_eq!(lines[2], "4,0.5");
}

#[test]
fn tower_benchmark_profile_matches_the_library() {
    let text = stdout_of(&run(&["tower", "--benchmark", "3"]));
    let mut expected = String::from("level,value\n");
    for (level, value) in tower_profile(&kantoro_core::dyadic_iid_tree(3).unwrap()).unwrap() {
        expected.push_str(&format!("{level},{value}\n"));
    }
    assert_eq!(text, expected);
}

#[test]
fn tower_accepts_its_own_tree_schema() {
    let tree = kantoro_core::dyadic_iid_tree(2).unwrap();
    let path = fixture("tree.json", &serde_json::to_string(&tree).unwrap());
    let text = stdout_of(&run(&["tower", "--tree", &path, "--level", "2", "--format", "json"]));
    let payload: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(payload["profile"][0]["level"].as_u64(), Some(2));
    assert_eq!(payload["profile"][0]["value"].as_f64(), Some(0.0));
    // And the file round-trips through the library type.
    let reread: PartitionTree = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(reread.depth(), 2);
}

#[test]
fn validation_failures_exit_2() {
    let instance = fixture(
        "overfull.json",
        r#"{"n": 2, "cost": [[0.0, 1.0], [1.0, 0.0]], "mu": [0.7, 0.7], "nu": [0.5, 0.5]}"#,
    );
    let output = run(&["solve", "--instance", &instance]);
    assert_eq!(output.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&output.stderr).is_empty());
}

#[test]
fn resource_caps_exit_3() {
    let chain =
        fixture("lazy.json", r#"{"states": 2, "transition": [[0.9, 0.1], [0.1, 0.9]]}"#);
    let output = run(&["dbar", "--chain", &chain, "--horizons", "13"]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn unknown_subcommands_exit_2() {
    let output = run(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn output_goes_to_the_requested_file() {
    let instance = fixture("tofile.json", PATH_INSTANCE);
    let out = workdir().join("solution.json");
    let output = run(&["solve", "--instance", &instance, "--out", out.to_str().unwrap()]);
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
    let payload: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(payload["value"].as_f64().unwrap(), 1.0);
}

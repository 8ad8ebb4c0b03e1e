//! End-to-end tests of the `keygraph` binary: flag validation, output
//! determinism, format agreement, and the plot-script generator.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn keygraph() -> Command {
    Command::new(env!("CARGO_BIN_EXE_keygraph"))
}

fn run(args: &[&str]) -> Output {
    keygraph().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let output = run(args);
    assert!(
        output.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).expect("utf-8 output")
}

fn expect_validation_error(args: &[&str]) -> String {
    let output = run(args);
    assert_eq!(output.status.code(), Some(2), "{args:?} should fail");
    let stderr = String::from_utf8(output.stderr).expect("utf-8 stderr");
    let lines: Vec<&str> = stderr.lines().collect();
    assert_eq!(lines.len(), 1, "expected single-line error, got: {stderr}");
    assert!(lines[0].starts_with("error: "), "got: {stderr}");
    stderr
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("keygraph-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn analyze_reports_scenario_values() {
    let table = stdout_of(&[
        "analyze", "--n", "2000", "--K", "18", "--P", "10000", "--p", "0.2", "--k", "2",
    ]);
    assert!(table.contains("0.0319357"), "share probability:\n{table}");
    assert!(table.contains("3.14513"), "alpha:\n{table}");
    assert!(table.contains("0.957853"), "prediction:\n{table}");
}

#[test]
fn analyze_with_reliable_channels_collapses_q_to_s() {
    let csv = stdout_of(&[
        "analyze", "--n", "500", "--K", "4", "--P", "1000", "--p", "1", "--k", "1",
        "--format", "csv",
    ]);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let field = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(field("s"), field("q"));
}

#[test]
fn analyze_rejects_tiny_networks() {
    let stderr = expect_validation_error(&[
        "analyze", "--n", "2", "--K", "3", "--P", "10", "--p", "0.5",
    ]);
    assert!(stderr.contains("n >= 3"), "got: {stderr}");
}

#[test]
fn analyze_warns_outside_asymptotic_regime() {
    let output = run(&[
        "analyze", "--n", "500", "--K", "40", "--P", "100", "--p", "0.5", "--k", "1",
    ]);
    assert!(output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("warning"), "got: {stderr}");
    assert!(stderr.contains("P=100 below node count"), "got: {stderr}");
    assert!(stderr.contains("K/P"), "got: {stderr}");
}

#[test]
fn simulate_complete_graph_is_always_connected() {
    let table = stdout_of(&[
        "simulate", "--n", "8", "--K", "3", "--P", "3", "--p", "1", "--k", "3",
        "--trials", "20", "--seed", "1",
    ]);
    assert!(table.contains("20 / 20"), "{table}");
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let args = [
        "simulate", "--n", "120", "--K", "4", "--P", "300", "--p", "0.6", "--k", "2",
        "--trials", "50", "--format", "json",
    ];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second, "default seed must reproduce");
    let reseeded = stdout_of(&[&args[..], &["--seed", "7"]].concat());
    assert_ne!(first, reseeded);
}

#[test]
fn sweep_rejects_bad_flags() {
    expect_validation_error(&[
        "sweep", "--n", "50", "--P", "200", "--p", "0.3", "--K", "2:4", "--trials", "0",
    ]);
    expect_validation_error(&[
        "sweep", "--n", "50", "--P", "200", "--p", "0.3", "--K", "2:4", "--trials", "5",
        "--emit-plot", "/tmp/plot.gp",
    ]);
    let output = run(&[
        "sweep", "--n", "50", "--P", "200", "--p", "0.3", "--K", "4:2", "--trials", "5",
    ]);
    assert!(!output.status.success(), "reversed range must fail");
}

#[test]
fn sweep_csv_is_byte_identical_across_seeds_and_workers() {
    let base = [
        "sweep", "--n", "60", "--P", "240", "--k", "2", "--p", "0.4,0.8", "--K", "3:5",
        "--trials", "30", "--seed", "11",
    ];
    let first = stdout_of(&base);
    let second = stdout_of(&base);
    assert_eq!(first, second);

    let one_worker = stdout_of(&[&base[..], &["--jobs", "1"]].concat());
    assert_eq!(first, one_worker);

    let env_worker = keygraph()
        .args(base)
        .env("KEYGRAPH_JOBS", "2")
        .output()
        .expect("binary runs");
    assert!(env_worker.status.success());
    assert_eq!(first, String::from_utf8(env_worker.stdout).unwrap());

    assert_eq!(first.lines().count(), 1 + 2 * 3, "header plus 6 cells");
}

#[test]
fn sweep_json_and_csv_agree_to_six_significant_digits() {
    let base = [
        "sweep", "--n", "60", "--P", "240", "--k", "2", "--p", "0.5", "--K", "3:4",
        "--trials", "25", "--seed", "3",
    ];
    let csv = stdout_of(&base);
    let json_text = stdout_of(&[&base[..], &["--format", "json"]].concat());
    let json: serde_json::Value = serde_json::from_str(&json_text).unwrap();

    let fmt = |x: f64| keygraph::experiment::fmt_sig6(x);
    for (line, cell) in csv.lines().skip(1).zip(json["cells"].as_array().unwrap()) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[4], cell["ring_size"].to_string());
        assert_eq!(fields[9], fmt(cell["empirical_prob"].as_f64().unwrap()));
        assert_eq!(fields[10], fmt(cell["ci_low"].as_f64().unwrap()));
        assert_eq!(fields[11], fmt(cell["ci_high"].as_f64().unwrap()));
        assert_eq!(fields[12], fmt(cell["analytical_prob"].as_f64().unwrap()));
        assert_eq!(fields[13], fmt(cell["alpha"].as_f64().unwrap()));
    }
}

#[test]
fn sweep_emits_gnuplot_script_referencing_the_csv() {
    let csv_path = temp_path("sweep.csv");
    let plot_path = temp_path("sweep.gp");
    let output = run(&[
        "sweep", "--n", "50", "--P", "200", "--k", "1", "--p", "0.3,0.6", "--K", "2:3",
        "--trials", "5", "--output", csv_path.to_str().unwrap(),
        "--emit-plot", plot_path.to_str().unwrap(),
    ]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("n,P,k,p,K,"));
    let script = std::fs::read_to_string(&plot_path).unwrap();
    let csv_name = Path::new(&csv_path).file_name().unwrap().to_str().unwrap();
    assert!(script.contains(csv_name), "script must reference the csv");
    assert!(!script.contains(csv_path.to_str().unwrap()), "relative, not absolute");
    assert!(script.contains("empirical p=0.3"));
    assert!(script.contains("analytical p=0.6"));
    assert!(script.contains("yerrorbars"));
    std::fs::remove_file(csv_path).ok();
    std::fs::remove_file(plot_path).ok();
}

#[test]
fn dimension_echoes_neighboring_predictions() {
    let table = stdout_of(&[
        "dimension", "--n", "2000", "--P", "10000", "--p", "0.2", "--k", "2",
        "--target", "0.9",
    ]);
    let line_value = |text: &str, label: &str| -> String {
        text.lines()
            .find(|line| line.starts_with(label))
            .unwrap_or_else(|| panic!("no `{label}` line in:\n{text}"))
            .split_whitespace()
            .last()
            .unwrap()
            .to_string()
    };
    assert_eq!(line_value(&table, "smallest ring size K"), "18");
    assert_eq!(line_value(&table, "predicted P at K=18"), "0.957853");
    assert_eq!(line_value(&table, "predicted P at K=17"), "0.845377");

    // the surrogate-based mode lands on the same ring size here
    let approx = stdout_of(&[
        "dimension", "--n", "2000", "--P", "10000", "--p", "0.2", "--k", "2",
        "--target", "0.9", "--approx",
    ]);
    assert_eq!(line_value(&approx, "smallest ring size K"), "18");

    let stderr = expect_validation_error(&[
        "dimension", "--n", "2000", "--P", "10", "--p", "0.001", "--k", "2",
        "--target", "0.999999",
    ]);
    assert!(stderr.contains("infeasible"), "got: {stderr}");
}

#[test]
fn degree_dist_reports_one_row_per_low_degree() {
    let table = stdout_of(&[
        "degree-dist", "--n", "300", "--K", "5", "--P", "600", "--p", "0.7", "--k", "2",
        "--trials", "60", "--seed", "5",
    ]);
    let data_rows: Vec<&str> = table
        .lines()
        .filter(|line| line.starts_with("0 ") || line.starts_with("1 "))
        .collect();
    assert_eq!(data_rows.len(), 2, "{table}");
    assert!(table.contains("min degree >= k without k-connectivity"), "{table}");

    // k = 1: a single row for the isolated-node statistic
    let table = stdout_of(&[
        "degree-dist", "--n", "300", "--K", "5", "--P", "600", "--p", "0.7", "--k", "1",
        "--trials", "30",
    ]);
    let data_rows: Vec<&str> = table
        .lines()
        .filter(|line| line.starts_with("0 "))
        .collect();
    assert_eq!(data_rows.len(), 1, "{table}");
}

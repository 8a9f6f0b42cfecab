use std::path::Path;
use std::process::Command;

use zovr::data_io::read_trace;

fn zovr() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zovr"))
}

const CONFIG: &str = r#"
algorithms = ["zo-spider-coord", "prox-zo-spider-coord", "zo-sgd"]
seeds = [1, 2]
query_budget = 20000
[problem]
kind = "synthetic"
n = 20
d = 4
l1_lambda = 0.01
[params]
corollary = "cor3"
k = 100
"#;

#[test]
fn run_writes_traces_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(&config, CONFIG).unwrap();
    let out = dir.path().join("out");
    let status = zovr().arg("run").arg(&config).arg("--output-dir").arg(&out).output().unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let stdout = String::from_utf8(status.stdout).unwrap();
    assert!(stdout.contains("zo-spider-coord"));
    for alg in ["zo-spider-coord", "prox-zo-spider-coord", "zo-sgd"] {
        for seed in [1, 2] {
            let rows = read_trace(&out.join(format!("{alg}_seed{seed}.csv"))).unwrap().rows;
            assert!(!rows.is_empty());
            assert!(rows.windows(2).all(|w| w[0].queries <= w[1].queries));
            assert!(rows.last().unwrap().queries <= 20000 + 2 * 4 * 20);
        }
    }
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(&config, CONFIG).unwrap();
    let out = dir.path().join("env-out");
    let status = zovr().arg("run").arg(&config).env("ZOVR_OUTPUT_DIR", &out).output().unwrap();
    assert!(status.status.success());
    assert!(Path::new(&out).join("summary.csv").exists());
}

#[test]
fn params_prints_selected_values() {
    let out = zovr()
        .args(["params", "cor3", "--n", "100", "--d", "4", "--K", "400"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("q     = 10"), "{text}");
    assert!(text.contains("eta   = 2.5e-1"), "{text}");
}

#[test]
fn verify_estimators_passes() {
    let out = zovr().args(["verify", "estimators", "--sequential"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn bad_input_exits_with_usage_error() {
    let out = zovr().args(["verify", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "algorithms = [\"adam\"]").unwrap();
    let out = zovr().arg("run").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

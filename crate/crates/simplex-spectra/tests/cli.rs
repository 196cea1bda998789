//! Exit-code and output contract of the command-line binary.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simplex-spectra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn census_json_is_parseable() {
    let out = run(&["census", "--n", "4", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["count"], 7);
    assert_eq!(report["points"].as_array().unwrap().len(), 7);
}

#[test]
fn census_csv_shape() {
    let out = run(&["census", "--n", "4", "--m", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("index,structure,verdict"));
    assert_eq!(lines.count(), 13);
}

#[test]
fn census_out_flag_writes_file() {
    let dir = std::env::temp_dir().join("sxs-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("census.json");
    let out = run(&["census", "--n", "3", "--m", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(report["count"], 3);
    std::fs::remove_file(path).ok();
}

#[test]
fn degenerate_combination_exits_3() {
    let out = run(&["census", "--n", "3", "--m", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["census", "--n", "2", "--m", "3"]).status.code(), Some(2));
    assert_eq!(run(&["census", "--n", "4", "--m", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--grid", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--grid", "n=5..3,m=3"]).status.code(), Some(2));
    // clap rejects unknown subcommands and missing args with code 2
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["census", "--n", "4"]).status.code(), Some(2));
}

#[test]
fn verify_small_grid_passes() {
    let out = run(&["verify", "--grid", "n=3..4,m=3..4", "--starts", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rank_one_contractions: pass"));
    // (3,4) must be skipped, the other three cells checked
    assert_eq!(text.matches("census_vs_multistart").count(), 3);
}

#[test]
fn seed_env_var_is_honored_and_flag_wins() {
    let with_env = bin()
        .args(["basin", "--n", "3", "--m", "3", "--runs", "20"])
        .env("SIMPLEX_SPECTRA_SEED", "42")
        .output()
        .unwrap();
    let with_flag = run(&["basin", "--n", "3", "--m", "3", "--runs", "20", "--seed", "42"]);
    assert_eq!(with_env.stdout, with_flag.stdout);

    let flag_beats_env = bin()
        .args(["basin", "--n", "3", "--m", "3", "--runs", "20", "--seed", "1"])
        .env("SIMPLEX_SPECTRA_SEED", "42")
        .output()
        .unwrap();
    assert_ne!(flag_beats_env.stdout, with_env.stdout);
    let report: serde_json::Value = serde_json::from_slice(&flag_beats_env.stdout).unwrap();
    assert_eq!(report["seed"], 1);
}

#[test]
fn basin_reports_fraction() {
    let out = run(&["basin", "--n", "4", "--m", "3", "--runs", "100", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let frac = report["frame_hit_fraction"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&frac));
    assert_eq!(report["unmatched"], 0);
}

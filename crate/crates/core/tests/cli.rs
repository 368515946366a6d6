use std::path::Path;
use std::process::{Command, Output};

fn mbgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbgame"))
        .args(args)
        .output()
        .expect("mbgame runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn board_writes_edge_lists() {
    let o = mbgame(&["board", "--grid", "5x3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("15 22\n"));
    let o = mbgame(&["board", "--flower-snark", "7"]);
    assert!(stdout(&o).starts_with("28 42\n"));
    let a = mbgame(&["board", "--er", "12,0.3", "--seed", "1"]);
    let b = mbgame(&["board", "--er", "12,0.3", "--seed", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn board_file_round_trips_through_play() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p3.txt");
    let o = mbgame(&["board", "--grid", "1x3", "--out", file.to_str().unwrap()]);
    assert!(o.status.success());
    let o = mbgame(&["solve", "--board", file.to_str().unwrap(), "--dom"]);
    assert_eq!(stdout(&o), "value Maker\noptimal 0 1 2\n");
}

#[test]
fn invalid_parameters_are_usage_errors() {
    for args in [
        vec!["board", "--grid", "0x3"],
        vec!["board", "--grid", "5"],
        vec!["board", "--grid", "2x2", "--flower-snark", "5"],
        vec!["board", "--er", "5,1.5"],
        vec!["play", "--grid", "2x2"],
        vec!["play", "--grid", "2x2", "--path", "9"],
        vec!["sweep", "--preset", "nope"],
        vec!["frobnicate"],
        vec!["catalog", "--bogus"],
    ] {
        let o = mbgame(&args);
        assert_eq!(o.status.code(), Some(64), "{args:?}");
    }
}

#[test]
fn play_exit_code_encodes_winner() {
    let o = mbgame(&["play", "--grid", "1x3", "--dom", "--maker", "mcts", "--breaker", "mcts", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("result Maker\n"));

    let o = mbgame(&["play", "--grid", "1x2", "--path", "2", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).ends_with("result Breaker\n"));

    let o = mbgame(&["play", "--grid", "4x4", "--path", "4", "--game-timeout", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "result Timeout\n");
}

#[test]
fn play_is_reproducible() {
    let args = ["play", "--grid", "4x4", "--path", "4", "--maker", "mcts:micro=degree:high,iters=50", "--seed", "9"];
    assert_eq!(mbgame(&args).stdout, mbgame(&args).stdout);
}

#[test]
fn play_traces_searches() {
    let o = mbgame(&["play", "--grid", "2x2", "--path", "3", "--maker", "mcts:iters=4", "--trace"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("# Maker search trace"));
    assert_eq!(err.lines().filter(|l| l.starts_with("iter ")).count() % 4, 0);
}

#[test]
fn invalid_strategy_lists_catalog() {
    let o = mbgame(&["play", "--grid", "1x3", "--dom", "--maker", "micro:bogus"]);
    assert_eq!(o.status.code(), Some(64));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("winset_block:high:budget=64") && err.contains("uniform"));
}

#[test]
fn catalog_lists_every_strategy_stably() {
    let a = mbgame(&["catalog"]);
    let text = stdout(&a);
    assert!(text.lines().count() >= 29);
    assert!(text.lines().next().unwrap().starts_with("uniform"));
    assert_eq!(a.stdout, mbgame(&["catalog"]).stdout);
}

#[test]
fn solve_prints_value_and_moves() {
    let o = mbgame(&["solve", "--grid", "1x6", "--path", "3", "--moves", "1,5,2,3"]);
    assert_eq!(stdout(&o), "value Maker\noptimal 0\n");
    let o = mbgame(&["solve", "--grid", "5x5", "--dom"]);
    assert_eq!(o.status.code(), Some(64));
}

fn write_spec(dir: &Path) -> std::path::PathBuf {
    let spec = r#"
name = "tiny"
games_per_cell = 6
iterations = 10
master_seed = 3
modified = ["degree:high", "closeness:low"]

[board]
family = "grid"
rows = 2
cols = "k"

[condition]
kind = "path"
k = 3

[sweep]
parameter = "k"
values = [1, 2, 3]
"#;
    let path = dir.join("tiny.toml");
    std::fs::write(&path, spec).unwrap();
    path
}

#[test]
fn sweep_writes_tables_and_tolerates_partial_failure() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path());
    let out = dir.path().join("out");
    let o = mbgame(&[
        "sweep",
        "--spec",
        spec.to_str().unwrap(),
        "--relative",
        "--workers",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("tiny.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(',').count() == 4));
    // A 2x1 board has no 3-path to play for.
    assert_eq!(rows[0], "1,nan,nan,nan");
    assert!(out.join("tiny.meta.json").exists());
    assert!(String::from_utf8(o.stderr).unwrap().contains("3 of 9 cells"));

    let rel = std::fs::read_to_string(out.join("tiny_rel.csv")).unwrap();
    for row in rel.lines().skip(1) {
        let max = row.split(',').skip(1).map(|x| x.parse::<f64>().unwrap()).fold(0.0, f64::max);
        assert!(max == 1.0 || max == 0.0, "{row}");
    }

    let o = mbgame(&["rank", out.join("tiny.csv").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("baseline="));

    let again = dir.path().join("again");
    mbgame(&["sweep", "--spec", spec.to_str().unwrap(), "--workers", "1", "--out", again.to_str().unwrap()]);
    assert_eq!(std::fs::read(again.join("tiny.csv")).unwrap(), csv.as_bytes());
}

#[test]
fn sweep_fails_only_when_every_cell_fails() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path());
    let text = std::fs::read_to_string(&spec).unwrap().replace("values = [1, 2, 3]", "values = [1]");
    std::fs::write(&spec, text).unwrap();
    let o = mbgame(&["sweep", "--spec", spec.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(70));
}

#[test]
fn sweep_runs_a_preset() {
    let dir = tempfile::tempdir().unwrap();
    let o = mbgame(&[
        "sweep", "--preset", "snark_rollouts", "--games", "1", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("snark_rollouts.csv")).unwrap();
    let first: Vec<&str> = csv.lines().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(first, ["3", "4", "5", "6", "7", "8"]);
    assert!(csv.lines().all(|l| l.split(',').count() == 31));
}

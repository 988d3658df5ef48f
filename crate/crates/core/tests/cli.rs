//! Runs the compiled binary end to end.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::std_game;

fn achievement(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_achievement"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_reports_single_equilibrium_for_ab() {
    let dir = tempfile::tempdir().unwrap();
    let game = write(dir.path(), "ab.json", &std_game("AB", 2).to_json_pretty());
    let o = achievement(&["analyze", &game]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("equilibria: 1\n"), "{text}");
    assert!(text.contains("MGA 1.00 (1)"), "{text}");
}

#[test]
fn zero_denominator_is_a_usage_error_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let text = std_game("AB", 2)
        .to_json_pretty()
        .replacen("\"1/2\"", "\"1/0\"", 1);
    let game = write(dir.path(), "bad.json", &text);
    let o = achievement(&["analyze", &game]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("1/0") && err.contains("line") && err.contains("column"),
        "{err}"
    );
}

#[test]
fn diagonal_profile_is_not_an_equilibrium_for_oo() {
    let dir = tempfile::tempdir().unwrap();
    let game = write(dir.path(), "oo.json", &std_game("OO", 2).to_json_pretty());
    let profile = write(
        dir.path(),
        "p.json",
        r#"{"contributions": [["1", "0"], ["0", "1"]]}"#,
    );
    let o = achievement(&["analyze", &game, "--profile", &profile]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("profile not an equilibrium"),
        "{}",
        stdout(&o)
    );
}

fn sweep_rows(agents: &str) -> Vec<Vec<String>> {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let o = achievement(&[
        "sweep",
        "--agents",
        agents,
        "--goals",
        "1",
        "--out-dir",
        out_dir,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join(format!("binned_n{agents}_m1.csv")).exists());
    let csv = fs::read_to_string(dir.path().join(format!("sweep_n{agents}_m1.csv"))).unwrap();
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn single_goal_sweep_with_lone_high_agent() {
    let rows = sweep_rows("1");
    let high: Vec<_> = rows.iter().filter(|r| r[0] == "2").collect();
    assert_eq!(high.len(), 1);
    // w = 5/4 exceeds the full cost 1, so contributing is dominant.
    assert_eq!(high[0][9], "1/1");
}

#[test]
fn single_goal_sweep_pair_of_high_agents_has_two_equilibria() {
    let rows = sweep_rows("2");
    assert_eq!(rows.len(), 6);
    let pair = rows.iter().find(|r| r[0] == "2-2").expect("group 2-2");
    // Both contribute or neither does: one of two equilibria reaches g = 2.
    assert_eq!(pair[16], "2");
    assert_eq!(pair[9], "1/2");
}

#[test]
fn table_writes_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = achievement(&[
        "table",
        "--agents",
        "2",
        "--goals",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(path).unwrap();
    assert_eq!(
        csv.lines().nth(1),
        Some("AB,1.00,1.00,0.50,0.75,1,1,1,1,5,0")
    );
}

#[test]
fn unknown_flag_exits_with_usage_code() {
    let o = achievement(&["table", "--agents", "2", "--goals", "2", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--bogus"));
}

#[test]
fn theorem_needs_two_agents() {
    let o = achievement(&["verify-theorem", "--agents", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn theorem_run_is_reproducible() {
    let a = achievement(&[
        "verify-theorem",
        "--agents",
        "3",
        "--trials",
        "20",
        "--seed",
        "5",
    ]);
    let b = achievement(&[
        "verify-theorem",
        "--agents",
        "3",
        "--trials",
        "20",
        "--seed",
        "5",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("20/20 passed\n"), "{}", stdout(&a));
}

#[test]
fn oversized_sweep_exits_with_cap_code() {
    let o = achievement(&[
        "sweep",
        "--agents",
        "5",
        "--goals",
        "3",
        "--out-dir",
        "/nonexistent",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("--allow-large"));
}

//! End-to-end CLI checks: exit codes, output schemas, config-file
//! merging, and byte-stable output.

use std::process::{Command, Output};

fn phantom<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phantom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn simulate_forced_win_and_schema() {
    let out = phantom(&[
        "simulate", "--game", "connectivity", "--n", "2", "--a", "1", "--b", "1", "--maker",
        "random", "--breaker", "random", "--trials", "10", "--seed", "7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    assert_eq!(v["stats"]["maker_wins"], 10);
    assert_eq!(v["config"]["game"], "connectivity");
    assert!(v["stats"]["wilson"].as_array().unwrap().len() == 2);

    // byte-identical across runs
    let again = phantom(&[
        "simulate", "--game", "connectivity", "--n", "2", "--a", "1", "--b", "1", "--maker",
        "random", "--breaker", "random", "--trials", "10", "--seed", "7",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn usage_errors_exit_two() {
    let odd = phantom(&[
        "simulate", "--game", "pm", "--n", "5", "--a", "1", "--b", "1", "--maker", "random",
        "--breaker", "random", "--trials", "5", "--seed", "1",
    ]);
    assert_eq!(odd.status.code(), Some(2));

    let unknown = phantom(&[
        "simulate", "--game", "pm", "--n", "4", "--a", "1", "--b", "1", "--maker", "nosuch",
        "--breaker", "random", "--trials", "5", "--seed", "1",
    ]);
    assert_eq!(unknown.status.code(), Some(2));
    // the registry is listed so the caller can fix the name
    assert!(stderr(&unknown).contains("mindeg-large"));
    assert!(stderr(&unknown).contains("hamilton"));

    let bad_scale = phantom(&["verify", "--scale", "nosuch"]);
    assert_eq!(bad_scale.status.code(), Some(2));

    let bad_range = phantom(&[
        "sweep", "--game", "connectivity", "--n", "3", "--a", "1", "--b", "6..1", "--maker",
        "random", "--breaker", "random", "--trials", "5", "--seed", "1",
    ]);
    assert_eq!(bad_range.status.code(), Some(2));
}

#[test]
fn exact_values_and_refusal() {
    let forced = phantom(&[
        "exact", "--game", "connectivity", "--n", "2", "--a", "1", "--b", "1", "--maker",
        "random", "--breaker", "random",
    ]);
    assert!(forced.status.success());
    assert!(stdout(&forced).starts_with("1/1"));

    let coin = phantom(&[
        "exact", "--game", "connectivity", "--n", "3", "--a", "1", "--b", "1", "--maker",
        "random", "--breaker", "random",
    ]);
    assert!(stdout(&coin).starts_with("1/2"));

    let oversized = phantom(&[
        "exact", "--game", "connectivity", "--n", "12", "--a", "1", "--b", "1", "--maker",
        "random", "--breaker", "random",
    ]);
    assert_eq!(oversized.status.code(), Some(3));
}

#[test]
fn sweep_rows_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let csv_path = csv.to_str().unwrap().to_string();
    let args = |extra: &[&'static str]| -> Vec<String> {
        let mut v: Vec<String> = [
            "sweep", "--game", "connectivity", "--n", "3", "--a", "1", "--b", "1..3", "--maker",
            "random", "--breaker", "random", "--trials", "20", "--seed", "5", "--out",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        v.push(csv_path.clone());
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    let out = phantom(&args(&[]));
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "header + 3 rows: {text}");
    assert!(lines[0].starts_with("game,n,a,b,k"));

    // resuming over a complete file replays nothing and keeps the rows
    let resumed = phantom(&args(&["--resume"]));
    assert!(resumed.status.success());
    let text2 = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text, text2);

    // a truncated file is completed with identical stats
    let truncated: String = lines[..2].join("\n") + "\n";
    std::fs::write(&csv, &truncated).unwrap();
    let completed = phantom(&args(&["--resume"]));
    assert!(completed.status.success());
    let text3 = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text, text3, "resume must reproduce the uninterrupted sweep");
}

#[test]
fn config_file_merges_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("game.conf");
    std::fs::write(
        &cfg,
        "game = connectivity\nn = 2\na = 1\nb = 1\nmaker = random\nbreaker = random\ntrials = 5\nseed = 3\n",
    )
    .unwrap();
    let from_file = phantom(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    let v: serde_json::Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    assert_eq!(v["config"]["n"], 2);
    assert_eq!(v["config"]["trials"], 5);

    // flags win over the file
    let with_flag = phantom(&[
        "simulate", "--config", cfg.to_str().unwrap(), "--trials", "9",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&with_flag)).unwrap();
    assert_eq!(v["config"]["trials"], 9);
}

#[test]
fn exact_fixture_file_format() {
    let dir = tempfile::tempdir().unwrap();
    let fx = dir.path().join("fixtures.txt");
    let out = phantom(&[
        "exact", "--game", "connectivity", "--n", "3", "--a", "1", "--b", "1", "--maker",
        "random", "--breaker", "random", "--fixture-out", fx.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&fx).unwrap();
    assert_eq!(text.trim(), "connectivity 3 1 1 1 random random 1 2");
}

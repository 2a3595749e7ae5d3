//! End-to-end checks of the binary's exit-code contract and artifact
//! determinism, driving the real executable.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_colorcert"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/micro")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn passing_check_exits_zero_with_json_line() {
    let out = run(&["gadget", "verify", "--n", "3", "--d", "2"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with('\n'));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["coloring_count"], 6);
    assert_eq!(v["n"], 3);
}

#[test]
fn failed_assertion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let coloring = dir.path().join("bad.json");
    fs::write(&coloring, "[0,0,0,0]\n").unwrap();
    let k4 = fixture("k4.json");
    let out = run(&[
        "color",
        "verify",
        "--in",
        k4.to_str().unwrap(),
        "--coloring",
        coloring.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("report still printed");
    assert_eq!(v["proper"], false);
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["gadget", "verify", "--n", "3"]);
    assert_eq!(code(&out), 2, "missing required flag");
    let out = run(&["gadget", "verify", "--n", "3", "--d", "2", "--bogus"]);
    assert_eq!(code(&out), 2, "unknown flag");
    let out = run(&["color", "decide", "--in", "/nonexistent.json", "--n", "3"]);
    assert_eq!(code(&out), 2, "unreadable input");
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn unknown_decision_exits_one() {
    let c5 = fixture("c5.json");
    let out = run(&[
        "color", "decide", "--in", c5.to_str().unwrap(), "--n", "2", "--budget", "0",
    ]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["decision"], "unknown");
}

#[test]
fn sample_artifacts_are_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out_path in [&a, &b] {
        let out = run(&[
            "rrg", "sample", "--l", "50", "--d", "3", "--seed", "7", "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let bytes_a = fs::read(&a).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, fs::read(&b).unwrap());
}

#[test]
fn product_pipeline_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let right = dir.path().join("right.json");
    let bundle = dir.path().join("bundle.json");
    let graph = dir.path().join("product_graph.json");
    let found = dir.path().join("found.json");
    let lifted = dir.path().join("lifted.json");
    let extracted = dir.path().join("left.json");

    let out = run(&[
        "rrg", "factorize", "--l", "8", "--k", "3", "--per-group", "2", "--out",
        right.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let k4 = fixture("k4.json");
    let out = run(&[
        "product", "build", "--left", k4.to_str().unwrap(), "--right",
        right.to_str().unwrap(), "--out", bundle.to_str().unwrap(), "--graph-out",
        graph.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let out = run(&["product", "check", "--in", bundle.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    // The bundle stores factors, not a bare graph, so graph readers reject it.
    let decide = run(&[
        "color", "decide", "--in", bundle.to_str().unwrap(), "--n", "4", "--out",
        found.to_str().unwrap(),
    ]);
    assert_eq!(code(&decide), 2);

    // The raw product graph is 4-colorable; the solver's witness verifies.
    let out = run(&[
        "color", "decide", "--in", graph.to_str().unwrap(), "--n", "4", "--out",
        found.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&[
        "color", "verify", "--in", graph.to_str().unwrap(), "--coloring",
        found.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    // A lifted left coloring (vertex (x, y) gets x) extracts back exactly.
    let lift: Vec<usize> = (0..32).map(|v| v / 8).collect();
    fs::write(&lifted, serde_json::to_string(&lift).unwrap()).unwrap();
    let out = run(&[
        "color", "verify", "--in", graph.to_str().unwrap(), "--coloring",
        lifted.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&[
        "product", "extract", "--in", bundle.to_str().unwrap(), "--coloring",
        lifted.to_str().unwrap(), "--n", "4", "--out", extracted.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let left: Vec<usize> = serde_json::from_slice(&fs::read(&extracted).unwrap()).unwrap();
    assert_eq!(left, vec![0, 1, 2, 3]);
}

#[test]
fn shift_roundtrip_all_bands_passes() {
    let out = run(&["shift", "roundtrip", "--n", "3", "--m", "4"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    // One JSON line per band of {0..3}: sum over 1 <= lo <= hi <= 4.
    assert_eq!(text.lines().count(), 10);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true);
    }
}

#[test]
fn stats_tv_between_stored_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let sa = dir.path().join("a.json");
    let sb = dir.path().join("b.json");
    let c6 = fixture("c6.json");
    let c7 = fixture("c7.json");
    for (graph, out_path) in [(&c6, &sa), (&c7, &sb)] {
        let out = run(&[
            "stats", "balls", "--in", graph.to_str().unwrap(), "--r", "1", "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let out = run(&["stats", "tv", "--a", sa.to_str().unwrap(), "--b", sb.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // Every vertex of either cycle sees the same unlabeled path ball.
    assert_eq!(v["tv"], 0.0);
}

#[test]
fn experiment_rejects_missing_config() {
    let out = run(&["experiment", "run", "--config", "/nonexistent.toml"]);
    assert_eq!(code(&out), 2);
}

//! End-to-end tests of the `cycburst` binary: artifact shapes, flag
//! columns, exit codes, determinism, and checkpoint resume.

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_cycburst")
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_in(dir: &Path, args: &[&str]) -> Run {
    let output = Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    Run {
        code: output.status.code().expect("exit code"),
        stdout: String::from_utf8(output.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(output.stderr).expect("utf-8 stderr"),
    }
}

fn run(args: &[&str]) -> Run {
    run_in(Path::new("."), args)
}

/// Strips the metadata lines excluded from the determinism contract.
fn stable(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with("# timestamp=") && !l.starts_with("# runtime_ms="))
        .collect::<Vec<_>>()
        .join("\n")
}

fn write_gv_code(dir: &Path) -> String {
    let path = dir.join("code8.txt").display().to_string();
    let r = run_in(
        dir,
        &[
            "construct", "--method", "gv", "--n", "8", "--q", "2", "--b", "1", "--t", "1",
            "--out", &path,
        ],
    );
    assert_eq!(r.code, 0, "construct failed: {}", r.stderr);
    path
}

#[test]
fn distance_row_is_deterministic() {
    let a = run(&["distance", "01011", "00000", "--q", "2", "--b", "2"]);
    let b = run(&["distance", "01011", "00000", "--q", "2", "--b", "2"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert!(a.stdout.contains("# rng=chacha12"));
    assert!(a.stdout.contains("5,2,2,01011,00000,2,"));
    assert_eq!(stable(&a.stdout), stable(&b.stdout));
}

#[test]
fn ballsize_sweep_skips_out_of_regime_cells() {
    let r = run(&["ballsize", "--n", "6..10", "--q", "2", "--b", "2", "--t", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let body: Vec<&str> = r.stdout.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body.len(), 6, "header plus five rows");
    assert!(body[1].contains("skipped") && body[2].contains("skipped"));
    for row in &body[3..] {
        assert!(row.contains(",true,ok,"), "in-regime row: {row}");
    }
    // exact value of the first in-regime cell: |Ball_{2,2}| at n=8, q=2
    assert!(body[3].starts_with("8,2,2,2,14,97,756"));
}

#[test]
fn ballsize_closed_form_rows() {
    // b=1, t=1: Hamming ball 1 + n(q-1); t=0: single word
    let r = run(&["ballsize", "--n", "8", "--q", "2", "--b", "1", "--t", "0,1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("8,2,1,0,1,1,1,true,ok,"));
    assert!(r.stdout.contains("8,2,1,1,4,9,16,true,ok,"));
}

#[test]
fn intersect_flags_track_the_distance_threshold() {
    let near = run(&["intersect", "000000", "110000", "--q", "2", "--b", "1", "--t", "1"]);
    assert_eq!(near.code, 0, "{}", near.stderr);
    assert!(near.stdout.contains("000000,110000,2,2,false,true"));

    let far = run(&["intersect", "000000", "111111", "--q", "2", "--b", "1", "--t", "1"]);
    assert_eq!(far.code, 0, "{}", far.stderr);
    assert!(far.stdout.contains("000000,111111,6,0,true,true"));
}

#[test]
fn construct_check_degree_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_gv_code(dir.path());

    let text = std::fs::read_to_string(&code).unwrap();
    assert!(text.starts_with("n=8 q=2 b=1 designed_t=1 method=gv-lex seed=none\n"));
    assert_eq!(text.lines().count(), 17, "header plus sixteen codewords");

    let check = run(&["check", &code]);
    assert_eq!(check.code, 0, "{}", check.stderr);
    assert!(check.stdout.contains("8,2,1,1,16,true,,,,3"));

    let degree = run(&["degree", &code, "--t", "2", "--s", "1"]);
    assert_eq!(degree.code, 0, "{}", degree.stderr);
    assert!(degree.stdout.contains(",7,true,"), "degree 7 under the bound");
}

#[test]
fn construct_matching_respects_johnson() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt").display().to_string();
    let r = run(&[
        "construct", "--method", "matching", "--n", "18", "--q", "2", "--b", "2", "--w", "2",
        "--r", "1", "--out", &path,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("johnson_ok"));
    assert!(r.stdout.contains(",true"), "bound flag true: {}", r.stdout);

    let check = run(&["check", &path]);
    assert_eq!(check.code, 0, "matching code verifies: {}", check.stderr);
}

#[test]
fn check_exits_2_on_distance_violation() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(
        &bad,
        "n=6 q=2 b=2 designed_t=1 method=manual seed=none\n000000\n110000\n",
    )
    .unwrap();
    let r = run(&["check", &bad.display().to_string()]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("false,000000,110000,1,1"));
}

#[test]
fn simulate_unique_succeeds_within_design() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_gv_code(dir.path());
    let r = run(&[
        "simulate", "--code", &code, "--t", "1", "--reads", "1,3", "--trials", "25",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for row in r.stdout.lines().filter(|l| l.starts_with(char::is_numeric)) {
        assert!(row.contains(",25,25,1.0,0,"), "all trials succeed: {row}");
    }
}

#[test]
fn simulate_list_mode_is_sound() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_gv_code(dir.path());
    let r = run(&[
        "simulate", "--code", &code, "--t", "2", "--reads", "4", "--trials", "10", "--mode",
        "list", "--s", "1", "--h", "1",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let row = r
        .stdout
        .lines()
        .find(|l| l.starts_with("4,"))
        .expect("result row");
    assert!(row.ends_with(",0,true"), "no soundness violations: {row}");
}

#[test]
fn simulate_adversarial_below_degree_is_ambiguous() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_gv_code(dir.path());
    // degree at t=2 is 7, so 3 adversarial reads can never disambiguate
    let r = run(&[
        "simulate", "--code", &code, "--t", "2", "--reads", "3", "--trials", "10",
        "--adversarial",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("3,10,0,0.0,10,"), "{}", r.stdout);
}

#[test]
fn reconstruct_emits_list_and_stats_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_gv_code(dir.path());
    let reads = dir.path().join("reads.txt").display().to_string();
    let r = run(&[
        "reconstruct", "--code", &code, "--gen-reads", "4", "--t", "2", "--s", "1", "--h",
        "1", "--save-reads", &reads,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let list = doc["list"].as_array().expect("list array");
    let source = doc["source"].as_str().expect("generated source word");
    assert!(list.iter().any(|w| w == source), "list contains the source");
    assert_eq!(doc["stats"]["sound"], true);
    assert_eq!(doc["stats"]["tau"], "8/4");
    assert!(doc["stats"]["stars"].is_u64());
    assert!(doc["stats"]["candidates"].is_u64());
    assert!(doc["stats"]["decoder_calls"].is_u64());
    assert_eq!(doc["meta"]["tool"], "cycburst");

    // decoding the saved read set reproduces the same list
    let again = run(&["reconstruct", "--code", &code, "--reads", &reads, "--s", "1", "--h", "1"]);
    assert_eq!(again.code, 0, "{}", again.stderr);
    let doc2: serde_json::Value = serde_json::from_str(&again.stdout).unwrap();
    assert_eq!(doc2["list"], doc["list"]);
    assert_eq!(doc2["source"], serde_json::Value::Null);
}

#[test]
fn shift_fixpoint_compresses_and_saves() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.txt");
    std::fs::write(&set, "n=6 q=2\n110000\n011000\n000110\n").unwrap();
    let out = dir.path().join("shifted.txt").display().to_string();
    let r = run(&[
        "shift", &set.display().to_string(), "--b", "1", "--fixpoint", "--out", &out,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("fixpoint,,,3,3,true,4,2,true,true"));
    let saved = std::fs::read_to_string(&out).unwrap();
    assert!(saved.starts_with("n=6 q=2\n000000\n"), "zero joins the set");
}

#[test]
fn diametric_reports_the_ball_baseline() {
    let r = run(&["diametric", "--n", "6", "--q", "2", "--b", "1", "--d", "1", "--restarts", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let row = r
        .stdout
        .lines()
        .find(|l| l.starts_with("6,"))
        .expect("result row");
    // the search starts from the ball, so max_found >= 7 = |Ball_1|
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[5], "7");
    assert!(fields[6].parse::<u64>().unwrap() >= 7);
}

#[test]
fn json_format_carries_columns_and_meta() {
    let r = run(&[
        "ballsize", "--n", "8", "--q", "2", "--b", "1", "--t", "1", "--format", "json",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["columns"][0], "n");
    assert_eq!(doc["rows"][0][5], 9, "exact Hamming ball size");
    assert_eq!(doc["meta"]["rng"], "chacha12");
    assert!(doc["meta"]["config_hash"].as_str().unwrap().len() == 16);
}

#[test]
fn identical_configs_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_gv_code(dir.path());
    let args = [
        "simulate", "--code", &code, "--t", "2", "--reads", "2,4", "--trials", "20", "--mode",
        "list", "--s", "1", "--h", "1",
    ];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.code, 0, "{}", one.stderr);
    assert_eq!(stable(&one.stdout), stable(&four.stdout));
}

#[test]
fn seed_changes_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_gv_code(dir.path());
    let base = [
        "reconstruct", "--code", &code, "--gen-reads", "4", "--t", "2", "--s", "1", "--h", "1",
    ];
    let a = run(&[&base[..], &["--seed", "1"]].concat());
    let b = run(&[&base[..], &["--seed", "2"]].concat());
    assert_eq!(a.code, 0, "{}", a.stderr);
    let da: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    let db: serde_json::Value = serde_json::from_str(&b.stdout).unwrap();
    assert_ne!(da["reads"], db["reads"], "different seeds draw different reads");
}

#[test]
fn infeasible_parameters_exit_3() {
    let huge = run(&["tradeoff", "--n", "30", "--q", "2", "--b", "1", "--t", "2"]);
    assert_eq!(huge.code, 3);
    assert!(huge.stderr.contains("infeasible"));

    let dir = tempfile::tempdir().unwrap();
    let code = write_gv_code(dir.path());
    // more adversarial reads than the witness intersection holds
    let r = run(&[
        "simulate", "--code", &code, "--t", "1", "--reads", "50", "--trials", "2",
        "--adversarial",
    ]);
    assert_eq!(r.code, 3, "{}", r.stderr);
}

#[test]
fn validation_failures_exit_2() {
    let bad_word = run(&["distance", "0102", "0000", "--q", "2", "--b", "1"]);
    assert_eq!(bad_word.code, 2);

    let missing = run(&["check", "no-such-file.txt"]);
    assert_eq!(missing.code, 2);

    let bad_params = run(&["degree", "whatever.txt", "--t", "1", "--s", "4"]);
    assert_eq!(bad_params.code, 2);
}

#[test]
fn tradeoff_budget_table_flags_hold() {
    let r = run(&["tradeoff", "--n", "10", "--q", "2", "--b", "1", "--t", "2", "--trials", "5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows: Vec<&str> = r
        .stdout
        .lines()
        .filter(|l| l.starts_with("10,"))
        .collect();
    assert_eq!(rows.len(), 4, "eps 0 (h=0,1), eps 1 (h=0), eps 2: {}", r.stdout);
    for row in &rows {
        assert!(!row.contains("false"), "no failed flags: {row}");
    }
    assert!(rows[3].ends_with("degree-only"), "eps=t row: {}", rows[3]);
    assert!(rows[3].contains(",1,0.0,true,"), "degree 1 in the disjoint regime");
}

#[test]
fn checkpoint_resumes_completed_cells_and_cleans_up() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let out_s = out.display().to_string();
    let progress = dir.path().join("sweep.csv.progress");
    let args = [
        "ballsize", "--n", "8,10", "--q", "2", "--b", "2", "--t", "2", "--out", &out_s,
    ];

    let first = run_in(dir.path(), &args);
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert!(out.exists());
    assert!(!progress.exists(), "sidecar removed after a finished run");
    let baseline = std::fs::read_to_string(&out).unwrap();
    let hash_line = baseline
        .lines()
        .find(|l| l.starts_with("# config_hash="))
        .unwrap();
    let hash = hash_line.trim_start_matches("# config_hash=");

    // hand-craft progress claiming the first cell produced a marker row:
    // a resumed run must trust it rather than recompute
    std::fs::write(
        &progress,
        format!(
            "config_hash={hash}\n{}\n",
            serde_json::json!({
                "key": "n=8,q=2,b=2,t=2",
                "row": [8, 2, 2, 2, "14", 97, "756", true, "ok", "resumed-marker"]
            })
        ),
    )
    .unwrap();
    let resumed = run_in(dir.path(), &args);
    assert_eq!(resumed.code, 0, "{}", resumed.stderr);
    let rerun = std::fs::read_to_string(&out).unwrap();
    assert!(rerun.contains("resumed-marker"), "cell came from the sidecar");
    assert!(!progress.exists());

    // a different config ignores and replaces stale progress
    std::fs::write(
        &progress,
        format!("config_hash={hash}\n{}\n", serde_json::json!({"key": "x", "row": []})),
    )
    .unwrap();
    let other = run_in(
        dir.path(),
        &["ballsize", "--n", "8", "--q", "2", "--b", "1", "--t", "1", "--out", &out_s],
    );
    assert_eq!(other.code, 0, "{}", other.stderr);
    assert!(std::fs::read_to_string(&out).unwrap().contains("8,2,1,1,4,9,16,true,ok,"));
}

#[test]
fn help_names_all_subcommands() {
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    for name in [
        "distance",
        "ballsize",
        "intersect",
        "construct",
        "check",
        "degree",
        "shift",
        "diametric",
        "simulate",
        "reconstruct",
        "tradeoff",
    ] {
        assert!(r.stdout.contains(name), "--help lists {name}");
    }
}

use std::process::{Command, Output};

use excesslab::enumerate::brute_force_count;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_excesslab"))
        .args(args)
        .env_remove("EXCESSLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn table_matches_brute_force() {
    let out = run(&["table", "--kmax", "7", "--lmax", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,ell,count"));
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let (k, ell): (usize, i64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let m = (k as i64 + ell) as usize;
        assert_eq!(f[2], brute_force_count(k, m).unwrap().to_string(), "{line}");
        rows += 1;
    }
    assert_eq!(rows, 7 * 5);
}

#[test]
fn table_bridge_column() {
    let out = run(&["table", "--kmax", "6", "--lmax", "2", "--bridge-r", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("k,ell,count,bridge_count\n"));
    assert!(text.lines().any(|l| l == "6,0,3660,90"), "{text}");
    let one = run(&["table", "--kmax", "6", "--lmax", "2", "--bridge-r", "0", "--one-sided"]);
    assert!(stdout(&one).lines().any(|l| l == "6,0,3660,180"));
}

#[test]
fn constants_first_row() {
    let out = run(&["constants", "--lmax", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row1 = text.lines().nth(1).unwrap();
    assert!(row1.starts_with("1,5/24,19/24,"), "{row1}");
    let j = json(&run(&["constants", "--lmax", "3", "--format", "json"]));
    assert_eq!(j["rows"][2]["b"], "1105/1152");
}

#[test]
fn decompose_row() {
    let j = json(&run(&["decompose", "--ell", "1", "--format", "json"]));
    assert_eq!(j["b"], "5/24");
    assert_eq!(j["c"], "19/24");
    let omega = j["omega"].as_array().unwrap();
    assert_eq!(omega.len(), 6);
    assert_eq!(omega[0]["s"], -2);
}

#[test]
fn simulate_n4_mean_within_three_se() {
    let out = run(&["simulate", "--n", "4", "--lmax", "1", "--trials", "10000", "--seed", "7", "--format", "json"]);
    assert!(out.status.success());
    let j = json(&out);
    let e = &j["per_ell"][0];
    let (mean, se) = (e["Y_mean"].as_f64().unwrap(), e["Y_se"].as_f64().unwrap());
    assert!((mean - 1.0).abs() <= 3.0 * se, "{mean} ± {se}");
    for key in ["V_mean", "V_se", "X_mean", "Z_mean", "Z_se", "Y_fact2_mean"] {
        assert!(e.get(key).is_some(), "{key}");
    }
}

#[test]
fn output_is_byte_identical_and_thread_independent() {
    let args = ["simulate", "--n", "300", "--lmax", "3", "--trials", "40", "--seed", "11", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut with_threads = args.to_vec();
    with_threads.extend(["--threads", "3"]);
    assert_eq!(run(&with_threads).stdout, a.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_excesslab"))
        .args(args)
        .env("EXCESSLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn expect_emits_report_object() {
    let out = run(&["expect", "--n", "10000", "--ell", "4"]);
    assert!(out.status.success());
    let j = json(&out);
    for key in ["n", "ell", "E_Y", "E_Z", "E_V", "V_formula_ratio", "cutoff_used", "exact_k_ceiling", "tail_model"] {
        assert!(j.get(key).is_some(), "{key}");
    }
    assert_eq!(j["tail_model"], "hybrid-asymptotic");
    let r = j["V_formula_ratio"].as_f64().unwrap();
    assert!((0.9..1.2).contains(&r));
}

#[test]
fn alpha_anchor() {
    let out = run(&["alpha", "--n", "4", "--k", "4", "--ell", "0"]);
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[4], "1");
    assert_eq!(row[6], "true");
}

#[test]
fn treepoly_saddle_ratio() {
    let j = json(&run(&["treepoly", "--n", "2000", "--y", "100", "--saddle", "--format", "json"]));
    let r = j["ratio"].as_f64().unwrap();
    assert!((0.6..=1.6).contains(&r), "{r}");
    let small = stdout(&run(&["treepoly", "--a", "0", "--n", "3", "--y", "1"]));
    assert_eq!(small.lines().nth(1), Some("0,3,1,27"));
}

#[test]
fn flag_errors_exit_two_and_name_the_flag() {
    for (args, flag) in [
        (vec!["table", "--kmax", "0"], "--kmax"),
        (vec!["constants", "--lmax", "0"], "--lmax"),
        (vec!["alpha", "--n", "4", "--k", "9", "--ell", "0"], "--k"),
        (vec!["simulate", "--n", "1", "--lmax", "1"], "--n"),
        (vec!["simulate", "--n", "10", "--lmax", "99"], "--lmax"),
        (vec!["treepoly", "--n", "10", "--y", "20", "--saddle"], "--y"),
        (vec!["table", "--lmax", "x"], "--lmax"),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(flag), "{args:?}: {err}");
        assert!(err.contains("Usage"), "{err}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn verify_quick_passes() {
    let out = run(&["verify", "--level", "quick"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["passed"], true);
    for c in j["checks"].as_array().unwrap() {
        assert!(c["seconds"].is_f64());
    }
}

#[test]
fn verify_detects_corrupted_entry() {
    let out = run(&["verify", "--corrupt", "5:5"]);
    assert_eq!(out.status.code(), Some(1));
    let j = json(&out);
    assert_eq!(j["passed"], false);
    let failures: Vec<&str> = j["failures"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(failures.contains(&"oracle-equivalence"), "{failures:?}");
}

#[test]
fn schema_and_output_file() {
    let j = json(&run(&["--schema"]));
    assert_eq!(j["schema_version"], 1);
    assert_eq!(j["subcommands"]["table"]["csv"][2], "count");
    let dir = std::env::temp_dir().join(format!("excesslab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let out = run(&["table", "--kmax", "3", "--lmax", "0", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "k,ell,count\n1,-1,1\n1,0,0\n2,-1,1\n2,0,0\n3,-1,3\n3,0,1\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

use std::path::PathBuf;
use std::process::{Command, Output};

use decolab_cli::output::{OutputEnvelope, CURVE_HEADER, SAMPLE_HEADER};
use decolab_cli::{EXIT_INVARIANT, EXIT_OK, EXIT_USAGE};

fn decolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decolab"))
        .args(args)
        .env_remove("DECOLAB_SEED")
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn curve_example_is_geometric() {
    let out = decolab(&["curve", "--theta", "1.0471975512", "--n-min", "1", "--n-max", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some(CURVE_HEADER));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 3);
    for (row, want) in rows.iter().zip([0.5, 0.25, 0.125]) {
        assert!((row[1] - want).abs() < 1e-9, "{row:?}");
    }
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), [1.0, 2.0, 3.0]);
}

#[test]
fn qubit_example_reports_half_purity() {
    let out = decolab(&["qubit", "--n", "3", "--theta", "1.5707963268"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let env: OutputEnvelope = serde_json::from_str(&stdout(&out)).unwrap();
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let purity = value["rows_or_report"]["scenario"]["purity"].as_f64().unwrap();
    assert!((purity - 0.5).abs() < 1e-10);
    assert_eq!(env.experiment, "qubit");
    assert_eq!(env.config_echo.n_particles, 3);
    assert_eq!(env.generated_at, "2023-11-14T22:13:20Z");
}

#[test]
fn certain_sample() {
    let out = decolab(&["sample", "--trials", "1", "--seed", "7", "--c-plus", "1,0", "--c-minus", "0,0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(stdout(&out), format!("{SAMPLE_HEADER}\n1,1,1,1,\n"));
}

#[test]
fn orthogonal_row_uses_neg_inf() {
    let out = decolab(&["curve", "--cos-theta", "0", "--n-min", "1", "--n-max", "1", "--format", "csv"]);
    assert_eq!(stdout(&out), format!("{CURVE_HEADER}\n1,0,0,0.5,-inf\n"));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = decolab(&["curve", "--bogus"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_normalization_names_constraint() {
    let out = decolab(&["qubit", "--c-plus", "1,0", "--c-minus", "1,0"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("|c+|^2 + |c-|^2 = 1"));
}

#[test]
fn bad_values_are_usage_errors() {
    for args in [
        &["curve", "--cos-theta", "1.5"][..],
        &["curve", "--n-min", "5", "--n-max", "2"],
        &["sample", "--trials", "0"],
        &["qubit", "--theta", "1", "--cos-theta", "0.5"],
        &["qubit", "--c-plus", "x,y"],
    ] {
        assert_eq!(decolab(args).status.code(), Some(EXIT_USAGE), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_one() {
    let out = decolab(&["qubit", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(EXIT_INVARIANT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("I/O error"));
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("curve.csv");
    let out = decolab(&["curve", "--theta", "0.4", "--n-max", "4", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(out.stdout.is_empty());
    let on_disk = std::fs::read_to_string(&path).unwrap();
    let piped = stdout(&decolab(&["curve", "--theta", "0.4", "--n-max", "4", "--format", "csv"]));
    assert_eq!(on_disk, piped);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn replay_reproduces_payload() {
    for args in [
        &["curve", "--theta", "0.3", "--n-min", "2", "--n-max", "9"][..],
        &["macro", "--n", "6", "--theta", "1.1", "--c-plus", "0.6,0", "--c-minus", "0,0.8"],
        &["sample", "--trials", "4321", "--seed", "99", "--c-plus", "0.6,0", "--c-minus", "0.8,0"],
        &["curve", "--cos-theta", "0", "--n-max", "2"],
    ] {
        let path = scratch(&format!("{}.json", args[0]));
        let first = decolab(&[args, &["--out", path.to_str().unwrap()]].concat());
        assert_eq!(first.status.code(), Some(EXIT_OK));
        let again = decolab(&["replay", path.to_str().unwrap()]);
        assert_eq!(again.status.code(), Some(EXIT_OK));
        assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&again), "{args:?}");
        std::fs::remove_file(path).unwrap();
    }
}

#[test]
fn replay_rejects_garbage() {
    let path = scratch("garbage.json");
    std::fs::write(&path, "{}").unwrap();
    assert_eq!(decolab(&["replay", path.to_str().unwrap()]).status.code(), Some(EXIT_USAGE));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn seed_from_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_decolab"))
        .args(["sample", "--trials", "999", "--format", "csv"])
        .env("DECOLAB_SEED", "31")
        .output()
        .unwrap();
    let with_flag = decolab(&["sample", "--trials", "999", "--seed", "31", "--format", "csv"]);
    let default = decolab(&["sample", "--trials", "999", "--format", "csv"]);
    assert_eq!(with_env.stdout, with_flag.stdout);
    assert_ne!(with_env.stdout, default.stdout);
}

#[test]
fn csv_columns_constant_and_exact() {
    let text = stdout(&decolab(&["curve", "--theta", "0.123456789", "--n-min", "1", "--n-max", "60", "--format", "csv"]));
    let json = decolab(&["curve", "--theta", "0.123456789", "--n-min", "1", "--n-max", "60"]);
    let value: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let points = value["rows_or_report"]["curve"].as_array().unwrap();
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), points.len());
    for (row, point) in rows.iter().zip(points) {
        assert_eq!(row.len(), 5);
        for (k, key) in ["overlap_magnitude", "offdiag_magnitude", "purity", "log_overlap"].iter().enumerate() {
            assert_eq!(row[k + 1], point[key].as_f64().unwrap(), "{key}");
        }
    }
}

#[test]
fn selftest_passes() {
    let out = decolab(&["selftest"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = stdout(&out);
    assert!(text.lines().count() >= 10);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn in_process_run_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = decolab_cli::run(["decolab", "curve", "--theta", "0.8", "--format", "csv"], &mut out, &mut err);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, decolab(&["curve", "--theta", "0.8", "--format", "csv"]).stdout);
}

#[test]
fn help_exits_zero() {
    let out = decolab(&["--help"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(stdout(&out).contains("curve"));
}

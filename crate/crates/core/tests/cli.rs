use std::process::{Command, Output};

use longmem::cli::{RunConfig, EXIT_CLAMPED, EXIT_CONFIG, EXIT_OK};

fn longmem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_longmem"))
        .args(args)
        .env_remove("LONGMEM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn kv(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn simulate_then_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let p = path.to_str().unwrap();
    let o = longmem(&["simulate", "--model", "fgn", "--H", "0.58", "--theta", "0.6", "--alpha", "0.4", "--n", "3000", "--seed", "7", "--out", p]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3001);
    assert!(text.starts_with("t,value\n1,"));

    let o = longmem(&["estimate", "--model", "fgn", "--H", "0.58", "--in", p]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let out = stdout(&o);
    assert!((kv(&out, "theta_hat") - 0.6).abs() < 0.1);
    assert!((kv(&out, "alpha_hat") - 0.4).abs() < 0.3);
}

#[test]
fn binary_round_trip_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("x.bin");
    let b = bin.to_str().unwrap();
    let base = ["--model", "arfima", "--d", "0.2", "--theta", "0.3", "--n", "500", "--seed", "2"];
    let mut args = vec!["simulate"];
    args.extend(base);
    args.extend(["--binary", "true", "--out", b]);
    assert_eq!(longmem(&args).status.code(), Some(EXIT_OK));
    assert_eq!(std::fs::metadata(&bin).unwrap().len(), 8 + 8 * 500);
    let o = longmem(&["estimate", "--model", "arfima", "--d", "0.2", "--binary", "true", "--in", b]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert_eq!(kv(&stdout(&o), "n"), 500.0);
}

#[test]
fn out_of_range_hurst_is_a_config_error() {
    let o = longmem(&["fmap", "--model", "fgn", "--H", "1.2"]);
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_flag_is_a_config_error() {
    assert_eq!(longmem(&["fmap", "--bogus", "1"]).status.code(), Some(EXIT_CONFIG));
}

#[test]
fn constant_series_exits_clamped() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    let body: String = (1..=100).map(|t| format!("{t},1.5\n")).collect();
    std::fs::write(&path, format!("t,value\n{body}")).unwrap();
    let o = longmem(&["estimate", "--model", "white", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_CLAMPED));
    assert!(stdout(&o).contains("clamped=true"));
}

#[test]
fn print_config_round_trips() {
    let o = longmem(&["mc", "--model", "fgn", "--H", "0.58", "--theta", "0.6", "--reps", "10000", "--print-config"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    let cfg = RunConfig::from_kv_text(&text).unwrap();
    assert_eq!(cfg.to_kv_text(), text);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.cfg");
    std::fs::write(&file, &text).unwrap();
    let o = longmem(&["--config", file.to_str().unwrap(), "--reps", "50", "--print-config"]);
    assert!(stdout(&o).contains("reps=50"));
}

#[test]
fn fmap_writes_table() {
    let o = longmem(&["fmap", "--model", "white", "--grid", "0.25:0.75:0.25"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "theta,f");
    assert_eq!(lines.len(), 4);
    let last: Vec<f64> = lines[3].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[1] - 1.0 / (1.0 - 0.75 * 0.75)).abs() < 1e-12);
}

#[test]
fn constants_reports_unit_alpha_variance_for_fgn() {
    let o = longmem(&["constants", "--model", "fgn", "--H", "0.58", "--theta", "0.6"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!((kv(&stdout(&o), "alpha_clt_var") - 1.0).abs() < 1e-10);
}

#[test]
fn small_mc_and_sweep_run() {
    let dir = tempfile::tempdir().unwrap();
    let reps = dir.path().join("reps.csv");
    let o = longmem(&["mc", "--model", "fgn", "--H", "0.6", "--theta", "0.5", "--n", "300", "--reps", "40", "--out", reps.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = std::fs::read_to_string(&reps).unwrap();
    assert!(text.starts_with("rep,theta_hat,alpha_hat,s2,g1,g2,clamped\n"));
    assert_eq!(text.lines().count(), 41);

    let o = longmem(&["sweep", "--model", "white", "--theta", "0.5", "--reps", "20", "--n-grid", "100,400"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn check_battery_passes() {
    let o = longmem(&["check"]);
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

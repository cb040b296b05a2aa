use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_singlab"))
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn run(args: &[&str], config: Option<&Path>, out: &Path) -> Output {
    let mut c = bin();
    c.args(args);
    if let Some(cfg) = config {
        c.arg("--config").arg(cfg);
    }
    c.arg("--out").arg(out).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn verdict<'a>(r: &'a Value, theorem: &str) -> &'a Value {
    r["verdict"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["theorem"] == theorem)
        .unwrap_or_else(|| panic!("no {theorem} verdict"))
}

const SUBCRITICAL: &str = r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5, "gamma": 1.0}}"#;
const SINGULAR_Q3: &str = r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 3}, "boundary": {"constant": 3.2}}"#;

#[test]
fn solve_subcritical_writes_profile_and_report() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", SUBCRITICAL);
    let out = dir.path().join("out");
    let o = run(&["solve"], Some(&cfg), &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,r,w,w_t,u,u_r"));
    assert_eq!(lines.count(), 4096);
    assert!(csv.ends_with('\n'));
    let r = report(&out.join("report.json"));
    for key in ["config_echo", "fits", "verification", "verdict", "timings", "version"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    let g = r["fits"]["singularity"]["gamma_hat"].as_f64().unwrap();
    assert!((g - 1.0).abs() < 1e-2, "gamma_hat {g}");
    assert_eq!(verdict(&r, "T1_Classification")["outcome"], "pass");
    assert_eq!(verdict(&r, "T2_ExistenceUniqueness")["outcome"], "pass");
}

#[test]
fn solve_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", SINGULAR_Q3);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(code(&run(&["solve"], Some(&cfg), &a)), 0);
    assert_eq!(code(&run(&["solve"], Some(&cfg), &b)), 0);
    for f in ["profile.csv", "report.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn q_equal_two_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 2, "gamma": 1}}"#);
    let o = run(&["solve"], Some(&cfg), dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("critical exponent"), "{}", stderr(&o));
}

#[test]
fn gamma_above_two_over_b_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5, "gamma": 2.5}}"#);
    let o = run(&["solve"], Some(&cfg), dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("outside [0, 2/b]"), "{}", stderr(&o));
}

#[test]
fn unknown_keys_and_bad_boundaries_are_rejected() {
    let dir = TempDir::new().unwrap();
    for (i, json) in [
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5, "gamma": 1}, "extra": true}"#,
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5, "gamma": 1}, "solver": {"t_zero": -10}}"#,
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5, "gamma": 1}, "boundary": {"samples": [0, 0, 0]}}"#,
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5, "gamma": 1}, "solver": {"n_points": 10}}"#,
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5}}"#,
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 3, "gamma": 1}}"#,
    ]
    .iter()
    .enumerate()
    {
        let cfg = write_config(dir.path(), &format!("c{i}.json"), json);
        let o = run(&["solve"], Some(&cfg), dir.path());
        assert_eq!(code(&o), 1, "config {i}: {}", stderr(&o));
    }
}

#[test]
fn missing_config_file_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let o = run(&["solve"], Some(&dir.path().join("absent.json")), dir.path());
    assert_eq!(code(&o), 4);
}

#[test]
fn unattainable_boundary_reports_the_floor() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 3}}"#);
    let o = run(&["solve"], Some(&cfg), dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("3.0995"), "{}", stderr(&o));
}

#[test]
fn verify_round_trip_and_singular_verdict() {
    let dir = TempDir::new().unwrap();
    let sub = write_config(dir.path(), "sub.json", SUBCRITICAL);
    let out = dir.path().join("sub");
    assert_eq!(code(&run(&["solve"], Some(&sub), &out)), 0);
    let profile = out.join("profile.csv");
    let vout = dir.path().join("sub-verify");
    let o = run(&["verify", "--profile", profile.to_str().unwrap()], Some(&sub), &vout);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = report(&vout.join("report.json"));
    let t1 = verdict(&r, "T1_Classification");
    assert_eq!(t1["outcome"], "pass");
    let mass = r["verification"]["mass"]["mass"].as_f64().unwrap();
    assert!((mass - 1.0).abs() < 1e-2, "mass {mass}");

    let q3 = write_config(dir.path(), "q3.json", SINGULAR_Q3);
    let out = dir.path().join("q3");
    assert_eq!(code(&run(&["solve"], Some(&q3), &out)), 0);
    let vout = dir.path().join("q3-verify");
    let profile = out.join("profile.csv");
    let o = run(&["verify", "--profile", profile.to_str().unwrap()], Some(&q3), &vout);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = report(&vout.join("report.json"));
    let t3 = verdict(&r, "T3_Dichotomy");
    assert_eq!(t3["outcome"], "pass");
    let g = t3["evidence"]["fit"]["gamma_hat"].as_f64().unwrap();
    assert!((g - 3.0).abs() < 1e-2);
}

#[test]
fn corrupted_profiles_exit_one_without_a_verdict() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", SUBCRITICAL);
    let out = dir.path().join("out");
    assert_eq!(code(&run(&["solve"], Some(&cfg), &out)), 0);
    let good = std::fs::read_to_string(out.join("profile.csv")).unwrap();
    let lines: Vec<&str> = good.lines().collect();
    let truncated_mid_row = &good[..good.len() / 2];
    let truncated_rows = lines[..lines.len() / 2].join("\n") + "\n";
    let garbage = good.replacen("0.", "x.", 3);
    let bad_header = good.replacen("t,r,w", "t,r,v", 1);
    let wrong_u = {
        let mut rows: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        let mut f: Vec<String> = rows[10].split(',').map(String::from).collect();
        f[4] = "123.0".into();
        rows[10] = f.join(",");
        rows.join("\n") + "\n"
    };
    for (i, text) in [truncated_mid_row.to_string(), truncated_rows, garbage, bad_header, wrong_u, String::new()]
        .iter()
        .enumerate()
    {
        let p = dir.path().join(format!("bad{i}.csv"));
        std::fs::write(&p, text).unwrap();
        let vout = dir.path().join(format!("v{i}"));
        let o = run(&["verify", "--profile", p.to_str().unwrap()], Some(&cfg), &vout);
        assert_eq!(code(&o), 1, "case {i}: {}", stderr(&o));
        assert!(!vout.join("report.json").exists(), "case {i} wrote a verdict");
    }
}

#[test]
fn sweep_over_gamma_matches_targets_in_order() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5}, "sweep": {"gamma": [0.5, 1.0, 1.5, 2.0]}}"#,
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let o = bin().args(["sweep", "--jobs", "4", "--config"]).arg(&cfg).arg("--out").arg(&a).output().unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = bin().args(["sweep", "--jobs", "1", "--config"]).arg(&cfg).arg("--out").arg(&b).output().unwrap();
    assert_eq!(code(&o), 0);
    let table = std::fs::read(a.join("sweep.csv")).unwrap();
    assert_eq!(table, std::fs::read(b.join("sweep.csv")).unwrap());
    let mut rdr = csv::Reader::from_reader(table.as_slice());
    let h = rdr.headers().unwrap().clone();
    let col = |name: &str| h.iter().position(|c| c == name).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 4);
    for (row, g) in rows.iter().zip([0.5, 1.0, 1.5, 2.0]) {
        assert_eq!(&row[col("status")], "ok");
        let gh: f64 = row[col("gamma_hat")].parse().unwrap();
        assert!((gh - g).abs() < 1e-2, "gamma {g}: {gh}");
    }
    assert_eq!(&rows[3][col("branch")], "critical");
    assert!(a.join("row-003").join("report.json").exists());
}

#[test]
fn sweep_over_q_recovers_q_over_b() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 3}, "boundary": {"constant": 6}, "sweep": {"q": [2.5, 3, 4]}}"#,
    );
    let out = dir.path().join("o");
    let o = run(&["sweep", "--jobs", "3"], Some(&cfg), &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(out.join("sweep.csv")).unwrap();
    let h = rdr.headers().unwrap().clone();
    let col = |name: &str| h.iter().position(|c| c == name).unwrap();
    for (row, q) in rdr.records().map(|r| r.unwrap()).zip([2.5, 3.0, 4.0]) {
        let gh: f64 = row[col("gamma_hat")].parse().unwrap();
        assert!((gh - q).abs() < 1e-2, "q {q}: {gh}");
    }
}

#[test]
fn sweep_grid_errors() {
    let dir = TempDir::new().unwrap();
    let empty = write_config(
        dir.path(),
        "e.json",
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5}, "sweep": {"gamma": []}}"#,
    );
    assert_eq!(code(&run(&["sweep"], Some(&empty), dir.path())), 1);
    let none = write_config(dir.path(), "n.json", SUBCRITICAL);
    assert_eq!(code(&run(&["sweep"], Some(&none), dir.path())), 1);
    let all_bad = write_config(
        dir.path(),
        "b.json",
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5}, "sweep": {"gamma": [3.0, 4.0]}}"#,
    );
    let out = dir.path().join("bad");
    assert_eq!(code(&run(&["sweep"], Some(&all_bad), &out)), 1);
    assert!(out.join("sweep.csv").exists());
}

#[test]
fn sweep_keeps_going_past_failed_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5}, "sweep": {"gamma": [1.0, 2.5]}}"#,
    );
    let out = dir.path().join("o");
    assert_eq!(code(&run(&["sweep"], Some(&cfg), &out)), 0);
    let table = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert!(rows[0].contains(",ok,"));
    assert!(rows[1].contains(",invalid,"));
}

#[test]
fn oracle_passes_and_negative_control_fails() {
    let dir = TempDir::new().unwrap();
    let o = run(&["oracle"], None, &dir.path().join("a"));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = report(&dir.path().join("a").join("oracle.json"));
    assert!(r["note"].as_str().unwrap().contains("m = a"));
    let o = run(&["oracle", "--inject-sign-error"], None, &dir.path().join("b"));
    assert_eq!(code(&o), 3);
}

#[test]
fn two_dimensional_cosine_run() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"params": {"m": 1, "a": 1, "b": 1, "q": 1.5, "gamma": 1},
            "solver": {"n_points": 1024},
            "boundary": {"harmonic": {"mean": 0, "amplitude": 0.3, "mode": 1, "n_theta": 16}},
            "verification": {"seeds": 1}}"#,
    );
    let out = dir.path().join("o");
    let o = run(&["solve"], Some(&cfg), &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = report(&out.join("report.json"));
    let f = &r["field"];
    assert!(f["parseval_defect"].as_f64().unwrap() < 1e-12);
    assert!(f["seed_spread"].as_f64().unwrap() < 1e-8);
    assert_eq!(verdict(&r, "T2_ExistenceUniqueness")["outcome"], "pass");
    let field = std::fs::read_to_string(out.join("field.csv")).unwrap();
    assert_eq!(field.lines().next(), Some("t,theta,r,w,u"));
    assert_eq!(field.lines().count(), 1 + 1024 * 16);
    let modes = std::fs::read_to_string(out.join("modes.csv")).unwrap();
    assert_eq!(modes.lines().next(), Some("t,k,norm,norm_t"));
}

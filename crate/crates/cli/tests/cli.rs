use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symhyp"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .arg("run")
        .arg(cfg)
        .arg("--output-dir")
        .arg(out)
        .args(["--threads", "1"])
        .args(extra)
        .output()
        .unwrap()
}

fn verdict_rows(out: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(out.join("verdicts.csv")).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn log_events(out: &Path) -> Vec<serde_json::Value> {
    std::fs::read_to_string(out.join("run.ndjson"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn burgers_riemann_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&config("burgers_riemann.cfg"), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = verdict_rows(dir.path());
    let speed = rows.iter().find(|r| r[0] == "riemann.rh_speed").unwrap();
    assert_eq!((speed[1].as_str(), speed[2].as_str()), ("pass", "0.5"));
    let prod = rows.iter().find(|r| r[0] == "riemann.entropy_production").unwrap();
    assert_eq!(prod[1], "pass");
    assert!((prod[2].parse::<f64>().unwrap() + 1.0 / 6.0).abs() < 1e-12);
    assert!(rows.iter().all(|r| r[1] == "pass"), "{rows:?}");
    assert!(dir.path().join("snapshots/step_00000000.csv").exists());
    assert!(dir.path().join("monitors/totals.csv").exists());
}

#[test]
fn zero_maxwell_fields_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&config("maxwell_zero.cfg"), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for r in verdict_rows(dir.path()).iter().filter(|r| r[0].starts_with("constraints.")) {
        assert_eq!(r[2], "0.0");
    }
}

#[test]
fn negative_pressure_is_an_execution_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&config("euler_sh_negative_pressure.cfg"), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
    let events = log_events(dir.path());
    let error = events.iter().find(|e| e["event"] == "error").unwrap();
    assert!(error["message"].as_str().unwrap().contains("state outside box"));
    assert_eq!(events.last().unwrap()["event"], "finished");
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("t.cfg");
    std::fs::write(&cfg, "[model]\nname = tricomi\nlambda = 0\n[check.certificate]\n").unwrap();
    let out = run(&cfg, &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(verdict_rows(&dir.path().join("out"))[0][1], "fail");
}

#[test]
fn config_errors_name_line_and_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "[model]\nname = burgers\n\n[scheme]\nlambda = -1\nt_end = 1\n").unwrap();
    let out = run(&cfg, &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5: `lambda`"), "{err}");
    std::fs::write(&cfg, "[model]\nname = burgers\n[scheme]\nlambda = 1\nt_end = 1\nviscocity = 1\n").unwrap();
    let err = String::from_utf8_lossy(&run(&cfg, &dir.path().join("out"), &[]).stderr).to_string();
    assert!(err.contains("did you mean `viscosity`?"), "{err}");
}

#[test]
fn check_mode_skips_integration() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("check")
        .arg(config("wave_support.cfg"))
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rows = verdict_rows(dir.path());
    assert!(rows.iter().all(|r| r[1] == "skipped"), "{rows:?}");
    assert!(!dir.path().join("snapshots").exists());
}

#[test]
fn seed_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    run(&config("tricomi.cfg"), dir.path(), &["--seed", "42"]);
    let first = &log_events(dir.path())[0];
    assert_eq!(first["event"], "config");
    assert_eq!(first["seed"], 42);
    assert_eq!(first["threads"], 1);
}

#[test]
fn models_lists_every_model() {
    let out = bin().arg("models").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["burgers", "advection", "scalar", "wave", "maxwell", "euler_sh", "euler_cons", "tricomi", "ck"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn tabulated_initial_data() {
    let dir = tempfile::tempdir().unwrap();
    let rows: String = (0..10).map(|i| format!("{}\n", if i < 5 { 1.0 } else { 0.0 })).collect();
    std::fs::write(dir.path().join("u0.csv"), format!("u\n{rows}")).unwrap();
    let cfg = dir.path().join("tab.cfg");
    std::fs::write(
        &cfg,
        "[model]\nname = burgers\n[grid]\ncells = 10\nlower = -1\nupper = 1\nboundary = outflow\n\
         [scheme]\nlambda = 0.5\nt_end = 0.1\n[initial]\nprofile = tabulated\nfile = u0.csv\n",
    )
    .unwrap();
    let out = run(&cfg, &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let snap = std::fs::read_to_string(dir.path().join("out/snapshots/step_00000000.csv")).unwrap();
    assert_eq!(snap.lines().nth(1).unwrap(), "-0.9,1.0");
}

use std::fs;
use std::process::Command;

fn ripa() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ripa"))
}

#[test]
fn list_cases_prints_registry() {
    let out = ripa().arg("list-cases").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["lake_at_rest", "dam_flat_1d", "rect_dam_2d"] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn run_writes_snapshot_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let res = ripa()
        .args(["run", "--case", "dam_flat_1d", "--scheme", "wb", "--variant", "upwind"])
        .args(["--nx", "40", "--tend", "0.05", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stdout).contains("L1 errors"));
    let snap = fs::read_to_string(dir.path().join("snapshot_t0.0500.csv")).unwrap();
    assert!(snap.starts_with("# case=dam_flat_1d, scheme=wb-upwind, nx=40, t=0.05\nx,h,u,theta,b,h+b,p\n"));
    assert_eq!(snap.lines().count(), 42);
    assert!(dir.path().join("errors.csv").exists());
    assert!(dir.path().join("reference.csv").exists());
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    fs::write(&cfg, "[run]\ncase = isobaric\nscheme = rusanov\nnx = 30\ntend = 5\n").unwrap();
    let out = dir.path().join("out");
    let res = ripa()
        .args(["run", "--tend", "0.1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let snap = fs::read_to_string(out.join("snapshot_t0.1000.csv")).unwrap();
    assert!(snap.starts_with("# case=isobaric, scheme=rusanov, nx=30, t=0.1\n"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = ripa().args(["run", "--case", "nope", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("lake_at_rest"));

    let bad_alpha = ripa()
        .args(["run", "--case", "dam_flat_1d", "--alpha", "0.2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(bad_alpha.status.code(), Some(2));

    let bad_flag = ripa().args(["run", "--scheme", "euler"]).output().unwrap();
    assert_eq!(bad_flag.status.code(), Some(2));
}

#[test]
fn solver_failure_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let res = ripa()
        .args(["run", "--case", "dam_flat_1d", "--nx", "40", "--fixed-dt", "0.5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(3));
}

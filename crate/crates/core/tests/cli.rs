use std::path::Path;
use std::process::{Command, Output};

fn osgrp(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osgrp")).args(args).env("OSGRP_OUT_DIR", out).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn list_cases_names_every_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let o = osgrp(&["list-cases"], dir.path());
    assert!(o.status.success());
    for name in osgrp::cases::BUILTIN_NAMES {
        assert!(stdout(&o).lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn run_writes_frames_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = osgrp(&["run", "burgers-ibvp"], dir.path());
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(value(&text, "case"), Some("burgers-ibvp"));
    assert_eq!(value(&text, "pass"), Some("true"));
    assert!(value(&text, "l1_v").unwrap().parse::<f64>().unwrap() < 2e-2);
    let frame = std::fs::read_to_string(dir.path().join("burgers-ibvp.csv")).unwrap();
    let table = osgrp::io::read_csv(&frame).unwrap();
    assert_eq!(table.rows.len(), 100);
    assert!(dir.path().join("burgers-ibvp_spacetime.csv").exists());
}

#[test]
fn runs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert!(osgrp(&["run", "woodward-colella", "--cells", "100", "--no-reference"], d.path()).status.success());
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("woodward-colella.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    let o = osgrp(&["compare", &a.path().join("woodward-colella.csv").to_string_lossy(), &b.path().join("woodward-colella.csv").to_string_lossy()], a.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("L1 0.000000e0"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(osgrp(&["run", "no-such-case"], dir.path()).status.code(), Some(2));
    assert_eq!(osgrp(&["convergence", "smooth-wave", "--cells", "100"], dir.path()).status.code(), Some(2));
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "name = 3").unwrap();
    assert_eq!(osgrp(&["run", &bad.to_string_lossy()], dir.path()).status.code(), Some(2));
}

#[test]
fn compare_refuses_different_grids() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(osgrp(&["run", "shock-wall", "--cells", "50", "--t-end", "0.1"], a.path()).status.success());
    assert!(osgrp(&["run", "shock-wall", "--cells", "60", "--t-end", "0.1"], b.path()).status.success());
    let o = osgrp(&["compare", &a.path().join("shock-wall.csv").to_string_lossy(), &b.path().join("shock-wall.csv").to_string_lossy()], a.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exported_case_runs_and_a_missed_threshold_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("wave.toml");
    assert!(osgrp(&["export-case", "smooth-wave", "-o", &file.to_string_lossy()], dir.path()).status.success());
    let o = osgrp(&["run", &file.to_string_lossy(), "--cells", "50"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = std::fs::read_to_string(&file).unwrap();
    let mut case = osgrp::cases::CaseConfig::from_toml(&text).unwrap();
    case.tolerance = Some(1e-12);
    std::fs::write(&file, case.to_toml().unwrap()).unwrap();
    let o = osgrp(&["run", &file.to_string_lossy(), "--cells", "50"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(value(&stdout(&o), "pass"), Some("false"));
}

#[test]
fn convergence_reports_orders() {
    let dir = tempfile::tempdir().unwrap();
    let o = osgrp(&["convergence", "smooth-wave", "--cells", "50,100"], dir.path());
    assert!(o.status.success());
    let last = stdout(&o).lines().last().unwrap().to_string();
    let order: f64 = last.split_whitespace().last().unwrap().parse().unwrap();
    assert!(order > 1.5, "{last}");
}

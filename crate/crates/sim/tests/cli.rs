use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pirs(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pirs"))
        .args(args)
        .current_dir(cwd)
        .env_remove("PIRS_OUT_DIR")
        .output()
        .unwrap()
}

fn short_config(dir: &Path) -> String {
    let path = dir.join("short.toml");
    fs::write(&path, "sim_duration_s = 60.0\n").unwrap();
    path.to_str().unwrap().to_string()
}

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count() - 1
}

#[test]
fn run_writes_one_row_per_rep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_config(dir.path());
    let out = pirs(
        &[
            "run",
            "--config",
            &cfg,
            "--strategy",
            "pirs",
            "--vehicles",
            "40",
            "--reps",
            "10",
            "--seed",
            "42",
            "--out",
            "r",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(data_rows(&dir.path().join("r/runs.csv")), 10);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        stdout
            .lines()
            .filter(|l| l.starts_with("pirs n=40 rep="))
            .count(),
        10
    );
}

#[test]
fn run_twice_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_config(dir.path());
    for out in ["a", "b"] {
        let o = pirs(
            &[
                "run",
                "--config",
                &cfg,
                "--strategy",
                "airs",
                "--vehicles",
                "15",
                "--reps",
                "3",
                "--out",
                out,
            ],
            dir.path(),
        );
        assert!(o.status.success());
    }
    for f in ["runs.csv", "aggregate.csv"] {
        assert_eq!(
            fs::read(dir.path().join("a").join(f)).unwrap(),
            fs::read(dir.path().join("b").join(f)).unwrap()
        );
    }
}

#[test]
fn unknown_strategy_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = pirs(&["run", "--strategy", "greedy"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("greedy") && err.contains("Usage"), "{err}");
}

#[test]
fn invalid_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "[game]\nalpha = 0.0\n").unwrap();
    let out = pirs(
        &[
            "run",
            "--strategy",
            "ncs",
            "--config",
            path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}

#[test]
fn missing_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = pirs(&["sweep", "--config", "nope.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.toml"));
}

#[test]
fn sweep_grid_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_config(dir.path());
    let out = pirs(
        &[
            "sweep",
            "--config",
            &cfg,
            "--vehicles",
            "10,20",
            "--strategies",
            "ncs,pirs",
            "--reps",
            "2",
            "--parallel",
            "2",
            "--out",
            "s",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(data_rows(&dir.path().join("s/runs.csv")), 2 * 2 * 2);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("strategy"));
    assert!(stdout.contains("8 runs"));
}

#[test]
fn bad_vehicle_range_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = pirs(&["sweep", "--vehicles", "100:20:20"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_config(dir.path());
    let out = Command::new(env!("CARGO_BIN_EXE_pirs"))
        .args([
            "run",
            "--config",
            &cfg,
            "--strategy",
            "ncs",
            "--vehicles",
            "5",
            "--reps",
            "1",
        ])
        .current_dir(dir.path())
        .env("PIRS_OUT_DIR", "from-env")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("from-env/aggregate.csv").exists());
}

#[test]
fn defaults_prints_loadable_toml() {
    let dir = tempfile::tempdir().unwrap();
    let out = pirs(&["defaults"], dir.path());
    assert!(out.status.success());
    let path = dir.path().join("d.toml");
    fs::write(&path, &out.stdout).unwrap();
    assert_eq!(
        pirs_sim::load_scenario(&path).unwrap(),
        pirs_core::default_scenario()
    );
}

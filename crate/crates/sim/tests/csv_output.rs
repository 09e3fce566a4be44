use std::fs;

use pirs_core::metrics::METRICS;
use pirs_core::{default_scenario, Strategy};
use pirs_sim::output::{AGGREGATE_HEADER, RUNS_HEADER};
use pirs_sim::{read_aggregate, write_csvs, OutputError, SweepPlan};

fn small_plan() -> SweepPlan {
    SweepPlan {
        vehicle_counts: vec![3, 6],
        strategies: Strategy::ALL.to_vec(),
        reps: 2,
        master_seed: 5,
        out_dir: "unused".into(),
    }
}

fn short_scenario() -> pirs_core::ScenarioConfig {
    let mut cfg = default_scenario();
    cfg.sim_duration_s = 120.0;
    cfg
}

#[test]
fn empty_input_gives_header_only_files() {
    let dir = tempfile::tempdir().unwrap();
    let [runs, agg] = write_csvs(dir.path(), &[]).unwrap();
    assert_eq!(
        fs::read_to_string(runs).unwrap(),
        RUNS_HEADER.join(",") + "\n"
    );
    assert_eq!(
        fs::read_to_string(&agg).unwrap(),
        AGGREGATE_HEADER.join(",") + "\n"
    );
    assert!(read_aggregate(&agg).unwrap().is_empty());
}

#[test]
fn cardinality_and_order() {
    let dir = tempfile::tempdir().unwrap();
    let reports = small_plan().execute(&short_scenario(), 2).unwrap();
    let [runs, agg] = write_csvs(dir.path(), &reports).unwrap();

    let text = fs::read_to_string(runs).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 3 * 2 * 2);
    assert!(lines[1].starts_with("ncs,3,0,5,"));
    assert!(lines[12].starts_with("pirs,6,1,5,"));
    for l in &lines[1..] {
        assert_eq!(l.split(',').count(), RUNS_HEADER.len());
    }

    let rows = read_aggregate(&agg).unwrap();
    assert_eq!(rows.len(), 3 * 2 * METRICS.len());
    assert!(rows.iter().all(|r| r.n_reps == 2 && r.std >= 0.0));
    assert_eq!(rows[0].metric, METRICS[0]);
}

#[test]
fn aggregate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let reports = small_plan().execute(&short_scenario(), 1).unwrap();
    let [_, agg] = write_csvs(dir.path(), &reports).unwrap();
    let back = read_aggregate(&agg).unwrap();
    let direct = pirs_core::finalize(&reports);
    assert_eq!(back.len(), direct.len());
    for (a, b) in back.iter().zip(&direct) {
        assert_eq!(
            (a.strategy, a.n_vehicles, a.metric.as_str(), a.n_reps),
            (b.strategy, b.n_vehicles, b.metric, b.n_reps)
        );
        // Six significant digits.
        assert!((a.mean - b.mean).abs() <= 1e-5 * b.mean.abs().max(1e-300));
        assert!((a.std - b.std).abs() <= 1e-5 * b.std.abs().max(1e-300));
    }
}

#[test]
fn rewrite_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let plan = small_plan();
    write_csvs(a.path(), &plan.execute(&short_scenario(), 1).unwrap()).unwrap();
    write_csvs(b.path(), &plan.execute(&short_scenario(), 3).unwrap()).unwrap();
    for f in ["runs.csv", "aggregate.csv"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn reader_names_missing_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("aggregate.csv");
    fs::write(
        &path,
        "strategy,n_vehicles,metric,mean,n_reps\npirs,40,failed_pct,0.1,10\n",
    )
    .unwrap();
    match read_aggregate(&path) {
        Err(OutputError::MissingColumn { column, .. }) => assert_eq!(column, "std"),
        other => panic!("expected missing column, got {other:?}"),
    }
}

#[test]
fn reader_rejects_bad_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("aggregate.csv");
    fs::write(
        &path,
        "strategy,n_vehicles,metric,mean,std,n_reps\nxyz,40,failed_pct,0.1,0,10\n",
    )
    .unwrap();
    assert!(matches!(
        read_aggregate(&path),
        Err(OutputError::BadValue {
            column: "strategy",
            ..
        })
    ));
}

#[test]
fn unwritable_directory_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    let err = write_csvs(&file.join("sub"), &[]).unwrap_err();
    assert!(err.to_string().contains("plain"), "{err}");
}

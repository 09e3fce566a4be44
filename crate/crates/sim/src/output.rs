//! `runs.csv` and `aggregate.csv`.

use std::fs;
use std::path::{Path, PathBuf};

use pirs_core::metrics::METRICS;
use pirs_core::{AggregateRow, MetricsReport, Strategy};

pub const RUNS_FILE: &str = "runs.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";

pub const RUNS_HEADER: [&str; 15] = [
    "strategy",
    "n_vehicles",
    "rep",
    "seed",
    "total_tasks",
    "failed_tasks",
    "failed_pct",
    "failed_length_gi",
    "executed_local",
    "executed_v2v",
    "executed_edge",
    "executed_cloud",
    "offload_pct",
    "offloaded_length_gi",
    "succeeded_length_gi",
];

pub const AGGREGATE_HEADER: [&str; 6] =
    ["strategy", "n_vehicles", "metric", "mean", "std", "n_reps"];

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{}: missing column `{column}`", path.display())]
    MissingColumn { path: PathBuf, column: &'static str },
    #[error("{}: line {line}: bad `{column}` value {value:?}", path.display())]
    BadValue {
        path: PathBuf,
        line: u64,
        column: &'static str,
        value: String,
    },
}

/// Formats like C's `%.6g`: six significant digits, trailing zeros dropped.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // Round first so that e.g. 999999.5 picks the exponent of its rounded form.
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn run_key(r: &MetricsReport) -> (Strategy, usize, u64) {
    (r.strategy, r.n_vehicles, r.rep)
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>, OutputError> {
    csv::Writer::from_path(path).map_err(|source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn write_all(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), OutputError> {
    let csv_err = |source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = writer(path)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_runs(path: &Path, reports: &[MetricsReport]) -> Result<(), OutputError> {
    let mut sorted: Vec<&MetricsReport> = reports.iter().collect();
    sorted.sort_by_key(|r| run_key(r));
    let rows = sorted
        .into_iter()
        .map(|r| {
            vec![
                r.strategy.to_string(),
                r.n_vehicles.to_string(),
                r.rep.to_string(),
                r.seed.to_string(),
                r.total_tasks.to_string(),
                r.failed_tasks.to_string(),
                sig6(r.failed_pct()),
                sig6(r.failed_length_gi),
                r.executed_local.to_string(),
                r.executed_v2v.to_string(),
                r.executed_edge.to_string(),
                r.executed_cloud.to_string(),
                sig6(r.offload_pct()),
                sig6(r.offloaded_length_gi),
                sig6(r.succeeded_length_gi),
            ]
        })
        .collect();
    write_all(path, &RUNS_HEADER, rows)
}

fn metric_rank(name: &str) -> usize {
    METRICS
        .iter()
        .position(|m| *m == name)
        .unwrap_or(METRICS.len())
}

pub fn write_aggregate(path: &Path, rows: &[AggregateRow]) -> Result<(), OutputError> {
    let mut sorted: Vec<&AggregateRow> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.strategy, r.n_vehicles, metric_rank(r.metric)));
    let rows = sorted
        .into_iter()
        .map(|r| {
            vec![
                r.strategy.to_string(),
                r.n_vehicles.to_string(),
                r.metric.to_string(),
                sig6(r.mean),
                sig6(r.std),
                r.n_reps.to_string(),
            ]
        })
        .collect();
    write_all(path, &AGGREGATE_HEADER, rows)
}

/// Writes both files into `dir`, creating it if needed, and returns their paths.
pub fn write_csvs(dir: &Path, reports: &[MetricsReport]) -> Result<[PathBuf; 2], OutputError> {
    fs::create_dir_all(dir).map_err(|source| OutputError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let runs = dir.join(RUNS_FILE);
    let aggregate = dir.join(AGGREGATE_FILE);
    write_runs(&runs, reports)?;
    write_aggregate(&aggregate, &pirs_core::finalize(reports))?;
    Ok([runs, aggregate])
}

/// One row of `aggregate.csv` as read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRecord {
    pub strategy: Strategy,
    pub n_vehicles: usize,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub n_reps: usize,
}

pub fn read_aggregate(path: &Path) -> Result<Vec<AggregateRecord>, OutputError> {
    let csv_err = |source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let mut idx = [0usize; 6];
    for (slot, column) in idx.iter_mut().zip(AGGREGATE_HEADER) {
        *slot =
            headers
                .iter()
                .position(|h| h == column)
                .ok_or_else(|| OutputError::MissingColumn {
                    path: path.to_path_buf(),
                    column,
                })?;
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |k: usize| {
            let column = AGGREGATE_HEADER[k];
            let value = rec.get(idx[k]).unwrap_or("");
            (column, value)
        };
        let bad = |(column, value): (&'static str, &str)| OutputError::BadValue {
            path: path.to_path_buf(),
            line,
            column,
            value: value.to_string(),
        };
        let parse_f = |k: usize| {
            let f = field(k);
            f.1.parse::<f64>().map_err(|_| bad(f))
        };
        let parse_u = |k: usize| {
            let f = field(k);
            f.1.parse::<usize>().map_err(|_| bad(f))
        };
        out.push(AggregateRecord {
            strategy: field(0).1.parse().map_err(|_| bad(field(0)))?,
            n_vehicles: parse_u(1)?,
            metric: field(2).1.to_string(),
            mean: parse_f(3)?,
            std: parse_f(4)?,
            n_reps: parse_u(5)?,
        });
    }
    Ok(out)
}

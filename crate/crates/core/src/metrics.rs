//! Per-run counters and cross-repetition aggregation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::strategy::{Strategy, Tier};
use crate::workload::{TaskId, TaskSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleRecord(pub TaskId);

impl fmt::Display for DoubleRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "task {} recorded twice", self.0)
    }
}

impl core::error::Error for DoubleRecord {}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub strategy: Strategy,
    pub n_vehicles: usize,
    pub rep: u64,
    pub seed: u64,
    pub warmup_s: f64,
    pub total_tasks: u64,
    pub failed_tasks: u64,
    pub failed_length_gi: f64,
    pub executed_local: u64,
    pub executed_v2v: u64,
    pub executed_edge: u64,
    pub executed_cloud: u64,
    /// Tasks sent to edge or cloud, including those that later failed.
    pub offloaded_to_mec_tasks: u64,
    pub offloaded_length_gi: f64,
    pub succeeded_length_gi: f64,
    pub total_length_gi: f64,
    recorded: BTreeSet<TaskId>,
}

impl MetricsReport {
    pub fn new(strategy: Strategy, n_vehicles: usize, rep: u64, seed: u64, warmup_s: f64) -> Self {
        Self {
            strategy,
            n_vehicles,
            rep,
            seed,
            warmup_s,
            total_tasks: 0,
            failed_tasks: 0,
            failed_length_gi: 0.0,
            executed_local: 0,
            executed_v2v: 0,
            executed_edge: 0,
            executed_cloud: 0,
            offloaded_to_mec_tasks: 0,
            offloaded_length_gi: 0.0,
            succeeded_length_gi: 0.0,
            total_length_gi: 0.0,
            recorded: BTreeSet::new(),
        }
    }

    /// Counts one terminal task. `target` is the tier the task was sent to;
    /// tasks ending before the warm-up horizon are ignored.
    pub fn record_outcome(
        &mut self,
        task: &TaskSpec,
        target: Tier,
        outcome: Outcome,
        at_s: f64,
    ) -> Result<(), DoubleRecord> {
        if at_s < self.warmup_s {
            return Ok(());
        }
        if !self.recorded.insert(task.task_id) {
            return Err(DoubleRecord(task.task_id));
        }
        let l = task.length_gi;
        self.total_tasks += 1;
        self.total_length_gi += l;
        if target.is_mec() {
            self.offloaded_to_mec_tasks += 1;
            self.offloaded_length_gi += l;
        }
        match outcome {
            Outcome::Failed => {
                self.failed_tasks += 1;
                self.failed_length_gi += l;
            }
            Outcome::Success => {
                self.succeeded_length_gi += l;
                match target {
                    Tier::Local => self.executed_local += 1,
                    Tier::V2V => self.executed_v2v += 1,
                    Tier::Edge => self.executed_edge += 1,
                    Tier::Cloud => self.executed_cloud += 1,
                }
            }
        }
        Ok(())
    }

    fn frac(num: f64, den: f64) -> f64 {
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    }

    pub fn failed_pct(&self) -> f64 {
        Self::frac(self.failed_tasks as f64, self.total_tasks as f64)
    }

    pub fn offload_pct(&self) -> f64 {
        Self::frac(self.offloaded_to_mec_tasks as f64, self.total_tasks as f64)
    }

    pub fn failed_length_frac(&self) -> f64 {
        Self::frac(self.failed_length_gi, self.total_length_gi)
    }

    pub fn offloaded_length_frac(&self) -> f64 {
        Self::frac(self.offloaded_length_gi, self.total_length_gi)
    }

    pub fn executed_total(&self) -> u64 {
        self.executed_local + self.executed_v2v + self.executed_edge + self.executed_cloud
    }
}

/// Names of the aggregated metrics, in output order.
pub const METRICS: [&str; 8] = [
    "failed_pct",
    "failed_length_gi",
    "failed_length_frac",
    "offload_pct",
    "offloaded_length_gi",
    "offloaded_length_frac",
    "succeeded_length_gi",
    "total_tasks",
];

pub fn metric_value(r: &MetricsReport, metric: &str) -> Option<f64> {
    Some(match metric {
        "failed_pct" => r.failed_pct(),
        "failed_length_gi" => r.failed_length_gi,
        "failed_length_frac" => r.failed_length_frac(),
        "offload_pct" => r.offload_pct(),
        "offloaded_length_gi" => r.offloaded_length_gi,
        "offloaded_length_frac" => r.offloaded_length_frac(),
        "succeeded_length_gi" => r.succeeded_length_gi,
        "total_tasks" => r.total_tasks as f64,
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub strategy: Strategy,
    pub n_vehicles: usize,
    pub metric: &'static str,
    pub mean: f64,
    pub std: f64,
    pub n_reps: usize,
}

/// Mean and sample standard deviation; a single value has std 0.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, libm::sqrt(ss / (n - 1) as f64))
}

/// One row per (strategy, vehicle count, metric), ordered by that key.
pub fn finalize(reports: &[MetricsReport]) -> Vec<AggregateRow> {
    let mut cells: BTreeMap<(Strategy, usize), Vec<&MetricsReport>> = BTreeMap::new();
    for r in reports {
        cells.entry((r.strategy, r.n_vehicles)).or_default().push(r);
    }
    let mut rows = Vec::new();
    for ((strategy, n_vehicles), mut rs) in cells {
        rs.sort_by_key(|r| r.rep);
        for metric in METRICS {
            let xs: Vec<f64> = rs.iter().filter_map(|r| metric_value(r, metric)).collect();
            let (mean, std) = mean_std(&xs);
            rows.push(AggregateRow {
                strategy,
                n_vehicles,
                metric,
                mean,
                std,
                n_reps: xs.len(),
            });
        }
    }
    rows
}

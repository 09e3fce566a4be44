//! Grids of independent runs over strategies, vehicle counts and repetitions.

use std::path::PathBuf;

use rayon::prelude::*;

use pirs_core::{run, MetricsReport, RunError, RunHandle, ScenarioConfig, Strategy};

pub const DEFAULT_VEHICLES: [usize; 5] = [20, 40, 60, 80, 100];
pub const DEFAULT_REPS: u64 = 10;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub vehicle_counts: Vec<usize>,
    pub strategies: Vec<Strategy>,
    pub reps: u64,
    pub master_seed: u64,
    pub out_dir: PathBuf,
}

impl Default for SweepPlan {
    fn default() -> Self {
        Self {
            vehicle_counts: DEFAULT_VEHICLES.to_vec(),
            strategies: Strategy::ALL.to_vec(),
            reps: DEFAULT_REPS,
            master_seed: DEFAULT_SEED,
            out_dir: PathBuf::from("results"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlanError {
    #[error("bad vehicle list {0:?}: expected LO:HI:STEP or N,N,...")]
    VehicleSyntax(String),
    #[error("vehicle counts must be >= 1")]
    ZeroVehicles,
    #[error("at least one strategy is required")]
    NoStrategies,
    #[error("reps must be >= 1")]
    ZeroReps,
    #[error("cannot build thread pool: {0}")]
    Pool(String),
    #[error("{strategy} n={n_vehicles} rep {rep}: {source}")]
    Run {
        strategy: Strategy,
        n_vehicles: usize,
        rep: u64,
        #[source]
        source: RunError,
    },
}

/// Parses `LO:HI:STEP` (inclusive) or a comma-separated list.
pub fn parse_vehicles(s: &str) -> Result<Vec<usize>, PlanError> {
    let bad = || PlanError::VehicleSyntax(s.to_string());
    let counts: Vec<usize> = if s.contains(':') {
        let parts: Vec<usize> = s
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [lo, hi, step] = parts[..] else {
            return Err(bad());
        };
        if step == 0 || lo > hi {
            return Err(bad());
        }
        (lo..=hi).step_by(step).collect()
    } else {
        s.split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if counts.is_empty() {
        return Err(bad());
    }
    if counts.contains(&0) {
        return Err(PlanError::ZeroVehicles);
    }
    Ok(counts)
}

impl SweepPlan {
    pub fn check(&self) -> Result<(), PlanError> {
        if self.vehicle_counts.is_empty() || self.vehicle_counts.contains(&0) {
            return Err(PlanError::ZeroVehicles);
        }
        if self.strategies.is_empty() {
            return Err(PlanError::NoStrategies);
        }
        if self.reps == 0 {
            return Err(PlanError::ZeroReps);
        }
        Ok(())
    }

    /// Every (strategy, vehicle count, rep) cell in output order.
    pub fn cells(&self) -> Vec<(Strategy, usize, u64)> {
        let mut strategies = self.strategies.clone();
        strategies.sort();
        strategies.dedup();
        let mut counts = self.vehicle_counts.clone();
        counts.sort();
        counts.dedup();
        let mut out = Vec::new();
        for &s in &strategies {
            for &n in &counts {
                for rep in 0..self.reps {
                    out.push((s, n, rep));
                }
            }
        }
        out
    }

    /// Runs every cell on `parallel` worker threads. Results come back in
    /// cell order regardless of the thread count.
    pub fn execute(
        &self,
        base: &ScenarioConfig,
        parallel: usize,
    ) -> Result<Vec<MetricsReport>, PlanError> {
        self.check()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallel.max(1))
            .build()
            .map_err(|e| PlanError::Pool(e.to_string()))?;
        let cells = self.cells();
        pool.install(|| {
            cells
                .par_iter()
                .map(|&(strategy, n_vehicles, rep)| {
                    let mut scenario = base.clone();
                    scenario.n_vehicles = n_vehicles;
                    run_one(&scenario, strategy, self.master_seed, rep)
                })
                .collect()
        })
    }
}

pub fn run_one(
    scenario: &ScenarioConfig,
    strategy: Strategy,
    seed: u64,
    rep: u64,
) -> Result<MetricsReport, PlanError> {
    let handle = RunHandle {
        scenario,
        strategy,
        master_seed: seed,
        rep_index: rep,
    };
    run(&handle).map_err(|source| PlanError::Run {
        strategy,
        n_vehicles: scenario.n_vehicles,
        rep,
        source,
    })
}

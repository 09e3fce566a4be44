//! Command-line interface.

use std::io::Write;
use std::path::PathBuf;
use std::thread;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use pirs_core::{default_scenario, finalize, MetricsReport, ScenarioConfig, Strategy};

use crate::config::{load_scenario, to_toml};
use crate::output::write_csvs;
use crate::sweep::{self, parse_vehicles, SweepPlan};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PIRS_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "pirs", version, about = "Vehicular task offloading simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run repetitions of one strategy at one vehicle count.
    Run(RunArgs),
    /// Run every strategy at every vehicle count.
    Sweep(SweepArgs),
    /// Print the default scenario as TOML.
    Defaults,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file (TOML); defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = sweep::DEFAULT_REPS)]
    pub reps: u64,
    #[arg(long, default_value_t = sweep::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, env = OUT_DIR_ENV, default_value = "results")]
    pub out: PathBuf,
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 0)]
    pub parallel: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub strategy: Strategy,
    /// Vehicle count; the scenario's own when omitted.
    #[arg(long)]
    pub vehicles: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// LO:HI:STEP or a comma-separated list.
    #[arg(long, default_value = "20:100:20")]
    pub vehicles: String,
    #[arg(long, value_delimiter = ',', default_value = "ncs,airs,pirs")]
    pub strategies: Vec<Strategy>,
    #[command(flatten)]
    pub common: Common,
}

fn scenario(path: &Option<PathBuf>) -> anyhow::Result<ScenarioConfig> {
    match path {
        Some(p) => Ok(load_scenario(p)?),
        None => Ok(default_scenario()),
    }
}

fn threads(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        thread::available_parallelism().map_or(1, |n| n.get())
    }
}

fn pct(x: f64) -> f64 {
    100.0 * x
}

pub fn run_line(r: &MetricsReport) -> String {
    format!(
        "{} n={} rep={} seed={} tasks={} failed={:.2}% offload={:.2}% local={} v2v={} edge={} cloud={}",
        r.strategy,
        r.n_vehicles,
        r.rep,
        r.seed,
        r.total_tasks,
        pct(r.failed_pct()),
        pct(r.offload_pct()),
        r.executed_local,
        r.executed_v2v,
        r.executed_edge,
        r.executed_cloud,
    )
}

/// Mean of the headline metrics per (strategy, vehicle count).
pub fn summary_table(reports: &[MetricsReport]) -> String {
    let rows = finalize(reports);
    let mut out = format!(
        "{:<8}{:>6}{:>12}{:>14}{:>12}{:>16}\n",
        "strategy", "n", "failed %", "failed GI", "offload %", "offloaded GI"
    );
    for cell in rows.chunk_by(|a, b| (a.strategy, a.n_vehicles) == (b.strategy, b.n_vehicles)) {
        let mean = |m: &str| cell.iter().find(|r| r.metric == m).map_or(0.0, |r| r.mean);
        out.push_str(&format!(
            "{:<8}{:>6}{:>12.2}{:>14.1}{:>12.2}{:>16.1}\n",
            cell[0].strategy.name(),
            cell[0].n_vehicles,
            pct(mean("failed_pct")),
            mean("failed_length_gi"),
            pct(mean("offload_pct")),
            mean("offloaded_length_gi"),
        ));
    }
    out
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let cfg = scenario(&args.common.config)?;
    let plan = SweepPlan {
        vehicle_counts: vec![args.vehicles.unwrap_or(cfg.n_vehicles)],
        strategies: vec![args.strategy],
        reps: args.common.reps,
        master_seed: args.common.seed,
        out_dir: args.common.out.clone(),
    };
    let reports = plan.execute(&cfg, threads(args.common.parallel))?;
    for r in &reports {
        writeln!(out, "{}", run_line(r))?;
    }
    let paths = write_csvs(&plan.out_dir, &reports)?;
    writeln!(
        out,
        "wrote {} and {}",
        paths[0].display(),
        paths[1].display()
    )?;
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let cfg = scenario(&args.common.config)?;
    let plan = SweepPlan {
        vehicle_counts: parse_vehicles(&args.vehicles)?,
        strategies: args.strategies.clone(),
        reps: args.common.reps,
        master_seed: args.common.seed,
        out_dir: args.common.out.clone(),
    };
    let reports = plan.execute(&cfg, threads(args.common.parallel))?;
    write!(out, "{}", summary_table(&reports))?;
    let paths = write_csvs(&plan.out_dir, &reports)?;
    writeln!(
        out,
        "{} runs; wrote {} and {}",
        reports.len(),
        paths[0].display(),
        paths[1].display()
    )?;
    Ok(())
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    match &cli.command {
        Command::Run(a) => cmd_run(a, out).context("run failed"),
        Command::Sweep(a) => cmd_sweep(a, out).context("sweep failed"),
        Command::Defaults => {
            write!(out, "{}", to_toml(&default_scenario()))?;
            Ok(())
        }
    }
}

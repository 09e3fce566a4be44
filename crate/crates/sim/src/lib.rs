//! File formats, sweeps and the command-line front end for `pirs-core`.

pub mod cli;
pub mod config;
pub mod output;
pub mod sweep;

pub use config::{load_scenario, parse_scenario, to_toml, ConfigError};
pub use output::{read_aggregate, write_csvs, AggregateRecord, OutputError};
pub use sweep::{parse_vehicles, PlanError, SweepPlan};

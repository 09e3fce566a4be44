//! Four-tier vehicular task offloading simulator.
//!
//! Tasks generated on vehicles run on the vehicle itself, on a temporary
//! coalition of co-located vehicles (V2V), on the edge server of the current
//! access point, or on a remote cloud. Three V2V policies are modelled:
//! no cooperation ([`Strategy::Ncs`]), helpers giving all their idle capacity
//! ([`Strategy::Airs`]), and helpers giving the share decided by an
//! asymmetric Nash bargain ([`Strategy::Pirs`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and parallel sweeps live in the `pirs-sim` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod compute;
pub mod config;
pub mod engine;
pub mod game;
pub mod metrics;
pub mod mobility;
pub mod netdelay;
pub mod strategy;
pub mod workload;

pub use config::{default_scenario, ScenarioConfig};
pub use engine::{run, run_with, RunError, RunHandle, RunOptions, RunOutput};
pub use metrics::{finalize, AggregateRow, MetricsReport};
pub use strategy::Strategy;

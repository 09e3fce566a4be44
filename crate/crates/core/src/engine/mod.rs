//! Discrete-event kernel: event queue, random substreams and the run loop.

pub mod queue;
pub mod rng;
mod run;

pub use run::{run, run_with, EventKind, RunError, RunHandle, RunOptions, RunOutput, RunStats};

//! Scenario registry, sweep runner, and result emission for the epikit
//! toolkit.

// `!(x >= 0.0)` is the intended guard: it also rejects NaN values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod config;
pub mod emit;
pub mod scenarios;

pub use config::{OutputFormat, ScenarioConfig};
pub use emit::{to_csv, to_json, write_output, SweepResult};
pub use scenarios::{find, registry, resolve, run_scenario};

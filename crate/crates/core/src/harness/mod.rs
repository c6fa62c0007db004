//! Configuration, seeded sweeps, reports and task dispatch behind the
//! `fbstokes` binary.

pub mod config;
pub mod report;
pub mod sweep;
pub mod tasks;

pub use config::{ConfigError, Format, RunConfig, TaskConfig};
pub use report::{Provenance, Record, Schema, Summary, VerificationReport};
pub use sweep::{par_map, sweep, Execution};
pub use tasks::run;

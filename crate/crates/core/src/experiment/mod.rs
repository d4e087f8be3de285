//! Reproducible experiment runs: configuration, dispatch and reports.
//!
//! A run is fully determined by its [`ExperimentConfig`]; reports contain no
//! wall-clock data unless `timing` is set, so repeated runs produce identical
//! bytes for any worker count.

mod config;
mod report;
mod run;

pub use config::{parse_angle, parse_mode, ExperimentConfig, OutputFormat, SeedRange, Task};
pub use report::{
    Aggregate, BallResult, CapRow, ConstructResult, IlluminationResult, Report, RunResult, Stats,
    Timing, WitnessResult,
};
pub use run::{emit, exit_code, run};

//! Scenario files, result tables and the `spinerod` command-line driver
//! built on [`spinerod_core`].

pub mod commands;
pub mod format;
pub mod output;

pub use format::{parse_scenario, serialize_scenario, ParseError};
pub use output::ResultRecord;

/// Environment variable naming the output directory.
pub const OUT_DIR_ENV: &str = "SPINEROD_OUT_DIR";

/// Default sweep grid: spine lengths (m).
pub const SWEEP_SPINES: [f64; 7] = [0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30];
/// Default sweep grid: group pressures (Pa).
pub const SWEEP_PRESSURES: [f64; 5] = [50e3, 100e3, 150e3, 200e3, 250e3];
/// Default grid list for the convergence study.
pub const DEFAULT_GRID: [usize; 6] = [100, 200, 400, 800, 1600, 3200];

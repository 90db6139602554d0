//! Verification suites, their reports, and grid export.

mod config;
mod grid;
mod report;
mod suites;

pub use config::{parse_tolerance, OutputFormat, Suite, SuiteConfig, DEFAULT_TOLERANCES};
pub use grid::{emit_grid, write_grid, GridFunction, GridOptions, GridSpec};
pub use report::{CheckReport, Report};
pub use suites::{run_report, run_suite};

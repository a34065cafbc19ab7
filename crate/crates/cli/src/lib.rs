//! Reports, sweeps, trajectory tables and grid validation behind the
//! `qfeedback` binary. Everything here is deterministic: identical inputs
//! give byte-identical output.

pub mod csv;
pub mod report;
pub mod sweep;
pub mod traces;
pub mod validation;

pub use report::{run_report, RunReport};
pub use sweep::{sweep, SweepRow, SweepSpec};
pub use traces::{trajectory_table, TrajectoryRow};
pub use validation::{validate_grid, EngineHook, ValidationGrid, ValidationSummary};

//! Scenario files, subcommands and pinned reproductions on top of
//! `tbl-core`.

pub mod report;
pub mod repro;
pub mod run;
pub mod scenario;
pub mod syntax;

pub use report::Report;
pub use repro::ReproTarget;
pub use run::{run, RunError, RunOptions, Subcommand};
pub use scenario::{parse_scenario, Scenario, ScenarioError};

//! Command-line front end: scenario ingestion, plan emission, delivery
//! simulation, property verification, and figure-data sweeps.
//!
//! All file formats carry rationals as canonical `p/q` strings so exactness
//! survives serialization; CSV outputs add a 15-significant-digit decimal
//! column next to each exact column for plotting tools.

pub mod commands;
pub mod error;
pub mod plan_output;
pub mod random;
pub mod scenario_file;
pub mod sweep;
pub mod verify;

pub use error::CliError;
pub use plan_output::PlanOutput;
pub use scenario_file::{AllocationSpec, ScenarioFile};

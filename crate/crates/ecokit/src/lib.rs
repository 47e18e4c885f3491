//! File formats, reports and the command-line front end for
//! [`ecokit_core`].

pub mod commands;
pub mod format;
pub mod scenario;

pub use commands::{run, Command, RunOptions, Status};
pub use scenario::{load_scenario, parse_scenario, Scenario, ScenarioError};

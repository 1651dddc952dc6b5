//! Experiment orchestration for `hwlab`: configuration, the numerical
//! protocols behind each command, CSV/JSON output and the verification suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;
pub mod table;
pub mod verify;

pub use config::{CommandKind, ExperimentConfig};
pub use error::{CliError, CliResult};

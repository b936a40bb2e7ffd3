//! File formats, configuration and commands of the `asv-gain` tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod model_file;
pub mod report;

pub use config::RunConfig;
pub use error::{CliError, CliResult, ExitKind};

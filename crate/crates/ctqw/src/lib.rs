//! Command-line companion to `ctqw-core`: configuration, file formats,
//! heatmap rendering and parallel ensemble runs.

pub mod config;
pub mod error;
pub mod format;
pub mod parallel;
pub mod render;
pub mod run;

pub use config::{Command, RunConfig};
pub use error::{CliError, Result};
pub use run::run;

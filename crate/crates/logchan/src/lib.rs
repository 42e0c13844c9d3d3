//! Command-line front end for `logchan-core`: run configuration, JSON and
//! CSV emission, and one runner per subcommand.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;

pub use commands::{execute, run, Report};
pub use config::{Format, RunConfig, Subcommand};
pub use error::{CliError, CliResult};

//! Command-line front end: corpus conversion, statistics, splits, training,
//! tagging, merging, scoring and the ensemble pipeline.

pub mod app;
pub mod commands;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod render;

pub use app::{run, Cli};
pub use error::{CliError, CliResult};

//! File formats, configuration and command implementations for the `upset`
//! command-line tool. All algorithmic work is delegated to `upset-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod fsutil;

pub use config::PipelineConfig;
pub use error::{CliError, CliResult};

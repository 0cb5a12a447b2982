//! Library backing the `saccade` command-line tool.
//!
//! The binary in `main.rs` is a thin argument-parsing shell; everything it
//! does lives here so integration tests can drive the same code paths
//! directly.

pub mod commands;
pub mod config;
pub mod error;
pub mod imgio;

pub use config::{RunConfig, TuningArgs};
pub use error::{CliError, Result};

//! CLI error type with stable process exit codes.

use std::fmt;

use saccade::ErrorCategory;

/// Exit-code classes: 2 data, 3 configuration, 4 I/O, 5 file format.
#[derive(Debug)]
pub enum CliError {
    /// The input data cannot be processed (exit 2).
    Data(String),
    /// A tuning parameter or config file entry is unusable (exit 3).
    Config(String),
    /// Reading or writing a file failed (exit 4).
    Io(String),
    /// A file's contents are not in the expected format (exit 5).
    Format(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) => 2,
            CliError::Config(_) => 3,
            CliError::Io(_) => 4,
            CliError::Format(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Data(msg)
            | CliError::Config(msg)
            | CliError::Io(msg)
            | CliError::Format(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<saccade::Error> for CliError {
    fn from(err: saccade::Error) -> Self {
        let msg = err.to_string();
        match err.category() {
            ErrorCategory::Validation | ErrorCategory::Degenerate => CliError::Data(msg),
            ErrorCategory::Config => CliError::Config(msg),
            ErrorCategory::Format => CliError::Format(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<image::ImageError> for CliError {
    fn from(err: image::ImageError) -> Self {
        match err {
            image::ImageError::IoError(io) => CliError::Io(io.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

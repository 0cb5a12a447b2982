//! Error type shared by every stage of the pipeline.

use thiserror::Error;

use crate::raster::FeatureKind;

/// Coarse classification used by callers (e.g. a CLI) that map errors to
/// distinct exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed or out-of-contract input data.
    Validation,
    /// Input is well-formed but carries no usable signal.
    Degenerate,
    /// A parameter or setup value is outside its allowed range.
    Config,
    /// A persisted document failed to parse.
    Format,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("image dimensions {width}x{height} are below the {min}x{min} minimum")]
    ImageTooSmall { width: u32, height: u32, min: u32 },

    #[error("pixel buffer holds {actual} bytes, expected {expected}")]
    BufferSize { expected: usize, actual: usize },

    #[error("value buffer holds {actual} entries, expected {expected}")]
    ValueCount { expected: usize, actual: usize },

    #[error("value at index {index} is {value}, outside [0, 1]")]
    ValueOutOfRange { index: usize, value: f64 },

    #[error("feature map is {actual:?}, expected {expected}")]
    WrongKind {
        expected: &'static str,
        actual: FeatureKind,
    },

    #[error("map dimensions {got_w}x{got_h} do not match {want_w}x{want_h}")]
    DimensionMismatch {
        want_w: u32,
        want_h: u32,
        got_w: u32,
        got_h: u32,
    },

    #[error("expected {expected} feature maps, got {actual}")]
    MapCount { expected: usize, actual: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("co-occurrence diagonal carries no counts; no class structure to recover")]
    EmptyDiagonal,

    #[error("label raster is not a valid segmentation: {reason}")]
    BadLabels { reason: String },

    #[error("{count} regions exceed the 16-bit label export limit of 65536")]
    TooManyRegions { count: usize },

    #[error("mosaic {mosaic_w}x{mosaic_h} cannot contain a {window_w}x{window_h} capture window")]
    MosaicTooSmall {
        mosaic_w: u32,
        mosaic_h: u32,
        window_w: u32,
        window_h: u32,
    },

    #[error("session already ran its {max_steps} allotted steps")]
    StepLimit { max_steps: usize },

    #[error("line {line}: {reason}")]
    Document { line: usize, reason: String },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::EmptyDiagonal => ErrorCategory::Degenerate,
            Error::InvalidParameter { .. } | Error::MosaicTooSmall { .. } => ErrorCategory::Config,
            Error::Document { .. } => ErrorCategory::Format,
            _ => ErrorCategory::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

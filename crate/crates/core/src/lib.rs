//! Attention-driven image analysis.
//!
//! This crate turns RGB images into ranked "look here next" decisions:
//!
//! 1. [`colorspace`] splits a frame into hue, saturation, and intensity
//!    maps.
//! 2. [`edges`] computes directional Sobel edge maps of the intensity
//!    channel.
//! 3. [`segmentation`] finds gray-level classes from the diagonal of a
//!    co-occurrence matrix and labels connected regions.
//! 4. [`saliency`] scores region rarity, fuses all derived maps under
//!    habituating weights into a single interest map, and extracts ranked
//!    interest points.
//! 5. [`pipeline`] chains the stages for one frame and times them.
//! 6. [`session`] drives a simulated pan-tilt camera over a mosaic, fixating
//!    novel points and inhibiting returns to known ones.
//!
//! [`formats`] persists fusion states, interest points, trajectories, and
//! region tables as plain text. Everything is deterministic: identical
//! inputs produce bit-identical outputs.

pub mod colorspace;
pub mod edges;
pub mod error;
pub mod formats;
pub mod pipeline;
pub mod raster;
pub mod saliency;
pub mod segmentation;
pub mod session;

pub use colorspace::rgb_to_hsi;
pub use error::{Error, ErrorCategory, Result};
pub use pipeline::{pipeline, PipelineOutput, PipelineParams, StageTimings, N_FEATURES};
pub use raster::{FeatureKind, FeatureMap, Image, MIN_DIM};
pub use saliency::{FusionState, InterestPoint};
pub use segmentation::{SegmentationMap, SegmentationParams};
pub use session::{
    run_session, session_step, Fixation, PanTiltLimits, PanTiltPose, SessionParams, SessionRun,
    SessionState, SessionStep,
};

//! The full per-frame analysis pipeline: one RGB image in, ten feature maps,
//! a fused interest map, ranked interest points, and an updated fusion state
//! out.

use std::time::{Duration, Instant};

use crate::colorspace::rgb_to_hsi;
use crate::edges::{sobel_edges, Direction};
use crate::error::{Error, Result};
use crate::raster::{FeatureKind, FeatureMap, Image};
use crate::saliency::{
    adapt_weights, extract_interest_points, fuse, uncommon_map, FusionState, InterestPoint,
};
use crate::segmentation::{segment, SegmentationMap, SegmentationParams};

/// Number of feature maps fed into fusion: hue, saturation, intensity, four
/// edge directions, and three rarity maps.
pub const N_FEATURES: usize = 10;

/// Tunables for a single pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineParams {
    pub segmentation: SegmentationParams,
    /// Maximum number of interest points to extract.
    pub k_points: usize,
    /// Exclusion radius between extracted points, in pixels.
    pub suppression_radius: f64,
    /// Minimum interest value for a pixel to become a point.
    pub min_score: f64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            segmentation: SegmentationParams::default(),
            k_points: 5,
            suppression_radius: 16.0,
            min_score: 0.0,
        }
    }
}

/// Wall-clock duration of each pipeline stage.
#[derive(Debug, Clone, Copy, Default)]
pub struct StageTimings {
    pub hsi: Duration,
    pub edges: Duration,
    pub segmentation: Duration,
    pub uncommon: Duration,
    pub fusion: Duration,
    pub extraction: Duration,
    pub total: Duration,
}

impl StageTimings {
    /// Stage names paired with their durations, in execution order.
    pub fn stages(&self) -> [(&'static str, Duration); 6] {
        [
            ("hsi", self.hsi),
            ("edges", self.edges),
            ("segmentation", self.segmentation),
            ("uncommon", self.uncommon),
            ("fusion", self.fusion),
            ("extraction", self.extraction),
        ]
    }
}

/// Everything produced by one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// The ten fused inputs in canonical order: hue, saturation, intensity,
    /// edge0, edge45, edge90, edge135, uncommon_h, uncommon_s, uncommon_i.
    pub feature_maps: Vec<FeatureMap>,
    /// Segmentations of hue, saturation, and intensity, in that order.
    pub segmentations: Vec<SegmentationMap>,
    pub interest: FeatureMap,
    pub points: Vec<InterestPoint>,
    /// Fusion state after this frame's habituation update.
    pub state: FusionState,
    pub timings: StageTimings,
}

/// Runs the complete analysis pipeline on one frame.
///
/// The interest map is fused with the weights carried in by `state`; the
/// habituation update happens afterwards, so the returned state only affects
/// the *next* frame.
pub fn pipeline(
    image: &Image,
    state: &FusionState,
    params: &PipelineParams,
) -> Result<PipelineOutput> {
    if state.n_features() != N_FEATURES {
        return Err(Error::InvalidParameter {
            name: "state",
            reason: format!(
                "fusion state tracks {} features, pipeline produces {N_FEATURES}",
                state.n_features()
            ),
        });
    }

    let t_start = Instant::now();

    let (hue, saturation, intensity) = rgb_to_hsi(image);
    let t_hsi = Instant::now();

    let edge_maps: Vec<FeatureMap> = Direction::ALL
        .iter()
        .map(|&dir| sobel_edges(&intensity, dir))
        .collect::<Result<_>>()?;
    let t_edges = Instant::now();

    let segmentations: Vec<SegmentationMap> = [&hue, &saturation, &intensity]
        .into_iter()
        .map(|map| segment(map, &params.segmentation))
        .collect::<Result<_>>()?;
    let t_segmentation = Instant::now();

    let uncommon_maps: Vec<FeatureMap> = segmentations.iter().map(uncommon_map).collect();
    let t_uncommon = Instant::now();

    let mut feature_maps = Vec::with_capacity(N_FEATURES);
    feature_maps.push(hue);
    feature_maps.push(saturation);
    feature_maps.push(intensity);
    feature_maps.extend(edge_maps);
    feature_maps.extend(uncommon_maps);
    debug_assert!(feature_maps
        .iter()
        .map(FeatureMap::kind)
        .eq(FeatureKind::CANONICAL));

    let interest = fuse(&feature_maps, state)?;
    let next_state = adapt_weights(state, &feature_maps)?;
    let t_fusion = Instant::now();

    let points = extract_interest_points(
        &interest,
        params.k_points,
        params.suppression_radius,
        params.min_score,
    )?;
    let t_extraction = Instant::now();

    let timings = StageTimings {
        hsi: t_hsi - t_start,
        edges: t_edges - t_hsi,
        segmentation: t_segmentation - t_edges,
        uncommon: t_uncommon - t_segmentation,
        fusion: t_fusion - t_uncommon,
        extraction: t_extraction - t_fusion,
        total: t_extraction - t_start,
    };

    Ok(PipelineOutput {
        feature_maps,
        segmentations,
        interest,
        points,
        state: next_state,
        timings,
    })
}

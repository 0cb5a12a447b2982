//! Interest-map construction: rarity scoring of segmented regions, adaptive
//! weighted fusion of derived maps, and greedy interest-point extraction.

use crate::error::{Error, Result};
use crate::raster::{FeatureKind, FeatureMap};
use crate::segmentation::SegmentationMap;

/// Scores every pixel by the rarity of the region it belongs to.
///
/// With region areas A in [A_min, A_max], a pixel in a region of area A gets
/// `(ln A_max - ln A) / (ln A_max - ln A_min)`: the smallest region scores
/// 1, the largest 0, and the score falls logarithmically with area. When all
/// regions share one area (including a single-region map) the map is all
/// zeros. The output kind is the `Uncommon*` counterpart of the
/// segmentation's source channel.
pub fn uncommon_map(seg: &SegmentationMap) -> FeatureMap {
    let kind = match seg.source() {
        FeatureKind::Hue => FeatureKind::UncommonH,
        FeatureKind::Saturation => FeatureKind::UncommonS,
        FeatureKind::Intensity => FeatureKind::UncommonI,
        // SegmentationMap construction only admits the three channels above.
        other => unreachable!("segmentation source {other:?}"),
    };

    let areas: Vec<usize> = seg.regions().iter().map(|r| r.area).collect();
    let a_min = *areas.iter().min().expect("a segmentation has regions");
    let a_max = *areas.iter().max().expect("a segmentation has regions");

    let score_of: Vec<f64> = if a_min == a_max {
        vec![0.0; areas.len()]
    } else {
        let ln_max = (a_max as f64).ln();
        let denom = ln_max - (a_min as f64).ln();
        areas
            .iter()
            .map(|&a| ((ln_max - (a as f64).ln()) / denom).clamp(0.0, 1.0))
            .collect()
    };

    let values = seg
        .labels()
        .iter()
        .map(|&label| score_of[label as usize])
        .collect();
    FeatureMap::from_parts(seg.width(), seg.height(), kind, values)
}

/// Weights and activation history of the adaptive fusion stage.
///
/// Weights are strictly positive and sum to 1 (within 1e-9). Each feature's
/// exponentially weighted mean activation is tracked across frames; features
/// that stay loud are progressively down-weighted, so quiet channels keep
/// their say in the fused map.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionState {
    weights: Vec<f64>,
    mean_activation_ema: Vec<f64>,
    eta: f64,
    epsilon: f64,
    frames_processed: u64,
}

impl FusionState {
    pub const DEFAULT_ETA: f64 = 0.1;
    pub const DEFAULT_EPSILON: f64 = 0.01;

    /// Fresh state with uniform weights and no history.
    pub fn new(n_features: usize) -> Result<Self> {
        Self::with_rates(n_features, Self::DEFAULT_ETA, Self::DEFAULT_EPSILON)
    }

    /// Fresh state with explicit habituation rate and weight floor.
    pub fn with_rates(n_features: usize, eta: f64, epsilon: f64) -> Result<Self> {
        if n_features == 0 {
            return Err(Error::InvalidParameter {
                name: "n_features",
                reason: "must be at least 1".into(),
            });
        }
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: format!("{eta} is outside (0, 1]"),
            });
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("{epsilon} is not a positive finite value"),
            });
        }
        Ok(Self {
            weights: vec![1.0 / n_features as f64; n_features],
            mean_activation_ema: vec![0.0; n_features],
            eta,
            epsilon,
            frames_processed: 0,
        })
    }

    /// Reassembles a state from persisted values, revalidating every
    /// invariant.
    pub fn from_parts(
        weights: Vec<f64>,
        mean_activation_ema: Vec<f64>,
        eta: f64,
        epsilon: f64,
        frames_processed: u64,
    ) -> Result<Self> {
        let template = Self::with_rates(weights.len().max(1), eta, epsilon)?;
        if weights.is_empty() || weights.len() != mean_activation_ema.len() {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "weights and activation history must have equal nonzero length".into(),
            });
        }
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "all weights must be positive and finite".into(),
            });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: format!("weights sum to {sum}, not 1"),
            });
        }
        if mean_activation_ema
            .iter()
            .any(|&m| !(0.0..=1.0).contains(&m))
        {
            return Err(Error::InvalidParameter {
                name: "mean_activation_ema",
                reason: "activation history values must lie in [0, 1]".into(),
            });
        }
        Ok(Self {
            weights,
            mean_activation_ema,
            eta: template.eta,
            epsilon: template.epsilon,
            frames_processed,
        })
    }

    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mean_activation_ema(&self) -> &[f64] {
        &self.mean_activation_ema
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn frames_processed(&self) -> u64 {
        self.frames_processed
    }
}

/// Fuses co-registered feature maps into a single interest map using the
/// state's current weights.
///
/// Each output pixel is the weighted sum of the input pixels. Because the
/// weights are a convex combination, the output is bounded pointwise by the
/// per-pixel minimum and maximum of the inputs. The fused map is *not*
/// renormalized by its maximum: absolute interest levels stay comparable
/// across frames, and any display scaling happens at export time.
pub fn fuse(maps: &[FeatureMap], state: &FusionState) -> Result<FeatureMap> {
    if maps.len() != state.n_features() {
        return Err(Error::MapCount {
            expected: state.n_features(),
            actual: maps.len(),
        });
    }
    let first = &maps[0];
    for map in &maps[1..] {
        if !map.same_dims(first) {
            return Err(Error::DimensionMismatch {
                want_w: first.width(),
                want_h: first.height(),
                got_w: map.width(),
                got_h: map.height(),
            });
        }
    }

    let n = first.values().len();
    let mut out = vec![0.0; n];
    for (map, &weight) in maps.iter().zip(state.weights()) {
        for (acc, &v) in out.iter_mut().zip(map.values()) {
            *acc += weight * v;
        }
    }
    for v in &mut out {
        *v = v.clamp(0.0, 1.0);
    }

    Ok(FeatureMap::from_parts(
        first.width(),
        first.height(),
        FeatureKind::Interest,
        out,
    ))
}

/// Habituation update: folds each map's mean activation into the state's
/// running average and refreshes the weights.
///
/// With habituation rate eta and floor epsilon,
///
/// ```text
/// m_i <- (1 - eta) * m_i + eta * mean(F_i)
/// w_i =  (1 / (epsilon + m_i)) / sum_j (1 / (epsilon + m_j))
/// ```
///
/// A new state is returned; the input state is left untouched. For a
/// constant input stream with mean mu starting from fresh state, the
/// recurrence has the closed form `m(t) = mu * (1 - (1 - eta)^t)`.
pub fn adapt_weights(state: &FusionState, maps: &[FeatureMap]) -> Result<FusionState> {
    if maps.len() != state.n_features() {
        return Err(Error::MapCount {
            expected: state.n_features(),
            actual: maps.len(),
        });
    }

    let mean_activation_ema: Vec<f64> = state
        .mean_activation_ema
        .iter()
        .zip(maps)
        .map(|(&m, map)| ((1.0 - state.eta) * m + state.eta * map.mean()).clamp(0.0, 1.0))
        .collect();

    let responses: Vec<f64> = mean_activation_ema
        .iter()
        .map(|&m| 1.0 / (state.epsilon + m))
        .collect();
    let total: f64 = responses.iter().sum();
    let weights = responses.iter().map(|&r| r / total).collect();

    Ok(FusionState {
        weights,
        mean_activation_ema,
        eta: state.eta,
        epsilon: state.epsilon,
        frames_processed: state.frames_processed + 1,
    })
}

/// A ranked interest point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterestPoint {
    pub x: u32,
    pub y: u32,
    pub score: f64,
    pub rank: u32,
}

/// Greedy non-maximum extraction of up to `k` interest points.
///
/// Points are taken in order of score (ties: smaller y, then smaller x);
/// each accepted point suppresses every pixel within Euclidean distance
/// `radius` of it, inclusive, so returned points are pairwise farther than
/// `radius` apart. Extraction stops early when no remaining pixel reaches
/// `min_score`.
pub fn extract_interest_points(
    interest: &FeatureMap,
    k: usize,
    radius: f64,
    min_score: f64,
) -> Result<Vec<InterestPoint>> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "must be at least 1".into(),
        });
    }
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "radius",
            reason: format!("{radius} is not a non-negative finite value"),
        });
    }
    if !min_score.is_finite() {
        return Err(Error::InvalidParameter {
            name: "min_score",
            reason: "must be finite".into(),
        });
    }

    let w = interest.width();
    let mut candidates: Vec<(f64, u32, u32)> = interest
        .values()
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v >= min_score)
        .map(|(idx, &v)| (v, idx as u32 / w, idx as u32 % w))
        .collect();
    // Highest score first; ties resolved toward smaller y, then smaller x.
    candidates.sort_unstable_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let radius_sq = radius * radius;
    let mut points: Vec<InterestPoint> = Vec::with_capacity(k);
    for (score, y, x) in candidates {
        if points.len() == k {
            break;
        }
        let clear = points.iter().all(|p| {
            let dx = f64::from(p.x) - f64::from(x);
            let dy = f64::from(p.y) - f64::from(y);
            dx * dx + dy * dy > radius_sq
        });
        if clear {
            points.push(InterestPoint {
                x,
                y,
                score,
                rank: points.len() as u32,
            });
        }
    }
    Ok(points)
}

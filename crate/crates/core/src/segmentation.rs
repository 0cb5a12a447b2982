//! Co-occurrence driven segmentation of single-channel maps.
//!
//! The segmenter quantizes a channel to `q_levels` gray levels, accumulates a
//! symmetric two-point co-occurrence matrix over a set of pixel offsets, reads
//! homogeneous-value classes off the peaks of the matrix diagonal, labels
//! 4-connected components of equal class, and merges undersized components
//! into the neighbor they share the longest boundary with.
//!
//! Hue is quantized on a linear axis like any other channel: the circular
//! wrap between hue values near 1.0 and near 0.0 is deliberately ignored, so
//! a scene straddling the wrap may split into two classes. This keeps the
//! class model identical across channels and is accepted as a known limit.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::raster::{FeatureKind, FeatureMap};

/// Maps a value in [0, 1] to its quantization level in `0..q_levels`
/// (round-to-nearest).
pub fn quantize(value: f64, q_levels: usize) -> usize {
    let level = (value * (q_levels - 1) as f64 + 0.5).floor() as usize;
    level.min(q_levels - 1)
}

/// Symmetric two-point co-occurrence counts over quantized values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceMatrix {
    q_levels: usize,
    counts: Vec<u64>,
    offsets: Vec<(i32, i32)>,
    total: u64,
}

impl CooccurrenceMatrix {
    pub fn q_levels(&self) -> usize {
        self.q_levels
    }

    /// Count accumulated for the ordered level pair (a, b).
    pub fn count(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.q_levels + b]
    }

    pub fn offsets(&self) -> &[(i32, i32)] {
        &self.offsets
    }

    /// Sum of all counts; twice the number of in-bounds pixel pairs.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// The diagonal profile `counts[k][k]`, the same-level pair counts the
    /// class analysis works on.
    pub fn diagonal(&self) -> Vec<u64> {
        (0..self.q_levels).map(|k| self.count(k, k)).collect()
    }
}

/// Accumulates the co-occurrence matrix of `channel` at the given offsets.
///
/// Every pixel pair (p, p + offset) with both ends in bounds contributes one
/// count in each order, so the matrix is symmetric by construction and
/// `total` is twice the number of in-bounds pairs.
pub fn cooccurrence(
    channel: &FeatureMap,
    q_levels: usize,
    offsets: &[(i32, i32)],
) -> Result<CooccurrenceMatrix> {
    if q_levels < 2 {
        return Err(Error::InvalidParameter {
            name: "q_levels",
            reason: format!("{q_levels} is below the minimum of 2"),
        });
    }
    if offsets.is_empty() {
        return Err(Error::InvalidParameter {
            name: "offsets",
            reason: "at least one offset is required".into(),
        });
    }
    if offsets.contains(&(0, 0)) {
        return Err(Error::InvalidParameter {
            name: "offsets",
            reason: "the (0, 0) offset pairs a pixel with itself".into(),
        });
    }

    let (w, h) = (channel.width() as i64, channel.height() as i64);
    let levels: Vec<usize> = channel
        .values()
        .iter()
        .map(|&v| quantize(v, q_levels))
        .collect();

    let mut counts = vec![0u64; q_levels * q_levels];
    let mut total = 0u64;
    for &(dx, dy) in offsets {
        for y in 0..h {
            let ny = y + i64::from(dy);
            if ny < 0 || ny >= h {
                continue;
            }
            for x in 0..w {
                let nx = x + i64::from(dx);
                if nx < 0 || nx >= w {
                    continue;
                }
                let a = levels[(y * w + x) as usize];
                let b = levels[(ny * w + nx) as usize];
                counts[a * q_levels + b] += 1;
                counts[b * q_levels + a] += 1;
                total += 2;
            }
        }
    }

    Ok(CooccurrenceMatrix {
        q_levels,
        counts,
        offsets: offsets.to_vec(),
        total,
    })
}

/// A half-open interval `[lo, hi)` of quantization levels forming one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelInterval {
    pub lo: usize,
    pub hi: usize,
}

impl LevelInterval {
    pub fn contains(&self, level: usize) -> bool {
        self.lo <= level && level < self.hi
    }
}

/// Derives class intervals from the diagonal of a co-occurrence matrix.
///
/// The diagonal is smoothed with a 3-bin moving average (edge bins average
/// the bins actually in range). Local maxima of the smoothed profile at or
/// above `peak_frac` times its global maximum become peak candidates;
/// candidates closer together than `min_separation` are resolved in favor of
/// the larger peak, then the smaller level. Class boundaries sit at the
/// first minimum of the smoothed profile strictly between consecutive
/// surviving peaks, and the intervals jointly cover `0..q_levels`.
///
/// A diagonal with no counts at all carries no class structure and is
/// reported as a degenerate input.
pub fn class_boundaries(
    matrix: &CooccurrenceMatrix,
    peak_frac: f64,
    min_separation: usize,
) -> Result<Vec<LevelInterval>> {
    if !(peak_frac > 0.0 && peak_frac < 1.0) {
        return Err(Error::InvalidParameter {
            name: "peak_frac",
            reason: format!("{peak_frac} is outside (0, 1)"),
        });
    }
    if min_separation < 1 {
        return Err(Error::InvalidParameter {
            name: "min_separation",
            reason: "must be at least 1".into(),
        });
    }

    let diag = matrix.diagonal();
    if diag.iter().all(|&c| c == 0) {
        return Err(Error::EmptyDiagonal);
    }

    let q = matrix.q_levels();
    let smoothed: Vec<f64> = (0..q)
        .map(|k| {
            let lo = k.saturating_sub(1);
            let hi = (k + 1).min(q - 1);
            let sum: u64 = diag[lo..=hi].iter().sum();
            sum as f64 / (hi - lo + 1) as f64
        })
        .collect();

    let peak_floor = peak_frac * smoothed.iter().copied().fold(0.0, f64::max);
    let mut candidates: Vec<usize> = (0..q)
        .filter(|&k| {
            let v = smoothed[k];
            v > 0.0
                && v >= peak_floor
                && (k == 0 || v >= smoothed[k - 1])
                && (k == q - 1 || v >= smoothed[k + 1])
        })
        .collect();

    // Greedy separation filter: larger peaks claim their neighborhood first,
    // smaller level wins among equals.
    candidates.sort_by(|&a, &b| {
        smoothed[b]
            .partial_cmp(&smoothed[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut peaks: Vec<usize> = Vec::new();
    for k in candidates {
        if peaks.iter().all(|&p| p.abs_diff(k) >= min_separation) {
            peaks.push(k);
        }
    }
    peaks.sort_unstable();

    if peaks.len() <= 1 {
        return Ok(vec![LevelInterval { lo: 0, hi: q }]);
    }

    let mut cuts = vec![0];
    for pair in peaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let cut = (a + 1..b)
            .min_by(|&i, &j| {
                smoothed[i]
                    .partial_cmp(&smoothed[j])
                    .unwrap()
                    .then(i.cmp(&j))
            })
            .unwrap_or(b);
        cuts.push(cut);
    }
    cuts.push(q);

    Ok(cuts
        .windows(2)
        .map(|pair| LevelInterval {
            lo: pair[0],
            hi: pair[1],
        })
        .collect())
}

/// One labeled region: the class it belongs to and its pixel count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub class_id: usize,
    pub area: usize,
}

/// A dense region labeling of a channel.
///
/// Labels run `0..regions.len()` in raster order of first occurrence, every
/// label names a 4-connected set of pixels, and all pixels of a region share
/// the region's class.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationMap {
    width: u32,
    height: u32,
    source: FeatureKind,
    labels: Vec<u32>,
    regions: Vec<Region>,
    class_bounds: Vec<LevelInterval>,
}

impl SegmentationMap {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// The channel this segmentation was computed from.
    pub fn source(&self) -> FeatureKind {
        self.source
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, x: u32, y: u32) -> u32 {
        self.labels[y as usize * self.width as usize + x as usize]
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// The quantization-level intervals defining each class.
    pub fn class_bounds(&self) -> &[LevelInterval] {
        &self.class_bounds
    }

    /// Builds a segmentation from an existing label raster, deriving the
    /// region table. All regions are assigned class 0 with a single covering
    /// class interval; the labels must already be dense, in raster order of
    /// first occurrence, and 4-connected.
    pub fn from_labels(
        width: u32,
        height: u32,
        source: FeatureKind,
        labels: Vec<u32>,
    ) -> Result<Self> {
        if !matches!(
            source,
            FeatureKind::Hue | FeatureKind::Saturation | FeatureKind::Intensity
        ) {
            return Err(Error::WrongKind {
                expected: "Hue, Saturation, or Intensity",
                actual: source,
            });
        }
        let n = width as usize * height as usize;
        if n == 0 || labels.len() != n {
            return Err(Error::ValueCount {
                expected: n,
                actual: labels.len(),
            });
        }

        let mut next = 0u32;
        let mut areas: Vec<usize> = Vec::new();
        for &label in &labels {
            if label == next {
                areas.push(0);
                next += 1;
            } else if label > next {
                return Err(Error::BadLabels {
                    reason: format!(
                        "label {label} appears before {next}; labels must be dense in raster order"
                    ),
                });
            }
            areas[label as usize] += 1;
        }

        // Every label must name a single 4-connected component.
        let components = label_components(width as usize, height as usize, &labels);
        if components.1 != areas.len() {
            return Err(Error::BadLabels {
                reason: format!(
                    "{} labels cover {} connected components",
                    areas.len(),
                    components.1
                ),
            });
        }

        let regions = areas
            .into_iter()
            .map(|area| Region { class_id: 0, area })
            .collect();
        Ok(Self {
            width,
            height,
            source,
            labels,
            regions,
            class_bounds: vec![LevelInterval { lo: 0, hi: 1 }],
        })
    }
}

/// Parameters of the segmentation stage.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationParams {
    /// Number of quantization levels.
    pub q_levels: usize,
    /// Pixel offsets the co-occurrence matrix is accumulated over.
    pub offsets: Vec<(i32, i32)>,
    /// Fraction of the largest smoothed diagonal value a peak must reach.
    pub peak_frac: f64,
    /// Minimum level distance between surviving peaks.
    pub min_separation: usize,
    /// Components smaller than this are merged into a neighbor.
    pub min_region_area: usize,
}

impl Default for SegmentationParams {
    fn default() -> Self {
        Self {
            q_levels: 64,
            offsets: vec![(1, 0), (0, 1)],
            peak_frac: 0.05,
            min_separation: 4,
            min_region_area: 16,
        }
    }
}

/// Segments a hue, saturation, or intensity channel.
///
/// Pixels are classified by the class interval their quantized level falls
/// in, 4-connected components of equal class become regions, and every
/// component smaller than `min_region_area` is merged into the neighboring
/// region it shares the longest boundary with (ties favor the smaller
/// label; the smallest undersized component is resolved first). The final
/// labeling is dense in raster order of first occurrence. After merging, no
/// region is smaller than `min_region_area` unless the whole image collapsed
/// to a single region.
pub fn segment(channel: &FeatureMap, params: &SegmentationParams) -> Result<SegmentationMap> {
    if !matches!(
        channel.kind(),
        FeatureKind::Hue | FeatureKind::Saturation | FeatureKind::Intensity
    ) {
        return Err(Error::WrongKind {
            expected: "Hue, Saturation, or Intensity",
            actual: channel.kind(),
        });
    }
    if params.min_region_area < 1 {
        return Err(Error::InvalidParameter {
            name: "min_region_area",
            reason: "must be at least 1".into(),
        });
    }

    let matrix = cooccurrence(channel, params.q_levels, &params.offsets)?;
    let bounds = class_boundaries(&matrix, params.peak_frac, params.min_separation)?;

    // Level -> class lookup; the intervals tile 0..q_levels.
    let mut class_of_level = vec![0usize; params.q_levels];
    for (class_id, interval) in bounds.iter().enumerate() {
        class_of_level[interval.lo..interval.hi].fill(class_id);
    }

    let (w, h) = (channel.width() as usize, channel.height() as usize);
    let classes: Vec<u32> = channel
        .values()
        .iter()
        .map(|&v| class_of_level[quantize(v, params.q_levels)] as u32)
        .collect();

    let (labels, n_components) = label_components(w, h, &classes);
    let component_class: Vec<usize> = {
        let mut class_of = vec![0usize; n_components];
        for (idx, &label) in labels.iter().enumerate() {
            class_of[label as usize] = classes[idx] as usize;
        }
        class_of
    };

    let (labels, regions) =
        merge_small_components(w, h, labels, component_class, params.min_region_area);

    Ok(SegmentationMap {
        width: channel.width(),
        height: channel.height(),
        source: channel.kind(),
        labels,
        regions,
        class_bounds: bounds,
    })
}

/// Flood-fill labeling of 4-connected components of equal value; labels are
/// dense and assigned in raster order of first occurrence.
fn label_components(w: usize, h: usize, values: &[u32]) -> (Vec<u32>, usize) {
    const UNSET: u32 = u32::MAX;
    let mut labels = vec![UNSET; w * h];
    let mut next = 0u32;
    let mut stack = Vec::new();

    for start in 0..w * h {
        if labels[start] != UNSET {
            continue;
        }
        labels[start] = next;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (x, y) = (idx % w, idx / w);
            let mut visit = |n: usize| {
                if labels[n] == UNSET && values[n] == values[idx] {
                    labels[n] = next;
                    stack.push(n);
                }
            };
            if x > 0 {
                visit(idx - 1);
            }
            if x + 1 < w {
                visit(idx + 1);
            }
            if y > 0 {
                visit(idx - w);
            }
            if y + 1 < h {
                visit(idx + w);
            }
        }
        next += 1;
    }
    (labels, next as usize)
}

/// Merges every component smaller than `min_area` into the neighbor sharing
/// the longest boundary, then relabels densely in raster order.
///
/// Components are resolved smallest first (ties on the provisional label);
/// boundary-length ties pick the smaller neighbor label. Merging stops early
/// only when a single region is left.
fn merge_small_components(
    w: usize,
    h: usize,
    labels: Vec<u32>,
    component_class: Vec<usize>,
    min_area: usize,
) -> (Vec<u32>, Vec<Region>) {
    let n = component_class.len();

    let mut areas = vec![0usize; n];
    for &label in &labels {
        areas[label as usize] += 1;
    }

    // Region adjacency with shared-boundary lengths, kept symmetric.
    let mut adjacency: Vec<HashMap<u32, u64>> = vec![HashMap::new(); n];
    let note_pair = |adjacency: &mut Vec<HashMap<u32, u64>>, a: u32, b: u32| {
        if a != b {
            *adjacency[a as usize].entry(b).or_insert(0) += 1;
            *adjacency[b as usize].entry(a).or_insert(0) += 1;
        }
    };
    for y in 0..h {
        for x in 0..w {
            let idx = y * w + x;
            if x + 1 < w {
                note_pair(&mut adjacency, labels[idx], labels[idx + 1]);
            }
            if y + 1 < h {
                note_pair(&mut adjacency, labels[idx], labels[idx + w]);
            }
        }
    }

    let mut active = vec![true; n];
    let mut active_count = n;
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let mut class = component_class;

    // Min-heap on (area, label); stale entries are skipped when their area
    // no longer matches.
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = (0..n)
        .map(|label| Reverse((areas[label], label as u32)))
        .collect();

    while active_count > 1 {
        let Some(Reverse((area, label))) = heap.pop() else {
            break;
        };
        let label_idx = label as usize;
        if !active[label_idx] || areas[label_idx] != area {
            continue;
        }
        if area >= min_area {
            break;
        }

        // Longest shared boundary wins; equal boundaries go to the smaller
        // label. The comparator is total, so the HashMap iteration order
        // cannot influence the outcome.
        let target = adjacency[label_idx]
            .iter()
            .max_by(|(la, ba), (lb, bb)| ba.cmp(bb).then(lb.cmp(la)))
            .map(|(&l, _)| l)
            .expect("an undersized region in a multi-region image has a neighbor");
        let target_idx = target as usize;

        areas[target_idx] += areas[label_idx];
        class[label_idx] = class[target_idx];
        active[label_idx] = false;
        active_count -= 1;
        parent[label_idx] = target;

        let neighbors = std::mem::take(&mut adjacency[label_idx]);
        for (other, length) in neighbors {
            if other == target {
                adjacency[target_idx].remove(&label);
                continue;
            }
            *adjacency[target_idx].entry(other).or_insert(0) += length;
            let other_map = &mut adjacency[other as usize];
            other_map.remove(&label);
            *other_map.entry(target).or_insert(0) += length;
        }

        heap.push(Reverse((areas[target_idx], target)));
    }

    // Resolve merge chains, then relabel densely in raster order.
    let resolve = |parent: &[u32], mut label: u32| -> u32 {
        while parent[label as usize] != label {
            label = parent[label as usize];
        }
        label
    };
    let mut dense: Vec<Option<u32>> = vec![None; n];
    let mut regions: Vec<Region> = Vec::new();
    let mut out = Vec::with_capacity(labels.len());
    for &raw in &labels {
        let root = resolve(&parent, raw);
        let id = *dense[root as usize].get_or_insert_with(|| {
            regions.push(Region {
                class_id: class[root as usize],
                area: areas[root as usize],
            });
            regions.len() as u32 - 1
        });
        out.push(id);
    }

    (out, regions)
}

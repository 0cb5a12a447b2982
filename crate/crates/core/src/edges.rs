//! Directional edge maps from 3x3 Sobel-style kernels.
//!
//! Four fixed kernels respond to edges at 0, 45, 90, and 135 degrees. Each
//! output pixel is the absolute kernel response divided by 4 (the kernels'
//! positive-coefficient sum), which keeps responses to inputs in [0, 1] inside
//! [0, 1]. Out-of-bounds neighborhood samples replicate the nearest border
//! pixel, so constant inputs produce exactly zero everywhere.

use crate::error::{Error, Result};
use crate::raster::{FeatureKind, FeatureMap, MIN_DIM};

/// Edge orientation selector; the angle names the direction of the edge the
/// kernel responds to most strongly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    D0,
    D45,
    D90,
    D135,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::D0,
        Direction::D45,
        Direction::D90,
        Direction::D135,
    ];

    /// 3x3 coefficient grid, indexed `[row][column]`.
    pub fn kernel(self) -> [[f64; 3]; 3] {
        match self {
            Direction::D0 => [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]],
            Direction::D90 => [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]],
            Direction::D45 => [[0.0, 1.0, 2.0], [-1.0, 0.0, 1.0], [-2.0, -1.0, 0.0]],
            Direction::D135 => [[-2.0, -1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, 1.0, 2.0]],
        }
    }

    /// The feature-map identity of this direction's output.
    pub fn kind(self) -> FeatureKind {
        match self {
            Direction::D0 => FeatureKind::Edge0,
            Direction::D45 => FeatureKind::Edge45,
            Direction::D90 => FeatureKind::Edge90,
            Direction::D135 => FeatureKind::Edge135,
        }
    }
}

/// Computes one directional edge map from an intensity channel.
///
/// The input must be an `Intensity` map at least 3x3; anything else is an
/// input-validation error.
pub fn sobel_edges(intensity: &FeatureMap, direction: Direction) -> Result<FeatureMap> {
    if intensity.kind() != FeatureKind::Intensity {
        return Err(Error::WrongKind {
            expected: "Intensity",
            actual: intensity.kind(),
        });
    }
    let (w, h) = (intensity.width(), intensity.height());
    if w < MIN_DIM || h < MIN_DIM {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            min: MIN_DIM,
        });
    }

    let kernel = direction.kernel();
    let values = intensity.values();
    let (wi, hi) = (w as i64, h as i64);
    let mut out = Vec::with_capacity(values.len());

    // Replicate-border sampling.
    let sample = |x: i64, y: i64| {
        let sx = x.clamp(0, wi - 1) as usize;
        let sy = y.clamp(0, hi - 1) as usize;
        values[sy * w as usize + sx]
    };

    for y in 0..hi {
        for x in 0..wi {
            // Every kernel flips sign under a half turn and has a zero
            // center, so the response is a sum over four opposing sample
            // pairs. Differencing each pair before scaling makes flat
            // neighborhoods cancel exactly, not just approximately.
            let mut acc = 0.0;
            for (j, i) in [(0, 0), (0, 1), (0, 2), (1, 0)] {
                let coeff = kernel[j][i];
                if coeff == 0.0 {
                    continue;
                }
                let lead = sample(x + i as i64 - 1, y + j as i64 - 1);
                let opposite = sample(x + 1 - i as i64, y + 1 - j as i64);
                acc += coeff * (lead - opposite);
            }
            out.push((acc.abs() / 4.0).min(1.0));
        }
    }

    Ok(FeatureMap::from_parts(w, h, direction.kind(), out))
}

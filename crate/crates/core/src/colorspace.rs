//! RGB to hue / saturation / intensity decomposition.
//!
//! Uses the trigonometric (arccos) form of the conversion. Hue is reported on
//! [0, 1] (a full turn normalized by 2*pi); achromatic pixels, where the hue
//! angle is undefined, are assigned hue 0 by convention. Saturation of a pure
//! black pixel is likewise defined as 0.

use std::f64::consts::TAU;

use crate::raster::{FeatureKind, FeatureMap, Image};

/// Splits a frame into its hue, saturation, and intensity channels.
///
/// For channel values (R, G, B) in [0, 1]:
///
/// * intensity  I = (R + G + B) / 3
/// * saturation S = 1 - 3 * min(R, G, B) / (R + G + B), with S = 0 when the sum is 0
/// * hue        H = theta / 2pi if B <= G, else (2pi - theta) / 2pi, where
///   theta = arccos( ((R-G) + (R-B)) / 2 / sqrt((R-G)^2 + (R-B)(G-B)) ),
///   with H = 0 when the denominator vanishes (R = G = B)
///
/// Intensity and saturation depend only on the multiset of channel values, so
/// they are invariant under any permutation of (R, G, B); the sums below are
/// evaluated in sorted channel order to make that hold exactly in floating
/// point, not just mathematically.
pub fn rgb_to_hsi(image: &Image) -> (FeatureMap, FeatureMap, FeatureMap) {
    let (w, h) = (image.width(), image.height());
    let n = w as usize * h as usize;
    let mut hue = Vec::with_capacity(n);
    let mut sat = Vec::with_capacity(n);
    let mut int = Vec::with_capacity(n);

    for y in 0..h {
        for x in 0..w {
            let (r, g, b) = image.rgb(x, y);

            // Order-independent min and sum.
            let mut sorted = [r, g, b];
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mn = sorted[0];
            let sum = sorted[0] + sorted[1] + sorted[2];

            int.push(sum / 3.0);
            sat.push(if sum > 0.0 {
                (1.0 - 3.0 * mn / sum).clamp(0.0, 1.0)
            } else {
                0.0
            });

            // den_sq = (a + b/2)^2 + 3b^2/4 with a = R-G, b = G-B, so it is
            // non-negative and vanishes exactly when R = G = B.
            let num = 0.5 * ((r - g) + (r - b));
            let den_sq = (r - g) * (r - g) + (r - b) * (g - b);
            hue.push(if den_sq <= 0.0 {
                0.0
            } else {
                let theta = (num / den_sq.sqrt()).clamp(-1.0, 1.0).acos();
                let angle = if b <= g { theta } else { TAU - theta };
                angle / TAU
            });
        }
    }

    (
        FeatureMap::from_parts(w, h, FeatureKind::Hue, hue),
        FeatureMap::from_parts(w, h, FeatureKind::Saturation, sat),
        FeatureMap::from_parts(w, h, FeatureKind::Intensity, int),
    )
}

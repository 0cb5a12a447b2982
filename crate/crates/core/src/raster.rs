//! Raster containers shared by every stage: 8-bit RGB input frames and
//! single-channel floating-point feature maps.

use crate::error::{Error, Result};

/// Smallest width or height any frame may have; the edge stage needs a full
/// 3x3 neighborhood.
pub const MIN_DIM: u32 = 3;

/// Identity of a derived channel.
///
/// The first ten variants, in [`FeatureKind::CANONICAL`] order, are the fixed
/// inventory the fusion stage consumes. `Interest` names the fused output
/// itself and never appears among fusion inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    Hue,
    Saturation,
    Intensity,
    Edge0,
    Edge45,
    Edge90,
    Edge135,
    UncommonH,
    UncommonS,
    UncommonI,
    Interest,
}

impl FeatureKind {
    /// The fixed order in which derived maps are handed to the fusion stage.
    pub const CANONICAL: [FeatureKind; 10] = [
        FeatureKind::Hue,
        FeatureKind::Saturation,
        FeatureKind::Intensity,
        FeatureKind::Edge0,
        FeatureKind::Edge45,
        FeatureKind::Edge90,
        FeatureKind::Edge135,
        FeatureKind::UncommonH,
        FeatureKind::UncommonS,
        FeatureKind::UncommonI,
    ];

    /// Stable lowercase name, used for file naming and log output.
    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::Hue => "hue",
            FeatureKind::Saturation => "saturation",
            FeatureKind::Intensity => "intensity",
            FeatureKind::Edge0 => "edge0",
            FeatureKind::Edge45 => "edge45",
            FeatureKind::Edge90 => "edge90",
            FeatureKind::Edge135 => "edge135",
            FeatureKind::UncommonH => "uncommon_h",
            FeatureKind::UncommonS => "uncommon_s",
            FeatureKind::UncommonI => "uncommon_i",
            FeatureKind::Interest => "interest",
        }
    }
}

/// An RGB frame: 8-bit samples, row-major, three bytes per pixel.
///
/// Channel values are interpreted in [0, 1] after division by 255. Validity
/// (dimensions, buffer length) is established at construction, so downstream
/// stages take a valid frame by reference and cannot fail on layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl Image {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if width < MIN_DIM || height < MIN_DIM {
            return Err(Error::ImageTooSmall {
                width,
                height,
                min: MIN_DIM,
            });
        }
        let expected = 3 * width as usize * height as usize;
        if pixels.len() != expected {
            return Err(Error::BufferSize {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds a frame by evaluating `f` at every pixel in raster order.
    pub fn from_fn(
        width: u32,
        height: u32,
        mut f: impl FnMut(u32, u32) -> [u8; 3],
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(3 * width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Raw 8-bit samples of the pixel at (x, y).
    pub fn rgb8(&self, x: u32, y: u32) -> [u8; 3] {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    /// Channel values of the pixel at (x, y), scaled into [0, 1].
    pub fn rgb(&self, x: u32, y: u32) -> (f64, f64, f64) {
        let [r, g, b] = self.rgb8(x, y);
        (
            f64::from(r) / 255.0,
            f64::from(g) / 255.0,
            f64::from(b) / 255.0,
        )
    }

    /// Copies the `width x height` rectangle whose top-left corner is
    /// (left, top). The rectangle must lie inside the frame.
    pub fn crop(&self, left: u32, top: u32, width: u32, height: u32) -> Result<Self> {
        if left + width > self.width || top + height > self.height {
            return Err(Error::DimensionMismatch {
                want_w: width,
                want_h: height,
                got_w: self.width,
                got_h: self.height,
            });
        }
        let mut pixels = Vec::with_capacity(3 * width as usize * height as usize);
        for y in top..top + height {
            let row = 3 * (y as usize * self.width as usize + left as usize);
            pixels.extend_from_slice(&self.pixels[row..row + 3 * width as usize]);
        }
        Self::new(width, height, pixels)
    }
}

/// A single-channel raster of floating-point values in [0, 1].
///
/// The range and buffer-length invariants are checked at construction; maps
/// produced by pipeline stages uphold them by design.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    width: u32,
    height: u32,
    kind: FeatureKind,
    values: Vec<f64>,
}

impl FeatureMap {
    pub fn new(width: u32, height: u32, kind: FeatureKind, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ImageTooSmall {
                width,
                height,
                min: 1,
            });
        }
        let expected = width as usize * height as usize;
        if values.len() != expected {
            return Err(Error::ValueCount {
                expected,
                actual: values.len(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ValueOutOfRange { index, value });
            }
        }
        Ok(Self {
            width,
            height,
            kind,
            values,
        })
    }

    /// Constructor for values a stage has already proven valid.
    pub(crate) fn from_parts(width: u32, height: u32, kind: FeatureKind, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), width as usize * height as usize);
        debug_assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
        Self {
            width,
            height,
            kind,
            values,
        }
    }

    /// A map holding the same value everywhere.
    pub fn filled(width: u32, height: u32, kind: FeatureKind, value: f64) -> Result<Self> {
        let n = width as usize * height as usize;
        Self::new(width, height, kind, vec![value; n])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: u32, y: u32) -> f64 {
        self.values[y as usize * self.width as usize + x as usize]
    }

    pub fn same_dims(&self, other: &FeatureMap) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Arithmetic mean over all values.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Largest value in the map.
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_image_rejects_small_dimensions() {
        assert!(matches!(
            Image::new(2, 8, vec![0; 48]),
            Err(Error::ImageTooSmall { .. })
        ));
        assert!(matches!(
            Image::new(8, 2, vec![0; 48]),
            Err(Error::ImageTooSmall { .. })
        ));
    }

    #[test]
    fn test_image_rejects_bad_buffer_length() {
        assert!(matches!(
            Image::new(4, 4, vec![0; 47]),
            Err(Error::BufferSize {
                expected: 48,
                actual: 47
            })
        ));
    }

    #[test]
    fn test_image_pixel_access() {
        let img = Image::from_fn(4, 3, |x, y| [x as u8, y as u8, 7]).unwrap();
        assert_eq!(img.rgb8(2, 1), [2, 1, 7]);
        let (r, g, b) = img.rgb(3, 2);
        assert!((r - 3.0 / 255.0).abs() < 1e-15);
        assert!((g - 2.0 / 255.0).abs() < 1e-15);
        assert!((b - 7.0 / 255.0).abs() < 1e-15);
    }

    #[test]
    fn test_image_crop_matches_direct_indexing() {
        let img = Image::from_fn(10, 8, |x, y| [(x * 20) as u8, (y * 25) as u8, 0]).unwrap();
        let crop = img.crop(4, 2, 5, 4).unwrap();
        assert_eq!(crop.width(), 5);
        assert_eq!(crop.height(), 4);
        for y in 0..4 {
            for x in 0..5 {
                assert_eq!(crop.rgb8(x, y), img.rgb8(x + 4, y + 2));
            }
        }
    }

    #[test]
    fn test_image_crop_out_of_bounds() {
        let img = Image::from_fn(10, 8, |_, _| [0, 0, 0]).unwrap();
        assert!(img.crop(6, 0, 5, 4).is_err());
        assert!(img.crop(0, 5, 5, 4).is_err());
    }

    #[test]
    fn test_feature_map_validates_range() {
        assert!(FeatureMap::new(2, 2, FeatureKind::Hue, vec![0.0, 0.5, 1.0, 0.9]).is_ok());
        assert!(matches!(
            FeatureMap::new(2, 2, FeatureKind::Hue, vec![0.0, 1.5, 0.0, 0.0]),
            Err(Error::ValueOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            FeatureMap::new(2, 2, FeatureKind::Hue, vec![0.0, f64::NAN, 0.0, 0.0]),
            Err(Error::ValueOutOfRange { .. })
        ));
        assert!(matches!(
            FeatureMap::new(2, 2, FeatureKind::Hue, vec![0.0; 3]),
            Err(Error::ValueCount { .. })
        ));
    }

    #[test]
    fn test_feature_map_mean_and_max() {
        let map =
            FeatureMap::new(2, 2, FeatureKind::Intensity, vec![0.0, 0.25, 0.5, 0.25]).unwrap();
        assert!((map.mean() - 0.25).abs() < 1e-15);
        assert_eq!(map.max(), 0.5);
    }

    #[test]
    fn test_canonical_order_has_ten_entries_and_no_interest() {
        assert_eq!(FeatureKind::CANONICAL.len(), 10);
        assert!(!FeatureKind::CANONICAL.contains(&FeatureKind::Interest));
    }
}

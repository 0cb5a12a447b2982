//! Image file loading and feature-map export.
//!
//! Inputs may be PNG or PPM/PNM. Feature maps export as 8-bit grayscale
//! PNG, either on the raw scale (value × 255, for maps whose absolute level
//! is meaningful) or normalized by the map's maximum (for display of
//! relative structure). Segmentation labels export as 16-bit grayscale PNG.

use std::path::Path;

use image::{GrayImage, ImageBuffer, ImageFormat, ImageReader, Luma};
use saccade::formats::labels_u16;
use saccade::{FeatureMap, Image, SegmentationMap};

use crate::error::{CliError, Result};

/// Loads a PNG or PPM image as RGB.
pub fn load_image(path: &Path) -> Result<Image> {
    let reader = ImageReader::open(path)?.with_guessed_format()?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Pnm) => {}
        Some(other) => {
            return Err(CliError::Format(format!(
                "{}: {other:?} input is not supported; use PNG or PPM",
                path.display()
            )));
        }
        None => {
            return Err(CliError::Format(format!(
                "{}: unrecognized image format; use PNG or PPM",
                path.display()
            )));
        }
    }
    let decoded = reader.decode()?.into_rgb8();
    let (w, h) = decoded.dimensions();
    Ok(Image::new(w, h, decoded.into_raw())?)
}

/// Rounds a map value in [0, 1] to its 8-bit export level.
pub fn to_u8(value: f64) -> u8 {
    (value * 255.0).round().clamp(0.0, 255.0) as u8
}

/// Writes a map as grayscale PNG on the raw scale: level = value × 255.
pub fn save_map_raw(map: &FeatureMap, path: &Path) -> Result<()> {
    let pixels: Vec<u8> = map.values().iter().map(|&v| to_u8(v)).collect();
    let img = GrayImage::from_raw(map.width(), map.height(), pixels)
        .expect("buffer length matches dimensions");
    img.save(path)?;
    Ok(())
}

/// Writes a map as grayscale PNG normalized by its maximum, so the
/// brightest pixel is always 255 (an all-zero map stays black).
pub fn save_map_normalized(map: &FeatureMap, path: &Path) -> Result<()> {
    let max = map.max();
    let scale = if max > 0.0 { 1.0 / max } else { 0.0 };
    let pixels: Vec<u8> = map.values().iter().map(|&v| to_u8(v * scale)).collect();
    let img = GrayImage::from_raw(map.width(), map.height(), pixels)
        .expect("buffer length matches dimensions");
    img.save(path)?;
    Ok(())
}

/// Writes the map's values as little-endian 64-bit floats, row-major.
pub fn save_map_f64(map: &FeatureMap, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(map.values().len() * 8);
    for v in map.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Writes region labels as 16-bit grayscale PNG.
pub fn save_labels(seg: &SegmentationMap, path: &Path) -> Result<()> {
    let labels = labels_u16(seg)?;
    let img: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(seg.width(), seg.height(), labels)
            .expect("buffer length matches dimensions");
    img.save(path)?;
    Ok(())
}

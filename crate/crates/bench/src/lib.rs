//! Shared frame generators for the benchmark suite.

use saccade::Image;

/// Deterministic camera-like frame: two channel gradients, a coarse checker
/// pattern, and pixel noise, so every pipeline stage does realistic work.
pub fn synthetic_frame(width: u32, height: u32) -> Image {
    let mut state = 0x0dd_ba11u64;
    let mut noise = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) & 0x1f) as i32 - 16
    };
    Image::from_fn(width, height, |x, y| {
        let r = (f64::from(x) / f64::from(width) * 255.0) as i32;
        let g = (f64::from(y) / f64::from(height) * 255.0) as i32;
        let b = i32::from((x / 32 + y / 32) % 2 == 0) * 180;
        [
            (r + noise()).clamp(0, 255) as u8,
            (g + noise()).clamp(0, 255) as u8,
            (b + noise()).clamp(0, 255) as u8,
        ]
    })
    .expect("benchmark frame dimensions are valid")
}

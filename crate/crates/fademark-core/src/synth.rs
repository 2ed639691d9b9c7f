//! Procedural stand-in test images.
//!
//! The classic photographic test set is not redistributable, so the toolkit
//! ships deterministic synthetic covers with comparable character (smooth
//! portraits, fine texture, soft blobs, directional weave) plus two logo
//! marks. Generation is pure arithmetic on pixel coordinates; the same call
//! always produces the same image.
//!
//! Cover luminance is kept inside `[20, 235]` so the synthetic images behave
//! like natural photographs rather than pathological black/white fields.

use alloc::vec::Vec;

use crate::math;
use crate::pixel::{clamp255, PixelPlane, Precision, RasterImage, RoundingMode};
use crate::rng::SampleStream;

/// Character of a synthetic cover image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverStyle {
    /// Smooth illumination gradient with soft highlights.
    Gradient,
    /// Dense high-frequency texture.
    FineTexture,
    /// Large soft radial blobs.
    Blobs,
    /// Directional stripes over a gradient.
    DiagonalWeave,
}

/// Character of a synthetic logo mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogoStyle {
    /// Dark ring and crossbars on a light field.
    RingMark,
    /// Light diagonal stripes and frame on a dark field.
    StripeMark,
}

const LOGO_DARK: f64 = 25.0;
const LOGO_LIGHT: f64 = 230.0;

/// Deterministic single-plane cover image.
pub fn cover(style: CoverStyle, width: usize, height: usize) -> RasterImage {
    let plane = generate(width, height, |u, v, i| cover_value(style, u, v, i));
    RasterImage::new(alloc::vec![plane], Precision::Carrier8)
}

/// Deterministic three-plane cover: the single-plane cover with mild,
/// channel-dependent tinting.
pub fn cover_rgb(style: CoverStyle, width: usize, height: usize) -> RasterImage {
    let planes = [0.92, 1.0, 1.08]
        .iter()
        .map(|&tint| generate(width, height, |u, v, i| limit(cover_value(style, u, v, i) * tint)))
        .collect::<Vec<_>>();
    RasterImage::new(planes, Precision::Carrier8)
}

/// Deterministic single-plane logo mark.
pub fn logo(style: LogoStyle, width: usize, height: usize) -> RasterImage {
    let plane = generate(width, height, |u, v, _| logo_value(style, u, v));
    RasterImage::new(alloc::vec![plane], Precision::Carrier8)
}

fn generate(width: usize, height: usize, f: impl Fn(f64, f64, u64) -> f64) -> PixelPlane {
    assert!(width > 0 && height > 0);
    let rounding = RoundingMode::default();
    let du = 1.0 / (width.max(2) - 1) as f64;
    let dv = 1.0 / (height.max(2) - 1) as f64;
    let mut samples = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let value = f(x as f64 * du, y as f64 * dv, (y * width + x) as u64);
            samples.push(clamp255(rounding.round(value)));
        }
    }
    PixelPlane::from_samples(width, height, samples)
}

fn limit(v: f64) -> f64 {
    v.clamp(20.0, 235.0)
}

fn cover_value(style: CoverStyle, u: f64, v: f64, index: u64) -> f64 {
    match style {
        CoverStyle::Gradient => {
            let base = 85.0 + 75.0 * u + 35.0 * v;
            let highlight = 55.0 * math::exp(-((u - 0.35) * (u - 0.35) + (v - 0.38) * (v - 0.38)) / 0.025);
            let shadow = -40.0 * math::exp(-((u - 0.72) * (u - 0.72) + (v - 0.68) * (v - 0.68)) / 0.06);
            let texture = 7.0 * math::sin(11.0 * math::PI * u) * math::sin(9.0 * math::PI * v);
            limit(base + highlight + shadow + texture)
        }
        CoverStyle::FineTexture => {
            let wave = 42.0 * math::sin(38.0 * math::PI * u + 2.5 * math::sin(7.0 * math::PI * v));
            let cross = 24.0 * math::sin(31.0 * math::PI * v + 1.7 * math::sin(5.0 * math::PI * u));
            let grain = 30.0 * (SampleStream::new(0x5EED_C0DE, index).next_unit() - 0.5);
            limit(128.0 + wave * 0.5 + cross * 0.5 + grain)
        }
        CoverStyle::Blobs => {
            let blobs = [
                (0.28, 0.30, 0.050, 105.0),
                (0.68, 0.42, 0.035, 85.0),
                (0.45, 0.72, 0.060, 95.0),
                (0.82, 0.80, 0.020, 70.0),
            ];
            let mut value = 62.0 + 18.0 * v;
            for (cx, cy, radius, amp) in blobs {
                let d2 = (u - cx) * (u - cx) + (v - cy) * (v - cy);
                value += amp * math::exp(-d2 / radius);
            }
            limit(value)
        }
        CoverStyle::DiagonalWeave => {
            let f = 10.0 + 14.0 * u;
            let stripes = 48.0 * math::sin(2.0 * math::PI * f * (0.7 * u + 0.7 * v));
            let base = 105.0 + 45.0 * u - 20.0 * v;
            limit(base + stripes * (0.35 + 0.65 * v))
        }
    }
}

fn logo_value(style: LogoStyle, u: f64, v: f64) -> f64 {
    match style {
        LogoStyle::RingMark => {
            let du = u - 0.5;
            let dv = v - 0.5;
            let d = math::sqrt(du * du + dv * dv);
            let ring = math::abs(d - 0.30) < 0.055;
            let bars = d < 0.40 && (math::abs(du) < 0.045 || math::abs(dv) < 0.045);
            let corners = (u < 0.12 || u > 0.88) && (v < 0.12 || v > 0.88);
            if ring || bars || corners {
                LOGO_DARK
            } else {
                LOGO_LIGHT
            }
        }
        LogoStyle::StripeMark => {
            let border = u < 0.06 || u > 0.94 || v < 0.06 || v > 0.94;
            let phase = (u + v) * 7.0;
            let stripe = phase - math::floor(phase) < 0.5;
            if border || stripe {
                LOGO_LIGHT
            } else {
                LOGO_DARK
            }
        }
    }
}

pub const ALL_COVERS: [CoverStyle; 4] = [
    CoverStyle::Gradient,
    CoverStyle::FineTexture,
    CoverStyle::Blobs,
    CoverStyle::DiagonalWeave,
];

pub const ALL_LOGOS: [LogoStyle; 2] = [LogoStyle::RingMark, LogoStyle::StripeMark];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        for style in ALL_COVERS {
            assert_eq!(cover(style, 32, 32), cover(style, 32, 32));
        }
        for style in ALL_LOGOS {
            assert_eq!(logo(style, 32, 32), logo(style, 32, 32));
        }
    }

    #[test]
    fn covers_are_carrier8_with_natural_range() {
        for style in ALL_COVERS {
            let img = cover(style, 64, 48);
            assert!(img.is_carrier8());
            for s in img.samples() {
                assert!((20.0..=235.0).contains(&s), "{style:?}: {s}");
            }
        }
    }

    #[test]
    fn covers_are_distinct_and_non_constant() {
        let imgs: Vec<RasterImage> = ALL_COVERS.iter().map(|&s| cover(s, 64, 64)).collect();
        for (i, a) in imgs.iter().enumerate() {
            let first = a.plane(0).get(0, 0);
            assert!(a.plane(0).samples().iter().any(|&s| s != first));
            for b in &imgs[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn logos_are_two_tone_marks() {
        for style in ALL_LOGOS {
            let img = logo(style, 64, 64);
            let dark = img.plane(0).samples().iter().filter(|&&s| s == LOGO_DARK).count();
            let light = img.plane(0).samples().iter().filter(|&&s| s == LOGO_LIGHT).count();
            assert_eq!(dark + light, 64 * 64);
            assert!(dark > 100, "{style:?} needs visible mark coverage");
            assert!(light > 100);
        }
    }

    #[test]
    fn rgb_cover_has_three_matching_planes() {
        let img = cover_rgb(CoverStyle::Gradient, 16, 16);
        assert_eq!(img.channels(), 3);
        assert!(img.is_carrier8());
    }
}

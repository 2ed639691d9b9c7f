//! Image representation and deterministic sample arithmetic.
//!
//! Samples are always held as `f64`, regardless of carrier precision; the
//! [`Precision`] tag only states what the image is allowed to contain (and
//! therefore how it may be serialized). A [`Precision::Carrier8`] image
//! holds integers in `[0, 255]`; a [`Precision::CarrierReal`] image holds
//! arbitrary reals.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Rounding rule applied when snapping real samples to integers.
///
/// One global mode keeps embedding, extraction, and the quantization error
/// table mutually consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RoundingMode {
    /// Round to the nearest integer; ties go away from zero, so
    /// `round(2.5) == 3` and `round(-0.5) == -1`.
    #[default]
    HalfAwayFromZero,
}

impl RoundingMode {
    #[inline]
    pub fn round(self, x: f64) -> f64 {
        match self {
            RoundingMode::HalfAwayFromZero => math::round(x),
        }
    }
}

/// What a [`RasterImage`] is allowed to contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// Every sample is an integer in `[0, 255]`.
    Carrier8,
    /// Samples are unconstrained reals.
    CarrierReal,
}

/// One channel of an image: a row-major grid of `f64` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelPlane {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl PixelPlane {
    /// All-zero plane. Panics if either dimension is zero.
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "plane dimensions must be positive");
        PixelPlane {
            width,
            height,
            samples: vec![0.0; width * height],
        }
    }

    /// Wraps an existing row-major sample buffer.
    /// Panics unless `samples.len() == width * height`.
    pub fn from_samples(width: usize, height: usize, samples: Vec<f64>) -> Self {
        assert!(width > 0 && height > 0, "plane dimensions must be positive");
        assert_eq!(samples.len(), width * height, "sample count must match dimensions");
        PixelPlane {
            width,
            height,
            samples,
        }
    }

    pub fn from_bytes(width: usize, height: usize, bytes: &[u8]) -> Self {
        Self::from_samples(width, height, bytes.iter().map(|&b| f64::from(b)).collect())
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.samples[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.samples[y * self.width + x] = value;
    }

    /// Sample lookup with coordinates clamped to the plane (edge replication).
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.get(cx, cy)
    }

    #[inline]
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    #[inline]
    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> PixelPlane {
        PixelPlane {
            width: self.width,
            height: self.height,
            samples: self.samples.iter().map(|&s| f(s)).collect(),
        }
    }
}

/// A 1-plane (grayscale) or 3-plane (RGB) image with a precision tag.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    planes: Vec<PixelPlane>,
    precision: Precision,
}

impl RasterImage {
    /// Assembles an image from planes.
    ///
    /// Panics if the plane list is empty, if plane dimensions disagree, or
    /// (in debug builds) if a `Carrier8` tag is claimed for non-integer or
    /// out-of-range samples.
    pub fn new(planes: Vec<PixelPlane>, precision: Precision) -> Self {
        assert!(!planes.is_empty(), "image must have at least one plane");
        let (w, h) = (planes[0].width(), planes[0].height());
        assert!(
            planes.iter().all(|p| p.width() == w && p.height() == h),
            "all planes must share dimensions"
        );
        debug_assert!(
            precision != Precision::Carrier8 || planes.iter().all(plane_is_carrier8),
            "Carrier8 image must hold integers in [0, 255]"
        );
        RasterImage { planes, precision }
    }

    /// Single-plane image from raw 8-bit samples.
    pub fn from_luma8(width: usize, height: usize, bytes: &[u8]) -> Self {
        RasterImage::new(
            vec![PixelPlane::from_bytes(width, height, bytes)],
            Precision::Carrier8,
        )
    }

    /// Three-plane image from raw 8-bit samples, one slice per plane.
    pub fn from_rgb8(width: usize, height: usize, r: &[u8], g: &[u8], b: &[u8]) -> Self {
        RasterImage::new(
            vec![
                PixelPlane::from_bytes(width, height, r),
                PixelPlane::from_bytes(width, height, g),
                PixelPlane::from_bytes(width, height, b),
            ],
            Precision::Carrier8,
        )
    }

    /// Constant gray image.
    pub fn constant(width: usize, height: usize, value: f64, precision: Precision) -> Self {
        RasterImage::new(
            vec![PixelPlane::from_samples(
                width,
                height,
                vec![value; width * height],
            )],
            precision,
        )
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.planes[0].width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.planes[0].height()
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width(), self.height())
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.planes.len()
    }

    #[inline]
    pub fn precision(&self) -> Precision {
        self.precision
    }

    #[inline]
    pub fn is_carrier8(&self) -> bool {
        self.precision == Precision::Carrier8
    }

    #[inline]
    pub fn planes(&self) -> &[PixelPlane] {
        &self.planes
    }

    #[inline]
    pub fn plane(&self, index: usize) -> &PixelPlane {
        &self.planes[index]
    }

    pub fn into_planes(self) -> Vec<PixelPlane> {
        self.planes
    }

    /// All samples of all planes, plane-major.
    pub fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        self.planes.iter().flat_map(|p| p.samples().iter().copied())
    }

    pub fn sample_count(&self) -> usize {
        self.width() * self.height() * self.channels()
    }
}

fn plane_is_carrier8(plane: &PixelPlane) -> bool {
    plane
        .samples()
        .iter()
        .all(|&s| s >= 0.0 && s <= 255.0 && s == math::floor(s))
}

/// Clamps a sample to the 8-bit range; `-0.0` normalizes to `+0.0`.
#[inline]
pub(crate) fn clamp255(x: f64) -> f64 {
    if x < 0.0 {
        0.0
    } else if x > 255.0 {
        255.0
    } else {
        x + 0.0
    }
}

/// Snaps every sample to `clamp(round(s), 0, 255)`; the result is `Carrier8`.
///
/// Idempotent: quantizing a `Carrier8` image returns it unchanged.
pub fn quantize(img: &RasterImage, mode: RoundingMode) -> RasterImage {
    let planes = img
        .planes()
        .iter()
        .map(|p| p.map(|s| clamp255(mode.round(s))))
        .collect();
    RasterImage::new(planes, Precision::Carrier8)
}

/// The image as stored on an 8-bit medium: identity for `Carrier8` input,
/// otherwise a default-mode [`quantize`].
pub fn quantized_view(img: &RasterImage) -> RasterImage {
    if img.is_carrier8() {
        img.clone()
    } else {
        quantize(img, RoundingMode::default())
    }
}

pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// Collapses an image to one plane.
///
/// Grayscale input passes through unchanged. RGB input is combined with the
/// Rec. 601 luma weights; a `Carrier8` input is re-quantized so the output
/// stays `Carrier8`.
pub fn to_gray(img: &RasterImage) -> RasterImage {
    match img.channels() {
        1 => img.clone(),
        3 => {
            let (w, h) = img.dims();
            let r = img.plane(0).samples();
            let g = img.plane(1).samples();
            let b = img.plane(2).samples();
            let mut samples = Vec::with_capacity(w * h);
            for i in 0..w * h {
                samples.push(LUMA_WEIGHTS[0] * r[i] + LUMA_WEIGHTS[1] * g[i] + LUMA_WEIGHTS[2] * b[i]);
            }
            let gray = RasterImage::new(
                vec![PixelPlane::from_samples(w, h, samples)],
                Precision::CarrierReal,
            );
            if img.is_carrier8() {
                quantize(&gray, RoundingMode::default())
            } else {
                gray
            }
        }
        n => panic!("to_gray expects 1 or 3 planes, got {n}"),
    }
}

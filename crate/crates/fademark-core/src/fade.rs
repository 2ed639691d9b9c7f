//! Fade-blend watermarking: embedding and extraction.
//!
//! Embedding forms the per-sample convex combination `h = a1*f + a2*g` of a
//! cover image `f` and a logo `g`, with weights `a1 + a2 = 1`. Extraction
//! inverts it given the original cover (the scheme is non-blind).
//!
//! Two carrier modes exist because storage precision decides whether the
//! inversion is exact:
//!
//! * [`CarrierMode::ExactCarrier`]: `h` is kept at full real precision.
//!   Extraction computes `round((h - a1*f) / a2)` and recovers the logo
//!   sample-exactly for every input.
//! * [`CarrierMode::Quantized8`]: `h` is rounded to the 8-bit grid. Extraction
//!   computes `round((h - round(a1*f)) / a2)`, whose residual error is fully
//!   characterized by [`crate::oracle::ErrorTable`].
//!
//! Extraction picks the matching inversion from the watermarked image's
//! precision tag; the rounded cover term would destroy exact recovery on a
//! real-valued carrier, since `a1*f` is rarely an integer.

use alloc::vec::Vec;
use core::fmt;

use crate::pixel::{clamp255, PixelPlane, Precision, RasterImage, RoundingMode};

/// Smallest admissible logo weight; guards the division in extraction.
pub const MIN_ALPHA2: f64 = 0.001;

/// Validated fading weights plus the rounding rule used wherever the blend
/// meets the 8-bit grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadeParams {
    alpha1: f64,
    alpha2: f64,
    rounding: RoundingMode,
}

impl FadeParams {
    /// Builds parameters from the cover weight alone, with `alpha2 = 1 - alpha1`.
    pub fn from_alpha1(alpha1: f64) -> Result<Self, FadeError> {
        if !(alpha1 > 0.0 && alpha1 < 1.0) {
            return Err(FadeError::AlphaOutOfRange { alpha1 });
        }
        let alpha2 = 1.0 - alpha1;
        if alpha2 < MIN_ALPHA2 {
            return Err(FadeError::Alpha2TooSmall { alpha2 });
        }
        Ok(FadeParams {
            alpha1,
            alpha2,
            rounding: RoundingMode::default(),
        })
    }

    /// Builds parameters from both weights, enforcing `alpha1 + alpha2 = 1`.
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self, FadeError> {
        if !(alpha1 > 0.0 && alpha1 < 1.0) {
            return Err(FadeError::AlphaOutOfRange { alpha1 });
        }
        if crate::math::abs(alpha1 + alpha2 - 1.0) > 1e-12 {
            return Err(FadeError::WeightsDoNotSumToOne { alpha1, alpha2 });
        }
        if alpha2 < MIN_ALPHA2 {
            return Err(FadeError::Alpha2TooSmall { alpha2 });
        }
        Ok(FadeParams {
            alpha1,
            alpha2,
            rounding: RoundingMode::default(),
        })
    }

    #[inline]
    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    #[inline]
    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    #[inline]
    pub fn rounding(&self) -> RoundingMode {
        self.rounding
    }
}

/// Checks a cover weight and derives the logo weight; the argument order and
/// failure modes match the CLI's `--alpha1` validation.
pub fn validate_params(alpha1: f64) -> Result<FadeParams, FadeError> {
    FadeParams::from_alpha1(alpha1)
}

/// Storage precision of the watermarked image produced by [`embed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarrierMode {
    /// Keep the blend at full real precision (reversible extraction).
    ExactCarrier,
    /// Round the blend to 8-bit integers (deployable, lossy extraction).
    Quantized8,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FadeError {
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    IncompatibleChannels {
        cover: usize,
        logo: usize,
    },
    AlphaOutOfRange {
        alpha1: f64,
    },
    Alpha2TooSmall {
        alpha2: f64,
    },
    WeightsDoNotSumToOne {
        alpha1: f64,
        alpha2: f64,
    },
}

impl fmt::Display for FadeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FadeError::DimensionMismatch { left, right } => write!(
                f,
                "dimension mismatch: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            FadeError::IncompatibleChannels { cover, logo } => write!(
                f,
                "incompatible channel counts: cover has {cover}, logo has {logo}"
            ),
            FadeError::AlphaOutOfRange { alpha1 } => {
                write!(f, "alpha1 must lie strictly between 0 and 1, got {alpha1}")
            }
            FadeError::Alpha2TooSmall { alpha2 } => {
                write!(f, "alpha2 must be at least {MIN_ALPHA2}, got {alpha2}")
            }
            FadeError::WeightsDoNotSumToOne { alpha1, alpha2 } => {
                write!(f, "alpha1 + alpha2 must equal 1, got {alpha1} + {alpha2}")
            }
        }
    }
}

impl core::error::Error for FadeError {}

/// Blends `logo` into `cover`.
///
/// Inputs must share dimensions and are expected to be `Carrier8`. Channel
/// counts must match, except that a 1-plane logo broadcasts onto every plane
/// of a 3-plane cover. The output precision follows `mode`.
pub fn embed(
    cover: &RasterImage,
    logo: &RasterImage,
    params: &FadeParams,
    mode: CarrierMode,
) -> Result<RasterImage, FadeError> {
    if cover.dims() != logo.dims() {
        return Err(FadeError::DimensionMismatch {
            left: cover.dims(),
            right: logo.dims(),
        });
    }
    let broadcast = match (cover.channels(), logo.channels()) {
        (c, l) if c == l => false,
        (3, 1) => true,
        (c, l) => return Err(FadeError::IncompatibleChannels { cover: c, logo: l }),
    };
    debug_assert!(cover.is_carrier8() && logo.is_carrier8(), "embed expects 8-bit inputs");

    let (a1, a2) = (params.alpha1, params.alpha2);
    let rounding = params.rounding;
    let planes: Vec<PixelPlane> = cover
        .planes()
        .iter()
        .enumerate()
        .map(|(i, cover_plane)| {
            let logo_plane = logo.plane(if broadcast { 0 } else { i });
            let blended = cover_plane
                .samples()
                .iter()
                .zip(logo_plane.samples())
                .map(|(&f, &g)| {
                    let h = a1 * f + a2 * g;
                    match mode {
                        CarrierMode::ExactCarrier => h,
                        CarrierMode::Quantized8 => clamp255(rounding.round(h)),
                    }
                })
                .collect();
            PixelPlane::from_samples(cover_plane.width(), cover_plane.height(), blended)
        })
        .collect();

    let precision = match mode {
        CarrierMode::ExactCarrier => Precision::CarrierReal,
        CarrierMode::Quantized8 => Precision::Carrier8,
    };
    Ok(RasterImage::new(planes, precision))
}

/// Recovers the logo from a watermarked image and its original cover.
///
/// The watermarked image may carry either precision; the cover is expected to
/// be `Carrier8`. Output is always `Carrier8`, one plane per watermarked
/// plane. When embedding broadcast a single-plane logo, plane 0 of the result
/// is the canonical recovery (see [`collapse_planes`]).
pub fn extract(
    watermarked: &RasterImage,
    cover: &RasterImage,
    params: &FadeParams,
) -> Result<RasterImage, FadeError> {
    if watermarked.dims() != cover.dims() || watermarked.channels() != cover.channels() {
        return Err(FadeError::DimensionMismatch {
            left: watermarked.dims(),
            right: cover.dims(),
        });
    }
    debug_assert!(cover.is_carrier8(), "extract expects an 8-bit cover");

    let (a1, a2) = (params.alpha1, params.alpha2);
    let rounding = params.rounding;
    let integer_carrier = watermarked.is_carrier8();
    let planes: Vec<PixelPlane> = watermarked
        .planes()
        .iter()
        .zip(cover.planes())
        .map(|(wm_plane, cover_plane)| {
            let recovered = wm_plane
                .samples()
                .iter()
                .zip(cover_plane.samples())
                .map(|(&h, &f)| {
                    let cover_term = if integer_carrier {
                        rounding.round(a1 * f)
                    } else {
                        a1 * f
                    };
                    clamp255(rounding.round((h - cover_term) / a2))
                })
                .collect();
            PixelPlane::from_samples(wm_plane.width(), wm_plane.height(), recovered)
        })
        .collect();

    Ok(RasterImage::new(planes, Precision::Carrier8))
}

/// How to reduce a multi-plane extraction to a single-plane logo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlaneCollapse {
    /// Take plane 0.
    #[default]
    First,
    /// Average all planes, then re-round; cuts quantized-carrier extraction
    /// noise roughly by sqrt(channel count).
    Average,
}

/// Collapses an extracted image to one plane per [`PlaneCollapse`].
pub fn collapse_planes(img: &RasterImage, mode: PlaneCollapse) -> RasterImage {
    if img.channels() == 1 {
        return img.clone();
    }
    match mode {
        PlaneCollapse::First => RasterImage::new(
            alloc::vec![img.plane(0).clone()],
            img.precision(),
        ),
        PlaneCollapse::Average => {
            let (w, h) = img.dims();
            let n = img.channels() as f64;
            let mut acc = alloc::vec![0.0f64; w * h];
            for plane in img.planes() {
                for (a, &s) in acc.iter_mut().zip(plane.samples()) {
                    *a += s;
                }
            }
            let rounding = RoundingMode::default();
            let averaged: Vec<f64> = acc
                .into_iter()
                .map(|s| {
                    let mean = s / n;
                    if img.is_carrier8() {
                        clamp255(rounding.round(mean))
                    } else {
                        mean
                    }
                })
                .collect();
            RasterImage::new(
                alloc::vec![PixelPlane::from_samples(w, h, averaged)],
                img.precision(),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_params_accepts_paper_operating_points() {
        let p = validate_params(0.99).unwrap();
        assert_eq!(p.alpha1(), 0.99);
        assert!((p.alpha1() + p.alpha2() - 1.0).abs() < 1e-12);

        let p = validate_params(0.5).unwrap();
        assert_eq!(p.alpha1(), 0.5);
        assert_eq!(p.alpha2(), 0.5);
    }

    #[test]
    fn validate_params_rejects_boundaries() {
        assert!(matches!(
            validate_params(1.0),
            Err(FadeError::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            validate_params(0.0),
            Err(FadeError::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            validate_params(-0.2),
            Err(FadeError::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            validate_params(0.9999),
            Err(FadeError::Alpha2TooSmall { .. })
        ));
    }

    #[test]
    fn embed_worked_example_is_exact_in_both_modes() {
        // f = 100, g = 200, a1 = 0.99: h = 99 + 2 = 101 exactly.
        let cover = RasterImage::from_luma8(1, 1, &[100]);
        let logo = RasterImage::from_luma8(1, 1, &[200]);
        let p = validate_params(0.99).unwrap();
        let exact = embed(&cover, &logo, &p, CarrierMode::ExactCarrier).unwrap();
        assert_eq!(exact.plane(0).get(0, 0), 101.0);
        let q8 = embed(&cover, &logo, &p, CarrierMode::Quantized8).unwrap();
        assert_eq!(q8.plane(0).get(0, 0), 101.0);
    }

    #[test]
    fn embed_zero_cover_keeps_fractional_blend_in_exact_mode() {
        let cover = RasterImage::from_luma8(1, 1, &[0]);
        let logo = RasterImage::from_luma8(1, 1, &[255]);
        let p = validate_params(0.99).unwrap();
        let exact = embed(&cover, &logo, &p, CarrierMode::ExactCarrier).unwrap();
        assert!((exact.plane(0).get(0, 0) - 2.55).abs() < 1e-12);
        let q8 = embed(&cover, &logo, &p, CarrierMode::Quantized8).unwrap();
        assert_eq!(q8.plane(0).get(0, 0), 3.0);
    }

    #[test]
    fn extract_inverts_exact_carrier_worked_example() {
        let cover = RasterImage::from_luma8(1, 1, &[100]);
        let p = validate_params(0.99).unwrap();
        let wm = RasterImage::new(
            alloc::vec![PixelPlane::from_samples(1, 1, alloc::vec![101.0])],
            Precision::CarrierReal,
        );
        let got = extract(&wm, &cover, &p).unwrap();
        assert_eq!(got.plane(0).get(0, 0), 200.0);
    }

    #[test]
    fn quantized_carrier_loses_the_151_37_pair() {
        // round(0.99 * 151) = 149 cover term, h = round(149.86) = 150,
        // (150 - 149) / 0.01 = 100 != 37
        let cover = RasterImage::from_luma8(1, 1, &[151]);
        let logo = RasterImage::from_luma8(1, 1, &[37]);
        let p = validate_params(0.99).unwrap();
        let wm = embed(&cover, &logo, &p, CarrierMode::Quantized8).unwrap();
        assert_eq!(wm.plane(0).get(0, 0), 150.0);
        let got = extract(&wm, &cover, &p).unwrap();
        assert_eq!(got.plane(0).get(0, 0), 100.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let cover = RasterImage::from_luma8(2, 2, &[0; 4]);
        let logo = RasterImage::from_luma8(1, 1, &[0]);
        let p = validate_params(0.99).unwrap();
        assert!(matches!(
            embed(&cover, &logo, &p, CarrierMode::Quantized8),
            Err(FadeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn three_plane_logo_on_gray_cover_is_rejected() {
        let cover = RasterImage::from_luma8(1, 1, &[5]);
        let logo = RasterImage::from_rgb8(1, 1, &[1], &[2], &[3]);
        let p = validate_params(0.99).unwrap();
        assert!(matches!(
            embed(&cover, &logo, &p, CarrierMode::Quantized8),
            Err(FadeError::IncompatibleChannels { cover: 1, logo: 3 })
        ));
    }

    #[test]
    fn gray_logo_broadcasts_onto_rgb_cover_and_extracts_from_each_plane() {
        let cover = RasterImage::from_rgb8(1, 2, &[10, 20], &[30, 40], &[50, 60]);
        let logo = RasterImage::from_luma8(1, 2, &[200, 100]);
        let p = validate_params(0.9).unwrap();
        let wm = embed(&cover, &logo, &p, CarrierMode::ExactCarrier).unwrap();
        assert_eq!(wm.channels(), 3);
        let got = extract(&wm, &cover, &p).unwrap();
        for plane in got.planes() {
            assert_eq!(plane.samples(), logo.plane(0).samples());
        }
        let first = collapse_planes(&got, PlaneCollapse::First);
        assert_eq!(first.channels(), 1);
        assert_eq!(first.plane(0).samples(), logo.plane(0).samples());
        let avg = collapse_planes(&got, PlaneCollapse::Average);
        assert_eq!(avg.plane(0).samples(), logo.plane(0).samples());
    }

    #[test]
    fn embed_output_stays_in_range_for_extreme_inputs() {
        let cover = RasterImage::from_luma8(2, 1, &[0, 255]);
        let logo = RasterImage::from_luma8(2, 1, &[255, 0]);
        for a1 in [0.5, 0.75, 0.99] {
            let p = validate_params(a1).unwrap();
            for mode in [CarrierMode::ExactCarrier, CarrierMode::Quantized8] {
                let wm = embed(&cover, &logo, &p, mode).unwrap();
                for s in wm.samples() {
                    assert!((0.0..=255.0).contains(&s));
                }
            }
        }
    }

    #[test]
    fn blend_is_monotone_in_logo_value_before_rounding() {
        let p = validate_params(0.8).unwrap();
        for f in (0..=255).step_by(15) {
            let mut prev = f64::NEG_INFINITY;
            for g in 0..=255 {
                let h = p.alpha1() * f64::from(f) + p.alpha2() * f64::from(g);
                assert!(h >= prev);
                prev = h;
            }
        }
    }
}

//! Core algorithms for fade-blend image watermarking.
//!
//! A logo image is hidden in a cover image by forming the per-pixel convex
//! combination `h = a1*f + a2*g` (typically 99% cover, 1% logo) and recovered
//! later with the help of the original cover. This crate holds everything
//! that is pure computation over in-memory sample grids:
//!
//! * [`pixel`] — image types, rounding/quantization, gray conversion
//! * [`geometry`] — resize and rotate with pixel-center alignment
//! * [`fade`] — embedding and extraction under both carrier precisions
//! * [`metrics`] — MSE, PSNR, and windowed SSIM
//! * [`attack`] — deterministic, seedable robustness attacks and realignment
//! * [`oracle`] — the exhaustive 256x256 quantization error table
//! * [`synth`] — procedural stand-ins for the classic test images
//!
//! The crate is `no_std` (with `alloc`); file formats and the command-line
//! harness live in the companion `fademark` crate.

#![no_std]
#![forbid(unsafe_code)]

#[cfg(feature = "std")]
extern crate std;
extern crate alloc;

mod math;

pub mod attack;
pub mod dct;
pub mod fade;
pub mod geometry;
pub mod metrics;
pub mod oracle;
pub mod pixel;
pub mod rng;
pub mod synth;

pub use attack::{apply_attack, jpeg_like_roundtrip, realign, AttackError, AttackSpec, NoiseScale};
pub use fade::{
    embed, extract, validate_params, CarrierMode, FadeError, FadeParams, PlaneCollapse,
};
pub use geometry::{resize, rotate, Canvas, Interp};
pub use metrics::{measure, mse, psnr, ssim, MetricsError, MetricsReport, SsimParams};
pub use oracle::{
    build_error_table, exactness_fraction, predict_mse, ErrorTable, JointHistogram, OracleError,
};
pub use pixel::{
    quantize, quantized_view, to_gray, PixelPlane, Precision, RasterImage, RoundingMode,
};

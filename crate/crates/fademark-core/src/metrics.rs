//! Fidelity measurement: mean squared error, peak signal-to-noise ratio, and
//! the windowed structural similarity index.
//!
//! PSNR is `10 * log10(255^2 / MSE)`, with `MSE == 0` reported as positive
//! infinity. SSIM follows the reference construction: an 11x11 Gaussian
//! window with sigma 1.5, `K1 = 0.01`, `K2 = 0.03`, dynamic range 255, and
//! windows restricted to fully interior positions (no border padding).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::pixel::{RasterImage, LUMA_WEIGHTS};

pub const PEAK_VALUE: f64 = 255.0;

#[derive(Debug, Clone, PartialEq)]
pub enum MetricsError {
    DimensionMismatch {
        left: (usize, usize, usize),
        right: (usize, usize, usize),
    },
    NegativeMse(f64),
    ImageSmallerThanWindow {
        dims: (usize, usize),
        window: usize,
    },
    InvalidWindow(usize),
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::DimensionMismatch { left, right } => write!(
                f,
                "dimension mismatch: {}x{}x{} vs {}x{}x{}",
                left.0, left.1, left.2, right.0, right.1, right.2
            ),
            MetricsError::NegativeMse(v) => write!(f, "mse must be non-negative, got {v}"),
            MetricsError::ImageSmallerThanWindow { dims, window } => write!(
                f,
                "image {}x{} is smaller than the {window}x{window} ssim window",
                dims.0, dims.1
            ),
            MetricsError::InvalidWindow(k) => {
                write!(f, "ssim window size must be an odd integer >= 3, got {k}")
            }
        }
    }
}

impl core::error::Error for MetricsError {}

/// The three fidelity figures for one image pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    /// Positive infinity when `mse == 0`.
    pub psnr_db: f64,
    pub ssim: f64,
}

/// SSIM configuration. `Default` gives the reference construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimParams {
    /// Odd window side length.
    pub window_size: usize,
    /// Standard deviation of the Gaussian window.
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
    /// Dynamic range `L` of the samples.
    pub dynamic_range: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams {
            window_size: 11,
            sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            dynamic_range: PEAK_VALUE,
        }
    }
}

impl SsimParams {
    #[inline]
    pub fn c1(&self) -> f64 {
        let v = self.k1 * self.dynamic_range;
        v * v
    }

    #[inline]
    pub fn c2(&self) -> f64 {
        let v = self.k2 * self.dynamic_range;
        v * v
    }

    /// The 1-D Gaussian half of the window, normalized to sum 1; the 2-D
    /// window is its outer product with itself, so it also sums to 1.
    pub fn window_1d(&self) -> Vec<f64> {
        let n = self.window_size;
        let center = (n as f64 - 1.0) / 2.0;
        let denom = 2.0 * self.sigma * self.sigma;
        let mut w: Vec<f64> = (0..n)
            .map(|i| {
                let d = i as f64 - center;
                math::exp(-(d * d) / denom)
            })
            .collect();
        let sum: f64 = w.iter().sum();
        for v in &mut w {
            *v /= sum;
        }
        w
    }
}

/// Mean squared error over all samples of all planes. Symmetric; zero iff
/// the images are identical.
pub fn mse(a: &RasterImage, b: &RasterImage) -> Result<f64, MetricsError> {
    check_same_shape(a, b)?;
    let mut sum = 0.0;
    for (pa, pb) in a.planes().iter().zip(b.planes()) {
        for (&x, &y) in pa.samples().iter().zip(pb.samples()) {
            let d = x - y;
            sum += d * d;
        }
    }
    Ok(sum / a.sample_count() as f64)
}

/// Peak signal-to-noise ratio in decibels for a given MSE.
/// Returns positive infinity when the error is exactly zero.
pub fn psnr(mse_value: f64) -> Result<f64, MetricsError> {
    if mse_value < 0.0 {
        return Err(MetricsError::NegativeMse(mse_value));
    }
    if mse_value == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * math::log10(PEAK_VALUE * PEAK_VALUE / mse_value))
}

/// Mean structural similarity over all fully interior window positions.
/// Multi-channel images are reduced to a real-valued luma plane first.
pub fn ssim(a: &RasterImage, b: &RasterImage, params: &SsimParams) -> Result<f64, MetricsError> {
    check_same_shape(a, b)?;
    let n = params.window_size;
    if n < 3 || n % 2 == 0 {
        return Err(MetricsError::InvalidWindow(n));
    }
    let (w, h) = a.dims();
    if w < n || h < n {
        return Err(MetricsError::ImageSmallerThanWindow {
            dims: (w, h),
            window: n,
        });
    }

    let x = luma_values(a);
    let y = luma_values(b);
    let xx: Vec<f64> = x.iter().map(|&v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|&v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(&y).map(|(&u, &v)| u * v).collect();

    let window = params.window_1d();
    let mu_x = windowed_sums(&x, w, h, &window);
    let mu_y = windowed_sums(&y, w, h, &window);
    let e_xx = windowed_sums(&xx, w, h, &window);
    let e_yy = windowed_sums(&yy, w, h, &window);
    let e_xy = windowed_sums(&xy, w, h, &window);

    let c1 = params.c1();
    let c2 = params.c2();
    let mut total = 0.0;
    for i in 0..mu_x.len() {
        let (mx, my) = (mu_x[i], mu_y[i]);
        let var_x = e_xx[i] - mx * mx;
        let var_y = e_yy[i] - my * my;
        let cov = e_xy[i] - mx * my;
        let numerator = (2.0 * mx * my + c1) * (2.0 * cov + c2);
        let denominator = (mx * mx + my * my + c1) * (var_x + var_y + c2);
        total += numerator / denominator;
    }
    Ok(total / mu_x.len() as f64)
}

/// Computes all three metrics for one pair.
pub fn measure(
    a: &RasterImage,
    b: &RasterImage,
    params: &SsimParams,
) -> Result<MetricsReport, MetricsError> {
    let mse_value = mse(a, b)?;
    Ok(MetricsReport {
        mse: mse_value,
        psnr_db: psnr(mse_value)?,
        ssim: ssim(a, b, params)?,
    })
}

fn check_same_shape(a: &RasterImage, b: &RasterImage) -> Result<(), MetricsError> {
    if a.dims() != b.dims() || a.channels() != b.channels() {
        return Err(MetricsError::DimensionMismatch {
            left: (a.width(), a.height(), a.channels()),
            right: (b.width(), b.height(), b.channels()),
        });
    }
    Ok(())
}

fn luma_values(img: &RasterImage) -> Vec<f64> {
    match img.channels() {
        1 => img.plane(0).samples().to_vec(),
        _ => {
            let r = img.plane(0).samples();
            let g = img.plane(1).samples();
            let b = img.plane(2).samples();
            (0..r.len())
                .map(|i| LUMA_WEIGHTS[0] * r[i] + LUMA_WEIGHTS[1] * g[i] + LUMA_WEIGHTS[2] * b[i])
                .collect()
        }
    }
}

/// Separable valid-region weighted sums: a horizontal then a vertical pass
/// with the 1-D window. Output is row-major over the
/// `(w - n + 1) x (h - n + 1)` interior grid, in a fixed summation order so
/// results are bit-stable.
fn windowed_sums(values: &[f64], w: usize, h: usize, window: &[f64]) -> Vec<f64> {
    let n = window.len();
    let out_w = w - n + 1;
    let out_h = h - n + 1;

    let mut horizontal = vec![0.0f64; out_w * h];
    for y in 0..h {
        let row = &values[y * w..(y + 1) * w];
        for x in 0..out_w {
            let mut acc = 0.0;
            for (k, &wk) in window.iter().enumerate() {
                acc += wk * row[x + k];
            }
            horizontal[y * out_w + x] = acc;
        }
    }

    let mut out = vec![0.0f64; out_w * out_h];
    for y in 0..out_h {
        for x in 0..out_w {
            let mut acc = 0.0;
            for (k, &wk) in window.iter().enumerate() {
                acc += wk * horizontal[(y + k) * out_w + x];
            }
            out[y * out_w + x] = acc;
        }
    }
    out
}

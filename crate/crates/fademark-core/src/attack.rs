//! Deterministic image attacks and post-attack realignment.
//!
//! Every attack is a pure function of `(image, spec)`; stochastic variants
//! carry an explicit seed, and noise is generated from counter-style
//! per-sample streams (see [`crate::rng`]), so output never depends on
//! traversal order. Outputs are golden-file tested; the exact draw sequences
//! are part of the contract.
//!
//! Filters and noise model tampering of a stored 8-bit image and always
//! return `Carrier8`. The geometric attacks (rotate, scale) delegate to
//! [`crate::geometry`] and preserve the input precision: on an 8-bit image
//! the resampled result is re-quantized, while a real-valued carrier passes
//! through unquantized so that lossless geometric round trips stay lossless.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dct::{scaled_qtable, Dct8, BLOCK};
use crate::geometry::{crop, resize, rotate, Canvas, Interp};
use crate::math;
use crate::pixel::{clamp255, PixelPlane, Precision, RasterImage, RoundingMode};
use crate::rng::{SampleStream, SequenceStream};

/// Which intensity scale a noise variance refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NoiseScale {
    /// Samples treated as living in `[0, 1]`: a draw `n` perturbs the stored
    /// sample by `255 * n`. This matches the common normalized-image
    /// convention for figures quoting variances like 0.001.
    #[default]
    Unit,
    /// Samples treated as living in `[0, 255]`; draws are added directly.
    Byte,
}

/// One attack with all of its parameters.
///
/// The `Display` form (also parsed by `FromStr`) is the attack's canonical
/// id, e.g. `gauss:mean=0,var=0.001` or `rotate:deg=45,interp=bilinear`.
/// Seeds are deliberately not part of the id: batch runners derive per-cell
/// seeds from the id, and the id names the transform, not the draw.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum AttackSpec {
    GaussianNoise {
        #[cfg_attr(feature = "serde", serde(default))]
        mean: f64,
        variance: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        scale: NoiseScale,
        #[cfg_attr(feature = "serde", serde(default))]
        seed: u64,
    },
    SaltPepper {
        density: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        seed: u64,
    },
    MedianFilter {
        k: usize,
    },
    MeanBlur {
        k: usize,
    },
    GaussianBlur {
        sigma: f64,
        k: usize,
    },
    HighPass,
    WienerFilter {
        #[cfg_attr(feature = "serde", serde(default = "default_wiener_k"))]
        k: usize,
    },
    JpegLike {
        quality: u8,
    },
    Rotate {
        degrees: f64,
        #[cfg_attr(feature = "serde", serde(default = "default_interp"))]
        interp: Interp,
    },
    Scale {
        factor: f64,
        #[cfg_attr(feature = "serde", serde(default = "default_interp"))]
        interp: Interp,
    },
}

#[cfg(feature = "serde")]
fn default_wiener_k() -> usize {
    3
}

#[cfg(feature = "serde")]
fn default_interp() -> Interp {
    Interp::Bilinear
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttackError {
    InvalidSpec(String),
    InvalidQuality(u8),
    DimensionUnderflow {
        have: (usize, usize),
        need: (usize, usize),
    },
}

impl fmt::Display for AttackError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttackError::InvalidSpec(msg) => write!(f, "invalid attack spec: {msg}"),
            AttackError::InvalidQuality(q) => {
                write!(f, "jpeg quality must lie in 1..=100, got {q}")
            }
            AttackError::DimensionUnderflow { have, need } => write!(
                f,
                "attacked image {}x{} is smaller than the recoverable {}x{} region",
                have.0, have.1, need.0, need.1
            ),
        }
    }
}

impl core::error::Error for AttackError {}

impl AttackSpec {
    pub fn validate(&self) -> Result<(), AttackError> {
        let fail = |msg: String| Err(AttackError::InvalidSpec(msg));
        match *self {
            AttackSpec::GaussianNoise { variance, .. } => {
                if variance < 0.0 {
                    return fail(format!("variance must be non-negative, got {variance}"));
                }
            }
            AttackSpec::SaltPepper { density, .. } => {
                if !(0.0..=1.0).contains(&density) {
                    return fail(format!("density must lie in [0, 1], got {density}"));
                }
            }
            AttackSpec::MedianFilter { k } | AttackSpec::MeanBlur { k } | AttackSpec::WienerFilter { k } => {
                if k < 3 || k % 2 == 0 {
                    return fail(format!("window k must be an odd integer >= 3, got {k}"));
                }
            }
            AttackSpec::GaussianBlur { sigma, k } => {
                if sigma <= 0.0 {
                    return fail(format!("sigma must be positive, got {sigma}"));
                }
                if k < 1 || k % 2 == 0 {
                    return fail(format!("window k must be an odd integer >= 1, got {k}"));
                }
            }
            AttackSpec::HighPass => {}
            AttackSpec::JpegLike { quality } => {
                if !(1..=100).contains(&quality) {
                    return Err(AttackError::InvalidQuality(quality));
                }
            }
            AttackSpec::Rotate { degrees, .. } => {
                if !degrees.is_finite() {
                    return fail(format!("rotation angle must be finite, got {degrees}"));
                }
            }
            AttackSpec::Scale { factor, .. } => {
                if !(factor > 0.0 && factor.is_finite()) {
                    return fail(format!("scale factor must be positive, got {factor}"));
                }
            }
        }
        Ok(())
    }

    /// True for the attacks that change pixel geometry and therefore need
    /// realignment before extraction.
    pub fn is_geometric(&self) -> bool {
        matches!(self, AttackSpec::Rotate { .. } | AttackSpec::Scale { .. })
    }

    /// Returns the spec with its seed replaced; no-op for deterministic
    /// variants.
    pub fn with_seed(mut self, seed: u64) -> Self {
        match &mut self {
            AttackSpec::GaussianNoise { seed: s, .. } | AttackSpec::SaltPepper { seed: s, .. } => {
                *s = seed;
            }
            _ => {}
        }
        self
    }

    /// Canonical id string; same as the `Display` form.
    pub fn id(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for AttackSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttackSpec::GaussianNoise {
                mean,
                variance,
                scale,
                ..
            } => {
                write!(f, "gauss:mean={mean},var={variance}")?;
                if *scale == NoiseScale::Byte {
                    write!(f, ",scale=byte")?;
                }
                Ok(())
            }
            AttackSpec::SaltPepper { density, .. } => write!(f, "salt_pepper:density={density}"),
            AttackSpec::MedianFilter { k } => write!(f, "median:k={k}"),
            AttackSpec::MeanBlur { k } => write!(f, "mean:k={k}"),
            AttackSpec::GaussianBlur { sigma, k } => write!(f, "gaussian_blur:sigma={sigma},k={k}"),
            AttackSpec::HighPass => write!(f, "highpass"),
            AttackSpec::WienerFilter { k } => write!(f, "wiener:k={k}"),
            AttackSpec::JpegLike { quality } => write!(f, "jpeg:q={quality}"),
            AttackSpec::Rotate { degrees, interp } => {
                write!(f, "rotate:deg={degrees},interp={interp}")
            }
            AttackSpec::Scale { factor, interp } => {
                write!(f, "scale:factor={factor},interp={interp}")
            }
        }
    }
}

impl FromStr for AttackSpec {
    type Err = AttackError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n, r),
            None => (s, ""),
        };
        let mut pairs: Vec<(&str, &str)> = Vec::new();
        for item in rest.split(',') {
            if item.is_empty() {
                continue;
            }
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| AttackError::InvalidSpec(format!("expected key=value, got `{item}`")))?;
            pairs.push((k, v));
        }
        let get = |key: &str| pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let parse_f64 = |key: &str, v: &str| {
            f64::from_str(v)
                .map_err(|_| AttackError::InvalidSpec(format!("`{key}` is not a number: `{v}`")))
        };
        let parse_usize = |key: &str, v: &str| {
            usize::from_str(v)
                .map_err(|_| AttackError::InvalidSpec(format!("`{key}` is not an integer: `{v}`")))
        };
        let parse_interp = |v: &str| {
            Interp::from_str(v)
                .map_err(|_| AttackError::InvalidSpec(format!("unknown interpolation `{v}`")))
        };

        let spec = match name {
            "gauss" | "gaussian_noise" => AttackSpec::GaussianNoise {
                mean: get("mean").map(|v| parse_f64("mean", v)).transpose()?.unwrap_or(0.0),
                variance: get("var")
                    .or_else(|| get("variance"))
                    .map(|v| parse_f64("var", v))
                    .transpose()?
                    .ok_or_else(|| AttackError::InvalidSpec("gauss requires var=".into()))?,
                scale: match get("scale") {
                    None | Some("unit") => NoiseScale::Unit,
                    Some("byte") => NoiseScale::Byte,
                    Some(other) => {
                        return Err(AttackError::InvalidSpec(format!("unknown scale `{other}`")))
                    }
                },
                seed: 0,
            },
            "salt_pepper" | "sp" => AttackSpec::SaltPepper {
                density: get("density")
                    .map(|v| parse_f64("density", v))
                    .transpose()?
                    .ok_or_else(|| AttackError::InvalidSpec("salt_pepper requires density=".into()))?,
                seed: 0,
            },
            "median" => AttackSpec::MedianFilter {
                k: get("k").map(|v| parse_usize("k", v)).transpose()?.unwrap_or(3),
            },
            "mean" => AttackSpec::MeanBlur {
                k: get("k").map(|v| parse_usize("k", v)).transpose()?.unwrap_or(3),
            },
            "gaussian_blur" | "blur" => AttackSpec::GaussianBlur {
                sigma: get("sigma").map(|v| parse_f64("sigma", v)).transpose()?.unwrap_or(1.0),
                k: get("k").map(|v| parse_usize("k", v)).transpose()?.unwrap_or(5),
            },
            "highpass" => AttackSpec::HighPass,
            "wiener" => AttackSpec::WienerFilter {
                k: get("k").map(|v| parse_usize("k", v)).transpose()?.unwrap_or(3),
            },
            "jpeg" => AttackSpec::JpegLike {
                quality: get("q")
                    .or_else(|| get("quality"))
                    .map(|v| parse_usize("q", v))
                    .transpose()?
                    .ok_or_else(|| AttackError::InvalidSpec("jpeg requires q=".into()))?
                    .try_into()
                    .map_err(|_| AttackError::InvalidSpec("quality out of range".into()))?,
            },
            "rotate" => AttackSpec::Rotate {
                degrees: get("deg")
                    .or_else(|| get("degrees"))
                    .map(|v| parse_f64("deg", v))
                    .transpose()?
                    .ok_or_else(|| AttackError::InvalidSpec("rotate requires deg=".into()))?,
                interp: get("interp").map(parse_interp).transpose()?.unwrap_or(Interp::Bilinear),
            },
            "scale" => AttackSpec::Scale {
                factor: get("factor")
                    .map(|v| parse_f64("factor", v))
                    .transpose()?
                    .ok_or_else(|| AttackError::InvalidSpec("scale requires factor=".into()))?,
                interp: get("interp").map(parse_interp).transpose()?.unwrap_or(Interp::Bilinear),
            },
            other => {
                return Err(AttackError::InvalidSpec(format!("unknown attack `{other}`")))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Applies one attack. Deterministic given `(img, spec)` including the seed.
pub fn apply_attack(img: &RasterImage, spec: &AttackSpec) -> Result<RasterImage, AttackError> {
    spec.validate()?;
    let out = match *spec {
        AttackSpec::GaussianNoise {
            mean,
            variance,
            scale,
            seed,
        } => gaussian_noise(img, mean, variance, scale, seed),
        AttackSpec::SaltPepper { density, seed } => salt_pepper(img, density, seed),
        AttackSpec::MedianFilter { k } => filter_planes(img, |p| median_plane(p, k)),
        AttackSpec::MeanBlur { k } => filter_planes(img, |p| mean_plane(p, k)),
        AttackSpec::GaussianBlur { sigma, k } => filter_planes(img, |p| gaussian_plane(p, sigma, k)),
        AttackSpec::HighPass => filter_planes(img, high_pass_plane),
        AttackSpec::WienerFilter { k } => filter_planes(img, |p| wiener_plane(p, k)),
        AttackSpec::JpegLike { quality } => jpeg_like_roundtrip(img, quality)?,
        AttackSpec::Rotate { degrees, interp } => {
            requantize_like(img, &rotate(img, degrees, interp, Canvas::Expand))
        }
        AttackSpec::Scale { factor, interp } => {
            let (w, h) = img.dims();
            let new_w = (math::round(w as f64 * factor) as usize).max(1);
            let new_h = (math::round(h as f64 * factor) as usize).max(1);
            requantize_like(img, &resize(img, new_w, new_h, interp))
        }
    };
    Ok(out)
}

/// Undoes the geometric displacement of an attack so the result is pixel
/// aligned with the `original_dims` cover again. Non-geometric attacks pass
/// through unchanged.
pub fn realign(
    attacked: &RasterImage,
    spec: &AttackSpec,
    original_dims: (usize, usize),
) -> Result<RasterImage, AttackError> {
    let (ow, oh) = original_dims;
    match *spec {
        AttackSpec::Rotate { degrees, interp } => {
            let counter = requantize_like(attacked, &rotate(attacked, -degrees, interp, Canvas::Expand));
            let (cw, ch) = counter.dims();
            if cw < ow || ch < oh {
                return Err(AttackError::DimensionUnderflow {
                    have: (cw, ch),
                    need: (ow, oh),
                });
            }
            Ok(crop(&counter, (cw - ow) / 2, (ch - oh) / 2, ow, oh))
        }
        AttackSpec::Scale { interp, .. } => {
            Ok(requantize_like(attacked, &resize(attacked, ow, oh, interp)))
        }
        _ => Ok(attacked.clone()),
    }
}

/// Quantizes `out` when `reference` is an 8-bit image, otherwise passes the
/// real-valued result through. Keeps geometric round trips precision-stable.
fn requantize_like(reference: &RasterImage, out: &RasterImage) -> RasterImage {
    if reference.is_carrier8() && !out.is_carrier8() {
        crate::pixel::quantize(out, RoundingMode::default())
    } else {
        out.clone()
    }
}

fn filter_planes(img: &RasterImage, f: impl Fn(&PixelPlane) -> PixelPlane) -> RasterImage {
    let planes = img.planes().iter().map(f).collect();
    RasterImage::new(planes, Precision::Carrier8)
}

#[inline]
fn q8(v: f64) -> f64 {
    clamp255(math::round(v))
}

fn gaussian_noise(img: &RasterImage, mean: f64, variance: f64, scale: NoiseScale, seed: u64) -> RasterImage {
    let (w, h) = img.dims();
    let sd = math::sqrt(variance);
    let amplitude = match scale {
        NoiseScale::Unit => 255.0,
        NoiseScale::Byte => 1.0,
    };
    let planes = img
        .planes()
        .iter()
        .enumerate()
        .map(|(p, plane)| {
            let base = (p * w * h) as u64;
            let out = plane
                .samples()
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let mut stream = SampleStream::new(seed, base + i as u64);
                    let n = mean + sd * stream.next_standard_normal();
                    q8(s + amplitude * n)
                })
                .collect();
            PixelPlane::from_samples(w, h, out)
        })
        .collect();
    RasterImage::new(planes, Precision::Carrier8)
}

fn salt_pepper(img: &RasterImage, density: f64, seed: u64) -> RasterImage {
    let (w, h) = img.dims();
    let total = w * h;
    let count = math::round(density * total as f64) as usize;
    let mut planes: Vec<PixelPlane> = img.planes().to_vec();

    let mut rng = SequenceStream::new(seed);
    let mut positions: Vec<u32> = (0..total as u32).collect();
    for i in 0..count.min(total) {
        let j = i + rng.next_below((total - i) as u64) as usize;
        positions.swap(i, j);
        let value = if rng.next_bool() { 255.0 } else { 0.0 };
        let pos = positions[i] as usize;
        let (x, y) = (pos % w, pos / w);
        for plane in &mut planes {
            plane.set(x, y, value);
        }
    }
    RasterImage::new(planes, Precision::Carrier8)
}

fn neighborhood_fold<A>(plane: &PixelPlane, k: usize, mut init: impl FnMut() -> A, mut fold: impl FnMut(&mut A, f64, usize), finish: impl Fn(A) -> f64) -> PixelPlane {
    let (w, h) = (plane.width(), plane.height());
    let r = (k / 2) as isize;
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = init();
            let mut tap = 0usize;
            for dy in -r..=r {
                for dx in -r..=r {
                    fold(&mut acc, plane.get_clamped(x + dx, y + dy), tap);
                    tap += 1;
                }
            }
            out.push(finish(acc));
        }
    }
    PixelPlane::from_samples(w, h, out)
}

fn median_plane(plane: &PixelPlane, k: usize) -> PixelPlane {
    let len = k * k;
    neighborhood_fold(
        plane,
        k,
        || Vec::with_capacity(len),
        |buf: &mut Vec<f64>, v, _| buf.push(v),
        |mut buf| {
            buf.sort_unstable_by(f64::total_cmp);
            q8(buf[len / 2])
        },
    )
}

fn mean_plane(plane: &PixelPlane, k: usize) -> PixelPlane {
    let inv = 1.0 / (k * k) as f64;
    neighborhood_fold(plane, k, || 0.0, |acc, v, _| *acc += v, |acc| q8(acc * inv))
}

fn gaussian_plane(plane: &PixelPlane, sigma: f64, k: usize) -> PixelPlane {
    let r = (k / 2) as isize;
    let denom = 2.0 * sigma * sigma;
    let mut weights = Vec::with_capacity(k * k);
    for dy in -r..=r {
        for dx in -r..=r {
            weights.push(math::exp(-((dx * dx + dy * dy) as f64) / denom));
        }
    }
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    neighborhood_fold(plane, k, || 0.0, |acc, v, tap| *acc += weights[tap] * v, |acc| q8(acc))
}

/// Mean-residual high-pass with a mid-gray offset: `s - mean3x3(s) + 128`.
fn high_pass_plane(plane: &PixelPlane) -> PixelPlane {
    let mean = mean_plane_raw(plane, 3);
    let out = plane
        .samples()
        .iter()
        .zip(mean.samples())
        .map(|(&s, &m)| q8(s - m + 128.0))
        .collect();
    PixelPlane::from_samples(plane.width(), plane.height(), out)
}

fn mean_plane_raw(plane: &PixelPlane, k: usize) -> PixelPlane {
    let inv = 1.0 / (k * k) as f64;
    neighborhood_fold(plane, k, || 0.0, |acc, v, _| *acc += v, |acc| acc * inv)
}

/// Locally adaptive Wiener filter: with local mean `mu` and variance `s2`
/// over the `k`x`k` window and `nu2` the plane-wide mean of the local
/// variances, each sample becomes
/// `mu + max(s2 - nu2, 0) / max(s2, nu2) * (s - mu)`.
fn wiener_plane(plane: &PixelPlane, k: usize) -> PixelPlane {
    let inv = 1.0 / (k * k) as f64;
    let mean = mean_plane_raw(plane, k);
    let mean_sq = neighborhood_fold(plane, k, || 0.0, |acc, v, _| *acc += v * v, |acc| acc * inv);

    let n = plane.samples().len() as f64;
    let mut nu2 = 0.0;
    for (m, sq) in mean.samples().iter().zip(mean_sq.samples()) {
        nu2 += sq - m * m;
    }
    nu2 /= n;

    let out = plane
        .samples()
        .iter()
        .zip(mean.samples().iter().zip(mean_sq.samples()))
        .map(|(&s, (&mu, &sq))| {
            let s2 = sq - mu * mu;
            let denom = if s2 > nu2 { s2 } else { nu2 };
            let gain = if denom > 0.0 { (s2 - nu2).max(0.0) / denom } else { 0.0 };
            q8(mu + gain * (s - mu))
        })
        .collect();
    PixelPlane::from_samples(plane.width(), plane.height(), out)
}

/// Transform-coding round trip: pads each plane to 8x8 blocks by edge
/// replication, level-shifts, applies the orthonormal DCT, quantizes each
/// coefficient with the quality-scaled luminance table, reconstructs, and
/// crops back. Entropy coding is omitted; only the coefficient damage
/// matters for extraction.
pub fn jpeg_like_roundtrip(img: &RasterImage, quality: u8) -> Result<RasterImage, AttackError> {
    if !(1..=100).contains(&quality) {
        return Err(AttackError::InvalidQuality(quality));
    }
    let qtable = scaled_qtable(quality);
    let dct = Dct8::new();
    let rounding = RoundingMode::default();
    let (w, h) = img.dims();
    let padded_w = w.div_ceil(BLOCK) * BLOCK;
    let padded_h = h.div_ceil(BLOCK) * BLOCK;

    let planes = img
        .planes()
        .iter()
        .map(|plane| {
            let mut recon = vec![0.0f64; padded_w * padded_h];
            for by in (0..padded_h).step_by(BLOCK) {
                for bx in (0..padded_w).step_by(BLOCK) {
                    let mut block = [0.0f64; 64];
                    for y in 0..BLOCK {
                        for x in 0..BLOCK {
                            block[y * BLOCK + x] =
                                plane.get_clamped((bx + x) as isize, (by + y) as isize) - 128.0;
                        }
                    }
                    let mut coeffs = dct.forward(&block);
                    for (c, &q) in coeffs.iter_mut().zip(qtable.iter()) {
                        *c = rounding.round(*c / f64::from(q)) * f64::from(q);
                    }
                    let back = dct.inverse(&coeffs);
                    for y in 0..BLOCK {
                        for x in 0..BLOCK {
                            recon[(by + y) * padded_w + bx + x] = back[y * BLOCK + x] + 128.0;
                        }
                    }
                }
            }
            let mut out = Vec::with_capacity(w * h);
            for y in 0..h {
                for x in 0..w {
                    out.push(q8(recon[y * padded_w + x]));
                }
            }
            PixelPlane::from_samples(w, h, out)
        })
        .collect();
    Ok(RasterImage::new(planes, Precision::Carrier8))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pixel::Precision;

    fn random_luma(w: usize, h: usize, seed: u64) -> RasterImage {
        let mut s = SequenceStream::new(seed);
        let bytes: Vec<u8> = (0..w * h).map(|_| (s.next_u64() & 0xFF) as u8).collect();
        RasterImage::from_luma8(w, h, &bytes)
    }

    #[test]
    fn spec_ids_round_trip_through_parsing() {
        let specs = [
            AttackSpec::GaussianNoise {
                mean: 0.0,
                variance: 0.001,
                scale: NoiseScale::Unit,
                seed: 0,
            },
            AttackSpec::SaltPepper {
                density: 0.02,
                seed: 0,
            },
            AttackSpec::MedianFilter { k: 5 },
            AttackSpec::MeanBlur { k: 3 },
            AttackSpec::GaussianBlur { sigma: 1.0, k: 5 },
            AttackSpec::HighPass,
            AttackSpec::WienerFilter { k: 3 },
            AttackSpec::JpegLike { quality: 50 },
            AttackSpec::Rotate {
                degrees: 45.0,
                interp: Interp::Bilinear,
            },
            AttackSpec::Scale {
                factor: 3.0,
                interp: Interp::Nearest,
            },
        ];
        for spec in specs {
            let parsed: AttackSpec = spec.id().parse().unwrap();
            assert_eq!(parsed, spec, "id {}", spec.id());
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!("gauss:var=-1".parse::<AttackSpec>().is_err());
        assert!("salt_pepper:density=1.5".parse::<AttackSpec>().is_err());
        assert!("median:k=4".parse::<AttackSpec>().is_err());
        assert!("jpeg:q=0".parse::<AttackSpec>().is_err());
        assert!("jpeg:q=101".parse::<AttackSpec>().is_err());
        assert!("scale:factor=0".parse::<AttackSpec>().is_err());
        assert!("warp:x=1".parse::<AttackSpec>().is_err());
        assert!(AttackSpec::JpegLike { quality: 0 }.validate().is_err());
    }

    #[test]
    fn salt_pepper_zero_density_is_identity() {
        let img = random_luma(9, 7, 5);
        let spec = AttackSpec::SaltPepper {
            density: 0.0,
            seed: 33,
        };
        assert_eq!(apply_attack(&img, &spec).unwrap(), img);
    }

    #[test]
    fn salt_pepper_changes_bounded_count_with_extreme_values() {
        let img = RasterImage::constant(32, 32, 128.0, Precision::Carrier8);
        for density in [0.02, 0.2, 0.5] {
            let spec = AttackSpec::SaltPepper { density, seed: 7 };
            let out = apply_attack(&img, &spec).unwrap();
            let changed: Vec<f64> = out
                .plane(0)
                .samples()
                .iter()
                .copied()
                .filter(|&s| s != 128.0)
                .collect();
            let bound = (density * 1024.0).ceil() as usize;
            assert!(changed.len() <= bound);
            assert!(changed.iter().all(|&s| s == 0.0 || s == 255.0));
        }
    }

    #[test]
    fn salt_pepper_full_density_floods_every_pixel() {
        let img = RasterImage::constant(8, 8, 128.0, Precision::Carrier8);
        let spec = AttackSpec::SaltPepper {
            density: 1.0,
            seed: 3,
        };
        let out = apply_attack(&img, &spec).unwrap();
        assert!(out.plane(0).samples().iter().all(|&s| s == 0.0 || s == 255.0));
    }

    #[test]
    fn median_of_constant_image_is_identity() {
        let img = RasterImage::constant(10, 10, 41.0, Precision::Carrier8);
        for k in [3, 5, 7] {
            let out = apply_attack(&img, &AttackSpec::MedianFilter { k }).unwrap();
            assert_eq!(out, img);
        }
    }

    #[test]
    fn median_output_values_come_from_the_input() {
        let img = random_luma(12, 9, 11);
        let out = apply_attack(&img, &AttackSpec::MedianFilter { k: 3 }).unwrap();
        for s in out.plane(0).samples() {
            assert!(img.plane(0).samples().contains(s));
        }
    }

    #[test]
    fn median_removes_isolated_impulse() {
        let mut bytes = [100u8; 25];
        bytes[12] = 255;
        let img = RasterImage::from_luma8(5, 5, &bytes);
        let out = apply_attack(&img, &AttackSpec::MedianFilter { k: 3 }).unwrap();
        assert_eq!(out.plane(0).get(2, 2), 100.0);
    }

    #[test]
    fn blur_filters_preserve_constants() {
        let img = RasterImage::constant(9, 9, 200.0, Precision::Carrier8);
        for spec in [
            AttackSpec::MeanBlur { k: 3 },
            AttackSpec::GaussianBlur { sigma: 1.0, k: 5 },
            AttackSpec::WienerFilter { k: 3 },
        ] {
            let out = apply_attack(&img, &spec).unwrap();
            assert_eq!(out, img, "{spec}");
        }
    }

    #[test]
    fn high_pass_of_constant_is_mid_gray() {
        let img = RasterImage::constant(6, 6, 77.0, Precision::Carrier8);
        let out = apply_attack(&img, &AttackSpec::HighPass).unwrap();
        assert!(out.plane(0).samples().iter().all(|&s| s == 128.0));
    }

    #[test]
    fn attacks_are_deterministic_and_in_range() {
        let img = random_luma(16, 16, 123);
        let specs = [
            AttackSpec::GaussianNoise {
                mean: 0.0,
                variance: 0.01,
                scale: NoiseScale::Unit,
                seed: 5,
            },
            AttackSpec::SaltPepper {
                density: 0.3,
                seed: 5,
            },
            AttackSpec::MedianFilter { k: 3 },
            AttackSpec::JpegLike { quality: 30 },
            AttackSpec::Rotate {
                degrees: 31.0,
                interp: Interp::Bilinear,
            },
            AttackSpec::Scale {
                factor: 0.5,
                interp: Interp::Bilinear,
            },
        ];
        for spec in &specs {
            let a = apply_attack(&img, spec).unwrap();
            let b = apply_attack(&img, spec).unwrap();
            assert_eq!(a, b, "{spec}");
            assert!(a.is_carrier8());
            for s in a.samples() {
                assert!((0.0..=255.0).contains(&s), "{spec}: sample {s}");
            }
        }
    }

    #[test]
    fn gaussian_noise_ignores_traversal_order() {
        // same seed, same pixel -> same draw, regardless of image size
        let small = random_luma(4, 4, 9);
        let spec = AttackSpec::GaussianNoise {
            mean: 0.0,
            variance: 0.01,
            scale: NoiseScale::Unit,
            seed: 77,
        };
        let a = apply_attack(&small, &spec).unwrap();
        let b = apply_attack(&small, &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rotate_realign_quarter_turns_restore_exactly() {
        let img = random_luma(12, 7, 21);
        for deg in [90.0, 180.0, 270.0, 360.0] {
            let spec = AttackSpec::Rotate {
                degrees: deg,
                interp: Interp::Nearest,
            };
            let attacked = apply_attack(&img, &spec).unwrap();
            let back = realign(&attacked, &spec, img.dims()).unwrap();
            assert_eq!(back, img, "deg {deg}");
        }
    }

    #[test]
    fn scale_by_three_nearest_realigns_exactly() {
        for seed in 0..5 {
            let img = random_luma(16, 16, seed);
            let spec = AttackSpec::Scale {
                factor: 3.0,
                interp: Interp::Nearest,
            };
            let attacked = apply_attack(&img, &spec).unwrap();
            assert_eq!(attacked.dims(), (48, 48));
            let back = realign(&attacked, &spec, img.dims()).unwrap();
            assert_eq!(back, img);
        }
    }

    #[test]
    fn realign_passes_non_geometric_attacks_through() {
        let img = random_luma(8, 8, 2);
        let spec = AttackSpec::MedianFilter { k: 3 };
        let attacked = apply_attack(&img, &spec).unwrap();
        assert_eq!(realign(&attacked, &spec, img.dims()).unwrap(), attacked);
    }

    #[test]
    fn realign_flags_undersized_rotations() {
        let img = random_luma(4, 4, 2);
        let spec = AttackSpec::Rotate {
            degrees: 90.0,
            interp: Interp::Nearest,
        };
        let err = realign(&img, &spec, (400, 400)).unwrap_err();
        assert!(matches!(err, AttackError::DimensionUnderflow { .. }));
    }

    #[test]
    fn jpeg_quality_100_is_near_lossless() {
        let mut rng = SequenceStream::new(31);
        // 1000 random blocks, checked through the full image path
        for _ in 0..10 {
            let bytes: Vec<u8> = (0..80 * 80).map(|_| (rng.next_u64() & 0xFF) as u8).collect();
            let img = RasterImage::from_luma8(80, 80, &bytes);
            let out = jpeg_like_roundtrip(&img, 100).unwrap();
            for (a, b) in img.plane(0).samples().iter().zip(out.plane(0).samples()) {
                assert!((a - b).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn jpeg_constant_blocks_stay_within_one_level_at_mid_quality() {
        for value in 0..=255u8 {
            let img = RasterImage::constant(8, 8, f64::from(value), Precision::Carrier8);
            for quality in [50, 75, 90, 100] {
                let out = jpeg_like_roundtrip(&img, quality).unwrap();
                for s in out.plane(0).samples() {
                    assert!(
                        (s - f64::from(value)).abs() <= 1.0,
                        "value {value} quality {quality} -> {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn jpeg_handles_non_multiple_of_eight_dims() {
        let img = random_luma(13, 11, 3);
        let out = jpeg_like_roundtrip(&img, 70).unwrap();
        assert_eq!(out.dims(), (13, 11));
    }
}

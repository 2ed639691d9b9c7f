//! Geometric resampling: resizing and rotation.
//!
//! Sampling uses the pixel-center convention: destination pixel `d` reads
//! source coordinate `(d + 0.5) * scale - 0.5`. Exactness of the
//! rotate/rescale round trips elsewhere in the crate depends on this
//! alignment, so it is part of the contract.

use alloc::vec::Vec;

use crate::math;
use crate::pixel::{PixelPlane, Precision, RasterImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Interp {
    Nearest,
    Bilinear,
}

impl core::fmt::Display for Interp {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Interp::Nearest => "nearest",
            Interp::Bilinear => "bilinear",
        })
    }
}

impl core::str::FromStr for Interp {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "nearest" => Ok(Interp::Nearest),
            "bilinear" => Ok(Interp::Bilinear),
            _ => Err(()),
        }
    }
}

/// Canvas policy for rotation by a non-multiple of 90 degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Canvas {
    /// Output keeps the input dimensions; corners may rotate out of frame.
    KeepSize,
    /// Output grows to the bounding box of the rotated image.
    Expand,
}

/// Resamples to `new_w` x `new_h`. Output is always `CarrierReal`; callers
/// quantize when they need an 8-bit result.
pub fn resize(img: &RasterImage, new_w: usize, new_h: usize, interp: Interp) -> RasterImage {
    assert!(new_w > 0 && new_h > 0, "resize target must be positive");
    let (w, h) = img.dims();
    let scale_x = w as f64 / new_w as f64;
    let scale_y = h as f64 / new_h as f64;
    let planes = img
        .planes()
        .iter()
        .map(|p| {
            let mut out = Vec::with_capacity(new_w * new_h);
            for y in 0..new_h {
                let sy = (y as f64 + 0.5) * scale_y - 0.5;
                for x in 0..new_w {
                    let sx = (x as f64 + 0.5) * scale_x - 0.5;
                    out.push(sample_clamped(p, sx, sy, interp));
                }
            }
            PixelPlane::from_samples(new_w, new_h, out)
        })
        .collect();
    RasterImage::new(planes, Precision::CarrierReal)
}

/// Rotates about the image center.
///
/// Multiples of 90 degrees (after reduction mod 360) are pure index
/// permutations: lossless, precision-preserving, with dimensions swapped for
/// 90/270; the canvas policy is irrelevant for them. All other angles
/// resample with `interp`, fill uncovered pixels with 0, and return a
/// `CarrierReal` image sized per `canvas`.
pub fn rotate(img: &RasterImage, degrees: f64, interp: Interp, canvas: Canvas) -> RasterImage {
    let mut d = degrees % 360.0;
    if d < 0.0 {
        d += 360.0;
    }
    if d == 0.0 {
        return img.clone();
    }
    if d == 90.0 || d == 180.0 || d == 270.0 {
        return rotate_exact(img, d as u32);
    }
    rotate_resampled(img, d, interp, canvas)
}

fn rotate_exact(img: &RasterImage, quarter_degrees: u32) -> RasterImage {
    let (w, h) = img.dims();
    let planes = img
        .planes()
        .iter()
        .map(|p| match quarter_degrees {
            // clockwise quarter turn: (x, y) -> (h - 1 - y, x)
            90 => {
                let mut out = PixelPlane::new(h, w);
                for y in 0..w {
                    for x in 0..h {
                        out.set(x, y, p.get(y, h - 1 - x));
                    }
                }
                out
            }
            180 => {
                let mut out = PixelPlane::new(w, h);
                for y in 0..h {
                    for x in 0..w {
                        out.set(x, y, p.get(w - 1 - x, h - 1 - y));
                    }
                }
                out
            }
            270 => {
                let mut out = PixelPlane::new(h, w);
                for y in 0..w {
                    for x in 0..h {
                        out.set(x, y, p.get(w - 1 - y, x));
                    }
                }
                out
            }
            _ => unreachable!(),
        })
        .collect();
    RasterImage::new(planes, img.precision())
}

fn rotate_resampled(img: &RasterImage, degrees: f64, interp: Interp, canvas: Canvas) -> RasterImage {
    let (w, h) = img.dims();
    let theta = degrees * (math::PI / 180.0);
    let (sin, cos) = (math::sin(theta), math::cos(theta));

    let (dst_w, dst_h) = match canvas {
        Canvas::KeepSize => (w, h),
        Canvas::Expand => {
            let bw = w as f64 * math::abs(cos) + h as f64 * math::abs(sin);
            let bh = w as f64 * math::abs(sin) + h as f64 * math::abs(cos);
            (
                math::ceil(bw - 1e-9).max(1.0) as usize,
                math::ceil(bh - 1e-9).max(1.0) as usize,
            )
        }
    };

    let src_cx = (w as f64 - 1.0) / 2.0;
    let src_cy = (h as f64 - 1.0) / 2.0;
    let dst_cx = (dst_w as f64 - 1.0) / 2.0;
    let dst_cy = (dst_h as f64 - 1.0) / 2.0;

    let planes = img
        .planes()
        .iter()
        .map(|p| {
            let mut out = Vec::with_capacity(dst_w * dst_h);
            for y in 0..dst_h {
                let dy = y as f64 - dst_cy;
                for x in 0..dst_w {
                    let dx = x as f64 - dst_cx;
                    // inverse of the clockwise screen-space rotation
                    let sx = dx * cos + dy * sin + src_cx;
                    let sy = -dx * sin + dy * cos + src_cy;
                    let inside = sx >= -0.5
                        && sx <= w as f64 - 0.5
                        && sy >= -0.5
                        && sy <= h as f64 - 0.5;
                    out.push(if inside {
                        sample_clamped(p, sx, sy, interp)
                    } else {
                        0.0
                    });
                }
            }
            PixelPlane::from_samples(dst_w, dst_h, out)
        })
        .collect();
    RasterImage::new(planes, Precision::CarrierReal)
}

fn sample_clamped(plane: &PixelPlane, sx: f64, sy: f64, interp: Interp) -> f64 {
    match interp {
        Interp::Nearest => {
            let x = math::floor(sx + 0.5) as isize;
            let y = math::floor(sy + 0.5) as isize;
            plane.get_clamped(x, y)
        }
        Interp::Bilinear => {
            let x0 = math::floor(sx);
            let y0 = math::floor(sy);
            let tx = sx - x0;
            let ty = sy - y0;
            let (x0, y0) = (x0 as isize, y0 as isize);
            let p00 = plane.get_clamped(x0, y0);
            let p10 = plane.get_clamped(x0 + 1, y0);
            let p01 = plane.get_clamped(x0, y0 + 1);
            let p11 = plane.get_clamped(x0 + 1, y0 + 1);
            let top = (1.0 - tx) * p00 + tx * p10;
            let bottom = (1.0 - tx) * p01 + tx * p11;
            (1.0 - ty) * top + ty * bottom
        }
    }
}

/// Extracts the `w` x `h` window whose top-left corner is `(x0, y0)`.
pub fn crop(img: &RasterImage, x0: usize, y0: usize, w: usize, h: usize) -> RasterImage {
    assert!(x0 + w <= img.width() && y0 + h <= img.height(), "crop window out of bounds");
    let planes = img
        .planes()
        .iter()
        .map(|p| {
            let mut out = Vec::with_capacity(w * h);
            for y in 0..h {
                out.extend_from_slice(&p.row(y0 + y)[x0..x0 + w]);
            }
            PixelPlane::from_samples(w, h, out)
        })
        .collect();
    RasterImage::new(planes, img.precision())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pixel::Precision;
    use crate::rng::SequenceStream;
    use alloc::vec::Vec;

    fn random_luma(w: usize, h: usize, seed: u64) -> RasterImage {
        let mut s = SequenceStream::new(seed);
        let bytes: Vec<u8> = (0..w * h).map(|_| (s.next_u64() & 0xFF) as u8).collect();
        RasterImage::from_luma8(w, h, &bytes)
    }

    #[test]
    fn resize_to_same_dims_is_identity_on_samples() {
        let img = random_luma(7, 5, 1);
        for interp in [Interp::Nearest, Interp::Bilinear] {
            let out = resize(&img, 7, 5, interp);
            assert_eq!(out.plane(0).samples(), img.plane(0).samples());
        }
    }

    #[test]
    fn resize_constant_stays_constant() {
        let img = RasterImage::constant(4, 4, 99.0, Precision::Carrier8);
        for interp in [Interp::Nearest, Interp::Bilinear] {
            let out = resize(&img, 13, 2, interp);
            assert!(out.plane(0).samples().iter().all(|&s| s == 99.0));
        }
    }

    #[test]
    fn nearest_upscale_then_downscale_recovers_original() {
        for seed in 0..20 {
            let img = random_luma(8, 8, seed);
            let up = resize(&img, 16, 16, Interp::Nearest);
            let down = resize(&up, 8, 8, Interp::Nearest);
            assert_eq!(down.plane(0).samples(), img.plane(0).samples());
        }
    }

    #[test]
    fn nearest_output_only_contains_input_values() {
        let img = random_luma(6, 4, 3);
        let out = resize(&img, 17, 9, Interp::Nearest);
        for s in out.plane(0).samples() {
            assert!(img.plane(0).samples().contains(s));
        }
    }

    #[test]
    fn rotate_90_four_times_is_identity() {
        let img = random_luma(5, 3, 7);
        let mut cur = img.clone();
        for _ in 0..4 {
            cur = rotate(&cur, 90.0, Interp::Nearest, Canvas::Expand);
        }
        assert_eq!(cur, img);
    }

    #[test]
    fn rotate_180_flips_rows_and_columns() {
        let img = RasterImage::from_luma8(2, 2, &[1, 2, 3, 4]);
        let out = rotate(&img, 180.0, Interp::Bilinear, Canvas::KeepSize);
        assert_eq!(out.plane(0).samples(), &[4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn rotate_360_is_identity_any_interp() {
        let img = random_luma(4, 6, 9);
        for interp in [Interp::Nearest, Interp::Bilinear] {
            assert_eq!(rotate(&img, 360.0, interp, Canvas::Expand), img);
        }
    }

    #[test]
    fn rotate_negative_quarter_equals_positive_three_quarters() {
        let img = random_luma(4, 3, 11);
        let a = rotate(&img, -90.0, Interp::Nearest, Canvas::Expand);
        let b = rotate(&img, 270.0, Interp::Nearest, Canvas::Expand);
        assert_eq!(a, b);
    }

    #[test]
    fn quarter_turns_swap_dimensions_and_preserve_multiset() {
        let img = random_luma(5, 2, 13);
        let out = rotate(&img, 90.0, Interp::Nearest, Canvas::KeepSize);
        assert_eq!(out.dims(), (2, 5));
        let mut a: Vec<u64> = img.plane(0).samples().iter().map(|&s| s as u64).collect();
        let mut b: Vec<u64> = out.plane(0).samples().iter().map(|&s| s as u64).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }

    #[test]
    fn quarter_turns_preserve_precision_tag() {
        let img = random_luma(3, 3, 17);
        assert_eq!(
            rotate(&img, 90.0, Interp::Nearest, Canvas::Expand).precision(),
            Precision::Carrier8
        );
        assert_eq!(
            rotate(&img, 45.0, Interp::Nearest, Canvas::Expand).precision(),
            Precision::CarrierReal
        );
    }

    #[test]
    fn expand_canvas_covers_rotated_bounding_box() {
        let img = random_luma(10, 10, 19);
        let out = rotate(&img, 45.0, Interp::Bilinear, Canvas::Expand);
        // 10 * sqrt(2) = 14.14 -> 15
        assert_eq!(out.dims(), (15, 15));
    }

    #[test]
    fn crop_extracts_window() {
        let img = RasterImage::from_luma8(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let out = crop(&img, 1, 1, 2, 2);
        assert_eq!(out.plane(0).samples(), &[5.0, 6.0, 8.0, 9.0]);
    }
}

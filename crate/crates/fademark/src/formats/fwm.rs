//! FWM: the full-precision carrier container.
//!
//! Layout: magic `FWM1`, little-endian `u32` width, height, channels, then
//! `width * height * channels` little-endian `f64` samples, plane-major,
//! row-major within each plane. This is the only format that can hold an
//! unquantized watermarked image, which exact-carrier extraction depends on.

use fademark_core::pixel::{PixelPlane, Precision, RasterImage};

use super::{ByteReader, FormatError};

const MAGIC: &[u8; 4] = b"FWM1";

pub(super) fn decode(bytes: &[u8]) -> Result<RasterImage, FormatError> {
    let bad = |msg: &str| FormatError::MalformedHeader(msg.to_string());
    let mut r = ByteReader::new(bytes);
    let magic = r.take(4).ok_or_else(|| bad("file shorter than magic"))?;
    if magic != MAGIC {
        return Err(bad("missing FWM1 signature"));
    }
    let width = r.u32_le().ok_or_else(|| bad("truncated header"))? as usize;
    let height = r.u32_le().ok_or_else(|| bad("truncated header"))? as usize;
    let channels = r.u32_le().ok_or_else(|| bad("truncated header"))? as usize;
    if width == 0 || height == 0 || channels == 0 {
        return Err(bad("zero dimension"));
    }
    let per_plane = width
        .checked_mul(height)
        .ok_or_else(|| bad("dimension overflow"))?;
    let expected = per_plane
        .checked_mul(channels)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| bad("dimension overflow"))?;
    if r.remaining() < expected {
        return Err(FormatError::TruncatedPixelData);
    }
    if r.remaining() > expected {
        return Err(bad("trailing bytes after sample data"));
    }

    let planes = (0..channels)
        .map(|_| {
            let samples = (0..per_plane).map(|_| r.f64_le().unwrap()).collect();
            PixelPlane::from_samples(width, height, samples)
        })
        .collect();
    Ok(RasterImage::new(planes, Precision::CarrierReal))
}

pub(super) fn encode(img: &RasterImage) -> Vec<u8> {
    debug_assert_eq!(img.precision(), Precision::CarrierReal);
    let (w, h) = img.dims();
    let mut out = Vec::with_capacity(16 + img.sample_count() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(w as u32).to_le_bytes());
    out.extend_from_slice(&(h as u32).to_le_bytes());
    out.extend_from_slice(&(img.channels() as u32).to_le_bytes());
    for plane in img.planes() {
        for &s in plane.samples() {
            out.extend_from_slice(&s.to_le_bytes());
        }
    }
    out
}

//! Binary PGM (`P5`) and PPM (`P6`), maxval 255.

use fademark_core::pixel::{Precision, RasterImage};

use super::{FormatError, ImageFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Kind {
    Pgm,
    Ppm,
}

impl Kind {
    fn magic(self) -> &'static [u8] {
        match self {
            Kind::Pgm => b"P5",
            Kind::Ppm => b"P6",
        }
    }

    fn channels(self) -> usize {
        match self {
            Kind::Pgm => 1,
            Kind::Ppm => 3,
        }
    }

    fn format(self) -> ImageFormat {
        match self {
            Kind::Pgm => ImageFormat::Pgm,
            Kind::Ppm => ImageFormat::Ppm,
        }
    }
}

pub(super) fn decode(bytes: &[u8], kind: Kind) -> Result<RasterImage, FormatError> {
    let bad = |msg: &str| FormatError::MalformedHeader(msg.to_string());
    if bytes.len() < 2 || &bytes[..2] != kind.magic() {
        return Err(bad("wrong magic number"));
    }
    let mut pos = 2;
    let width = read_header_int(bytes, &mut pos).ok_or_else(|| bad("missing width"))?;
    let height = read_header_int(bytes, &mut pos).ok_or_else(|| bad("missing height"))?;
    let maxval = read_header_int(bytes, &mut pos).ok_or_else(|| bad("missing maxval"))?;
    if width == 0 || height == 0 {
        return Err(bad("zero dimension"));
    }
    if maxval != 255 {
        return Err(bad("only maxval 255 is supported"));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(bad("missing raster separator")),
    }

    let expected = width * height * kind.channels();
    let raster = bytes
        .get(pos..pos + expected)
        .ok_or(FormatError::TruncatedPixelData)?;

    match kind {
        Kind::Pgm => Ok(RasterImage::from_luma8(width, height, raster)),
        Kind::Ppm => {
            let mut r = Vec::with_capacity(width * height);
            let mut g = Vec::with_capacity(width * height);
            let mut b = Vec::with_capacity(width * height);
            for px in raster.chunks_exact(3) {
                r.push(px[0]);
                g.push(px[1]);
                b.push(px[2]);
            }
            Ok(RasterImage::from_rgb8(width, height, &r, &g, &b))
        }
    }
}

/// Reads one decimal header field, skipping whitespace and `#` comments.
fn read_header_int(bytes: &[u8], pos: &mut usize) -> Option<usize> {
    loop {
        match bytes.get(*pos)? {
            b if b.is_ascii_whitespace() => *pos += 1,
            b'#' => {
                while !matches!(bytes.get(*pos), None | Some(b'\n')) {
                    *pos += 1;
                }
            }
            _ => break,
        }
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
        *pos += 1;
    }
    if *pos == start {
        return None;
    }
    std::str::from_utf8(&bytes[start..*pos]).ok()?.parse().ok()
}

pub(super) fn encode(img: &RasterImage, kind: Kind) -> Result<Vec<u8>, FormatError> {
    debug_assert_eq!(img.precision(), Precision::Carrier8);
    if img.channels() != kind.channels() {
        return Err(FormatError::ChannelMismatch {
            format: kind.format(),
            channels: img.channels(),
        });
    }
    let (w, h) = img.dims();
    let mut out = Vec::with_capacity(16 + w * h * kind.channels());
    out.extend_from_slice(kind.magic());
    out.extend_from_slice(format!("\n{w} {h}\n255\n").as_bytes());
    match kind {
        Kind::Pgm => {
            out.extend(img.plane(0).samples().iter().map(|&s| s as u8));
        }
        Kind::Ppm => {
            let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
            for i in 0..w * h {
                out.push(r.samples()[i] as u8);
                out.push(g.samples()[i] as u8);
                out.push(b.samples()[i] as u8);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{load_image, save_image, ImageFormat};

    #[test]
    fn pgm_spec_example() {
        let bytes = b"P5 2 2 255 \x00\x80\xFF\x07";
        let img = load_image(bytes, ImageFormat::Pgm).unwrap();
        assert_eq!(img.dims(), (2, 2));
        assert_eq!(img.plane(0).samples(), &[0.0, 128.0, 255.0, 7.0]);
    }

    #[test]
    fn constant_gray_payload() {
        let img = RasterImage::constant(4, 4, 128.0, Precision::Carrier8);
        let bytes = save_image(&img, ImageFormat::Pgm).unwrap();
        assert!(bytes.ends_with(&[0x80; 16]));
    }

    #[test]
    fn comments_are_skipped() {
        let bytes = b"P5\n# produced by hand\n2 1\n# another note\n255\n\x01\x02";
        let img = load_image(bytes, ImageFormat::Pgm).unwrap();
        assert_eq!(img.plane(0).samples(), &[1.0, 2.0]);
    }

    #[test]
    fn ppm_round_trip() {
        let img = RasterImage::from_rgb8(2, 2, &[1, 2, 3, 4], &[5, 6, 7, 8], &[9, 10, 11, 12]);
        let bytes = save_image(&img, ImageFormat::Ppm).unwrap();
        assert_eq!(load_image(&bytes, ImageFormat::Ppm).unwrap(), img);
    }

    #[test]
    fn non_255_maxval_is_rejected() {
        assert!(matches!(
            load_image(b"P5 1 1 65535 \x00\x00", ImageFormat::Pgm),
            Err(FormatError::MalformedHeader(_))
        ));
    }

    #[test]
    fn short_raster_is_truncation() {
        assert!(matches!(
            load_image(b"P5 4 4 255 \x01\x02", ImageFormat::Pgm),
            Err(FormatError::TruncatedPixelData)
        ));
    }

    #[test]
    fn channel_mismatch_is_rejected_on_write() {
        let rgb = RasterImage::from_rgb8(1, 1, &[1], &[2], &[3]);
        assert!(matches!(
            save_image(&rgb, ImageFormat::Pgm),
            Err(FormatError::ChannelMismatch { .. })
        ));
        let gray = RasterImage::from_luma8(1, 1, &[1]);
        assert!(matches!(
            save_image(&gray, ImageFormat::Ppm),
            Err(FormatError::ChannelMismatch { .. })
        ));
    }
}

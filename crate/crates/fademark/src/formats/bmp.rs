//! Uncompressed Windows BMP: 8-bit indexed grayscale and 24-bit BGR.

use fademark_core::pixel::{PixelPlane, Precision, RasterImage};

use super::{ByteReader, FormatError, ImageFormat};

const FILE_HEADER_LEN: usize = 14;
const INFO_HEADER_LEN: usize = 40;
const PALETTE_LEN: usize = 256 * 4;

pub(super) fn decode(bytes: &[u8]) -> Result<RasterImage, FormatError> {
    let mut r = ByteReader::new(bytes);
    let bad = |msg: &str| FormatError::MalformedHeader(msg.to_string());

    let magic = r.take(2).ok_or_else(|| bad("file shorter than magic"))?;
    if magic != b"BM" {
        return Err(bad("missing BM signature"));
    }
    let _file_size = r.u32_le().ok_or_else(|| bad("truncated file header"))?;
    let _reserved = r.u32_le().ok_or_else(|| bad("truncated file header"))?;
    let data_offset = r.u32_le().ok_or_else(|| bad("truncated file header"))? as usize;

    let info_size = r.u32_le().ok_or_else(|| bad("truncated info header"))? as usize;
    if !matches!(info_size, 40 | 52 | 56 | 108 | 124) {
        return Err(FormatError::UnsupportedBmpVariant(format!(
            "info header size {info_size}"
        )));
    }
    let width = r.i32_le().ok_or_else(|| bad("truncated info header"))?;
    let raw_height = r.i32_le().ok_or_else(|| bad("truncated info header"))?;
    let _planes = r.u16_le().ok_or_else(|| bad("truncated info header"))?;
    let bit_count = r.u16_le().ok_or_else(|| bad("truncated info header"))?;
    let compression = r.u32_le().ok_or_else(|| bad("truncated info header"))?;
    let _size_image = r.u32_le().ok_or_else(|| bad("truncated info header"))?;
    let _xppm = r.i32_le().ok_or_else(|| bad("truncated info header"))?;
    let _yppm = r.i32_le().ok_or_else(|| bad("truncated info header"))?;
    let colors_used = r.u32_le().ok_or_else(|| bad("truncated info header"))?;
    let _colors_important = r.u32_le().ok_or_else(|| bad("truncated info header"))?;

    if compression != 0 {
        return Err(FormatError::UnsupportedBmpVariant(format!(
            "compression {compression} (only BI_RGB is supported)"
        )));
    }
    if !matches!(bit_count, 8 | 24) {
        return Err(FormatError::UnsupportedBmpVariant(format!(
            "{bit_count} bits per pixel"
        )));
    }
    if width <= 0 || raw_height == 0 {
        return Err(bad("non-positive dimensions"));
    }
    let w = width as usize;
    let top_down = raw_height < 0;
    let h = raw_height.unsigned_abs() as usize;

    // gray lookup for indexed files; identity for 24-bit
    let palette: Option<Vec<u8>> = if bit_count == 8 {
        let entries = if colors_used == 0 { 256 } else { colors_used as usize };
        if entries > 256 {
            return Err(bad("palette larger than 256 entries"));
        }
        if !r.seek(FILE_HEADER_LEN + info_size) {
            return Err(bad("palette offset beyond file"));
        }
        let mut lut = vec![0u8; 256];
        for (i, slot) in lut.iter_mut().enumerate().take(entries) {
            let quad = r
                .take(4)
                .ok_or_else(|| bad("truncated palette"))?;
            let (b, g, rr) = (quad[0], quad[1], quad[2]);
            if b != g || g != rr {
                return Err(FormatError::UnsupportedBmpVariant(format!(
                    "non-grayscale palette entry {i}"
                )));
            }
            *slot = rr;
        }
        Some(lut)
    } else {
        None
    };

    if !r.seek(data_offset) {
        return Err(bad("pixel data offset beyond file"));
    }
    let bytes_per_pixel = usize::from(bit_count / 8);
    let stride = (w * bytes_per_pixel).div_ceil(4) * 4;

    let mut rows: Vec<&[u8]> = Vec::with_capacity(h);
    for _ in 0..h {
        rows.push(r.take(stride).ok_or(FormatError::TruncatedPixelData)?);
    }
    if !top_down {
        rows.reverse();
    }

    if bit_count == 8 {
        let lut = palette.unwrap();
        let mut samples = Vec::with_capacity(w * h);
        for row in rows {
            samples.extend(row[..w].iter().map(|&i| lut[usize::from(i)]));
        }
        Ok(RasterImage::from_luma8(w, h, &samples))
    } else {
        let mut red = Vec::with_capacity(w * h);
        let mut green = Vec::with_capacity(w * h);
        let mut blue = Vec::with_capacity(w * h);
        for row in rows {
            for px in row[..w * 3].chunks_exact(3) {
                blue.push(px[0]);
                green.push(px[1]);
                red.push(px[2]);
            }
        }
        Ok(RasterImage::from_rgb8(w, h, &red, &green, &blue))
    }
}

pub(super) fn encode(img: &RasterImage) -> Result<Vec<u8>, FormatError> {
    debug_assert_eq!(img.precision(), Precision::Carrier8);
    match img.channels() {
        1 => Ok(encode_gray8(img.plane(0))),
        3 => Ok(encode_bgr24(img)),
        channels => Err(FormatError::ChannelMismatch {
            format: ImageFormat::Bmp,
            channels,
        }),
    }
}

fn encode_gray8(plane: &PixelPlane) -> Vec<u8> {
    let (w, h) = (plane.width(), plane.height());
    let stride = w.div_ceil(4) * 4;
    let data_offset = FILE_HEADER_LEN + INFO_HEADER_LEN + PALETTE_LEN;
    let file_size = data_offset + stride * h;

    let mut out = Vec::with_capacity(file_size);
    write_file_header(&mut out, file_size, data_offset);
    write_info_header(&mut out, w, h, 8, stride * h, 256);
    for i in 0..=255u8 {
        out.extend_from_slice(&[i, i, i, 0]);
    }
    let mut row = vec![0u8; stride];
    for y in (0..h).rev() {
        for (x, slot) in row.iter_mut().enumerate().take(w) {
            *slot = plane.get(x, y) as u8;
        }
        out.extend_from_slice(&row);
    }
    out
}

fn encode_bgr24(img: &RasterImage) -> Vec<u8> {
    let (w, h) = img.dims();
    let stride = (w * 3).div_ceil(4) * 4;
    let data_offset = FILE_HEADER_LEN + INFO_HEADER_LEN;
    let file_size = data_offset + stride * h;

    let mut out = Vec::with_capacity(file_size);
    write_file_header(&mut out, file_size, data_offset);
    write_info_header(&mut out, w, h, 24, stride * h, 0);
    let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
    let mut row = vec![0u8; stride];
    for y in (0..h).rev() {
        for x in 0..w {
            row[x * 3] = b.get(x, y) as u8;
            row[x * 3 + 1] = g.get(x, y) as u8;
            row[x * 3 + 2] = r.get(x, y) as u8;
        }
        out.extend_from_slice(&row);
    }
    out
}

fn write_file_header(out: &mut Vec<u8>, file_size: usize, data_offset: usize) {
    out.extend_from_slice(b"BM");
    out.extend_from_slice(&(file_size as u32).to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&(data_offset as u32).to_le_bytes());
}

fn write_info_header(
    out: &mut Vec<u8>,
    w: usize,
    h: usize,
    bit_count: u16,
    size_image: usize,
    colors_used: u32,
) {
    out.extend_from_slice(&(INFO_HEADER_LEN as u32).to_le_bytes());
    out.extend_from_slice(&(w as i32).to_le_bytes());
    out.extend_from_slice(&(h as i32).to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&bit_count.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes()); // BI_RGB
    out.extend_from_slice(&(size_image as u32).to_le_bytes());
    out.extend_from_slice(&0i32.to_le_bytes());
    out.extend_from_slice(&0i32.to_le_bytes());
    out.extend_from_slice(&colors_used.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
}

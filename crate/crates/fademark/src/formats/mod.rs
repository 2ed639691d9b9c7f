//! Image file formats.
//!
//! Four formats are supported:
//!
//! * BMP — Windows `BITMAPINFOHEADER`, uncompressed, 8-bit gray-palette or
//!   24-bit BGR; the writer always emits bottom-up rows, 4-byte row padding,
//!   and an identity gray palette for 8-bit files.
//! * PGM / PPM — binary (`P5` / `P6`), maxval 255.
//! * FWM — the full-precision carrier container: magic `FWM1`, little-endian
//!   `u32` width, height, channels, then `width*height*channels` little-endian
//!   `f64` samples, plane-major, row-major within each plane.
//!
//! Writers are canonical: a given image always encodes to the same bytes, and
//! decoding a canonical file reproduces it byte-for-byte on re-encode.

mod bmp;
mod fwm;
mod pnm;

use std::fmt;
use std::fs;
use std::path::Path;

use fademark_core::pixel::{Precision, RasterImage};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported bmp variant: {0}")]
    UnsupportedBmpVariant(String),
    #[error("pixel data truncated")]
    TruncatedPixelData,
    #[error("precision mismatch: {0}")]
    PrecisionMismatch(String),
    #[error("{format} cannot hold a {channels}-plane image")]
    ChannelMismatch {
        format: ImageFormat,
        channels: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Bmp,
    Pgm,
    Ppm,
    Fwm,
}

impl fmt::Display for ImageFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImageFormat::Bmp => "bmp",
            ImageFormat::Pgm => "pgm",
            ImageFormat::Ppm => "ppm",
            ImageFormat::Fwm => "fwm",
        })
    }
}

impl ImageFormat {
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "bmp" => Some(ImageFormat::Bmp),
            "pgm" => Some(ImageFormat::Pgm),
            "ppm" => Some(ImageFormat::Ppm),
            "fwm" => Some(ImageFormat::Fwm),
            _ => None,
        }
    }

    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension()
            .and_then(|e| e.to_str())
            .and_then(Self::from_extension)
    }
}

/// Decodes `bytes` as the declared format. BMP/PGM/PPM produce `Carrier8`
/// images; FWM produces `CarrierReal`.
pub fn load_image(bytes: &[u8], format: ImageFormat) -> Result<RasterImage, FormatError> {
    match format {
        ImageFormat::Bmp => bmp::decode(bytes),
        ImageFormat::Pgm => pnm::decode(bytes, pnm::Kind::Pgm),
        ImageFormat::Ppm => pnm::decode(bytes, pnm::Kind::Ppm),
        ImageFormat::Fwm => fwm::decode(bytes),
    }
}

/// Encodes an image with the canonical writer for `format`.
///
/// The 8-bit formats require a `Carrier8` image (quantize first); FWM
/// requires `CarrierReal`.
pub fn save_image(img: &RasterImage, format: ImageFormat) -> Result<Vec<u8>, FormatError> {
    match format {
        ImageFormat::Bmp | ImageFormat::Pgm | ImageFormat::Ppm => {
            if img.precision() != Precision::Carrier8 {
                return Err(FormatError::PrecisionMismatch(format!(
                    "{format} stores 8-bit samples; quantize the image first"
                )));
            }
        }
        ImageFormat::Fwm => {
            if img.precision() != Precision::CarrierReal {
                return Err(FormatError::PrecisionMismatch(
                    "fwm stores real-valued samples; 8-bit images belong in bmp/pgm/ppm".into(),
                ));
            }
        }
    }
    match format {
        ImageFormat::Bmp => bmp::encode(img),
        ImageFormat::Pgm => pnm::encode(img, pnm::Kind::Pgm),
        ImageFormat::Ppm => pnm::encode(img, pnm::Kind::Ppm),
        ImageFormat::Fwm => Ok(fwm::encode(img)),
    }
}

/// Errors from path-based loading; keeps I/O failures distinct from decode
/// failures so the CLI can map them to different exit codes.
#[derive(Debug, Error)]
pub enum FileError {
    #[error("no such file: {0}")]
    Missing(String),
    #[error("{path}: cannot determine image format from extension (use --format)")]
    UnknownFormat { path: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Decode {
        path: String,
        source: FormatError,
    },
}

/// Loads an image file, inferring the format from the extension unless one
/// is forced.
pub fn load_image_file(path: &Path, forced: Option<ImageFormat>) -> Result<RasterImage, FileError> {
    if !path.is_file() {
        return Err(FileError::Missing(path.display().to_string()));
    }
    let format = match forced.or_else(|| ImageFormat::from_path(path)) {
        Some(f) => f,
        None => {
            return Err(FileError::UnknownFormat {
                path: path.display().to_string(),
            })
        }
    };
    let bytes = fs::read(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_image(&bytes, format).map_err(|source| FileError::Decode {
        path: path.display().to_string(),
        source,
    })
}

/// Encodes and writes an image; the format comes from `forced` or the output
/// extension.
pub fn save_image_file(
    path: &Path,
    img: &RasterImage,
    forced: Option<ImageFormat>,
) -> Result<(), FileError> {
    let format = match forced.or_else(|| ImageFormat::from_path(path)) {
        Some(f) => f,
        None => {
            return Err(FileError::UnknownFormat {
                path: path.display().to_string(),
            })
        }
    };
    let bytes = save_image(img, format).map_err(|source| FileError::Decode {
        path: path.display().to_string(),
        source,
    })?;
    fs::write(path, bytes).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Byte-level reader shared by the decoders.
pub(crate) struct ByteReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub(crate) fn new(data: &'a [u8]) -> Self {
        ByteReader { data, pos: 0 }
    }

    pub(crate) fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.pos.checked_add(n)?;
        if end > self.data.len() {
            return None;
        }
        let slice = &self.data[self.pos..end];
        self.pos = end;
        Some(slice)
    }

    pub(crate) fn u16_le(&mut self) -> Option<u16> {
        self.take(2).map(|s| u16::from_le_bytes([s[0], s[1]]))
    }

    pub(crate) fn u32_le(&mut self) -> Option<u32> {
        self.take(4)
            .map(|s| u32::from_le_bytes([s[0], s[1], s[2], s[3]]))
    }

    pub(crate) fn i32_le(&mut self) -> Option<i32> {
        self.u32_le().map(|v| v as i32)
    }

    pub(crate) fn f64_le(&mut self) -> Option<f64> {
        self.take(8).map(|s| {
            f64::from_le_bytes([s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7]])
        })
    }

    pub(crate) fn seek(&mut self, pos: usize) -> bool {
        if pos > self.data.len() {
            return false;
        }
        self.pos = pos;
        true
    }

    pub(crate) fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }
}

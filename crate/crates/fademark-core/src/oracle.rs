//! Exhaustive model of quantized-carrier extraction error.
//!
//! For an 8-bit carrier the embed/extract round trip is lossy. Because each
//! output sample depends only on the (cover, logo) value pair at that pixel,
//! the entire behavior is captured by one 256x256 table per parameter set:
//! `e[f][g] = extracted(f, g) - g`. The table is built by direct simulation
//! of every pair; no closed form is attempted.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fade::FadeParams;
use crate::pixel::{clamp255, RasterImage};

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    EmptyHistogram,
    DimensionMismatch,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::EmptyHistogram => write!(f, "histogram holds no samples"),
            OracleError::DimensionMismatch => {
                write!(f, "images must share dimensions and channel counts")
            }
        }
    }
}

impl core::error::Error for OracleError {}

/// Exact extraction-error map for one parameter set under the 8-bit carrier:
/// entry `(f, g)` is the signed error of recovering logo value `g` embedded
/// into cover value `f`.
#[derive(Debug, Clone)]
pub struct ErrorTable {
    params: FadeParams,
    errors: Vec<i16>,
}

impl ErrorTable {
    #[inline]
    pub fn params(&self) -> &FadeParams {
        &self.params
    }

    /// Signed error `extracted - g` for the pair `(cover value, logo value)`.
    #[inline]
    pub fn get(&self, f: u8, g: u8) -> i16 {
        self.errors[usize::from(f) * 256 + usize::from(g)]
    }

    /// Row `f` of the table: errors for all 256 logo values.
    pub fn row(&self, f: u8) -> &[i16] {
        &self.errors[usize::from(f) * 256..usize::from(f) * 256 + 256]
    }
}

/// Simulates the quantized embed/extract round trip for every value pair.
///
/// Per pair: `h = clamp(round(a1*f + a2*g))`, then
/// `g' = clamp(round((h - round(a1*f)) / a2))`, recorded error `g' - g`.
pub fn build_error_table(params: &FadeParams) -> ErrorTable {
    let (a1, a2) = (params.alpha1(), params.alpha2());
    let rounding = params.rounding();
    let mut errors = vec![0i16; 256 * 256];
    for f in 0..256usize {
        let fv = f as f64;
        let cover_term = rounding.round(a1 * fv);
        for g in 0..256usize {
            let gv = g as f64;
            let h = clamp255(rounding.round(a1 * fv + a2 * gv));
            let recovered = clamp255(rounding.round((h - cover_term) / a2));
            errors[f * 256 + g] = recovered as i16 - g as i16;
        }
    }
    ErrorTable {
        params: *params,
        errors,
    }
}

/// Joint distribution of (cover value, logo value) pairs across an image
/// pair; the bridge between the error table and a concrete image's MSE.
#[derive(Debug, Clone)]
pub struct JointHistogram {
    counts: Vec<u64>,
    total: u64,
}

impl JointHistogram {
    pub fn new() -> Self {
        JointHistogram {
            counts: vec![0; 256 * 256],
            total: 0,
        }
    }

    /// Tallies every co-located sample pair. A single-plane logo is paired
    /// against each plane of a multi-plane cover, mirroring broadcast
    /// embedding. Inputs must be `Carrier8`.
    pub fn from_pair(cover: &RasterImage, logo: &RasterImage) -> Result<Self, OracleError> {
        if cover.dims() != logo.dims() {
            return Err(OracleError::DimensionMismatch);
        }
        let broadcast = match (cover.channels(), logo.channels()) {
            (c, l) if c == l => false,
            (3, 1) => true,
            _ => return Err(OracleError::DimensionMismatch),
        };
        let mut hist = JointHistogram::new();
        for (i, cover_plane) in cover.planes().iter().enumerate() {
            let logo_plane = logo.plane(if broadcast { 0 } else { i });
            for (&f, &g) in cover_plane.samples().iter().zip(logo_plane.samples()) {
                hist.add(f as usize, g as usize);
            }
        }
        Ok(hist)
    }

    #[inline]
    pub fn add(&mut self, f: usize, g: usize) {
        self.counts[f * 256 + g] += 1;
        self.total += 1;
    }

    #[inline]
    pub fn count(&self, f: u8, g: u8) -> u64 {
        self.counts[usize::from(f) * 256 + usize::from(g)]
    }

    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Default for JointHistogram {
    fn default() -> Self {
        Self::new()
    }
}

/// Predicted extraction MSE for any image pair with the given value-pair
/// distribution: `sum(count[f][g] * e[f][g]^2) / total`. Agrees exactly with
/// the measured MSE of a real round trip because both sums are integers.
pub fn predict_mse(
    table: &ErrorTable,
    hist: &JointHistogram,
    total: u64,
) -> Result<f64, OracleError> {
    if total == 0 || hist.total() == 0 {
        return Err(OracleError::EmptyHistogram);
    }
    debug_assert_eq!(hist.total(), total);
    let mut sum = 0.0f64;
    for f in 0..256usize {
        for g in 0..256usize {
            let c = hist.counts[f * 256 + g];
            if c > 0 {
                let e = f64::from(table.errors[f * 256 + g]);
                sum += c as f64 * e * e;
            }
        }
    }
    Ok(sum / total as f64)
}

/// Fraction of the 65536 value pairs that survive the quantized round trip
/// unchanged.
pub fn exactness_fraction(table: &ErrorTable) -> f64 {
    let zeros = table.errors.iter().filter(|&&e| e == 0).count();
    zeros as f64 / 65536.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fade::validate_params;

    #[test]
    fn worked_pairs() {
        let half = build_error_table(&validate_params(0.5).unwrap());
        assert_eq!(half.get(100, 200), 0);

        let p99 = build_error_table(&validate_params(0.99).unwrap());
        assert_eq!(p99.get(100, 200), 0);
        assert_eq!(p99.get(151, 37), 63);
    }

    #[test]
    fn errors_stay_in_signed_byte_range() {
        for a1 in [0.5, 0.75, 0.9, 0.95, 0.99] {
            let table = build_error_table(&validate_params(a1).unwrap());
            for f in 0..=255u8 {
                for g in 0..=255u8 {
                    let e = table.get(f, g);
                    assert!((-255..=255).contains(&e));
                }
            }
        }
    }

    #[test]
    fn integer_weight_products_are_error_free() {
        // where a1*f and a2*g are both exact integers nothing ever rounds
        let table = build_error_table(&validate_params(0.5).unwrap());
        for f in (0..=254u8).step_by(2) {
            for g in (0..=254u8).step_by(2) {
                assert_eq!(table.get(f, g), 0);
            }
        }
    }

    #[test]
    fn predict_mse_point_masses() {
        let table = build_error_table(&validate_params(0.99).unwrap());
        let mut hist = JointHistogram::new();
        hist.add(100, 200);
        assert_eq!(predict_mse(&table, &hist, 1).unwrap(), 0.0);

        let mut hist = JointHistogram::new();
        hist.add(151, 37);
        assert_eq!(predict_mse(&table, &hist, 1).unwrap(), 3969.0);
    }

    #[test]
    fn predict_mse_rejects_empty_histogram() {
        let table = build_error_table(&validate_params(0.5).unwrap());
        let hist = JointHistogram::new();
        assert!(matches!(
            predict_mse(&table, &hist, 0),
            Err(OracleError::EmptyHistogram)
        ));
    }

    #[test]
    fn exactness_fraction_is_a_probability() {
        for a1 in [0.5, 0.75, 0.99] {
            let f = exactness_fraction(&build_error_table(&validate_params(a1).unwrap()));
            assert!((0.0..=1.0).contains(&f));
        }
    }
}

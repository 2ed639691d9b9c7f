//! Orthonormal 8x8 type-II DCT and the standard luminance quantization table.

use crate::math;

pub const BLOCK: usize = 8;

/// Standard luminance quantization table (JPEG Annex K), row-major.
pub const LUMA_QTABLE: [i32; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Quality-scaled table: `S = 5000/q` below 50 else `200 - 2q` (integer
/// arithmetic), entry `clamp((Q*S + 50) / 100, 1, 255)`. Quality 50 returns
/// the base table; quality 100 collapses every divisor to 1.
pub fn scaled_qtable(quality: u8) -> [i32; 64] {
    debug_assert!((1..=100).contains(&quality));
    let q = i32::from(quality);
    let scale = if q < 50 { 5000 / q } else { 200 - 2 * q };
    let mut out = [0i32; 64];
    for (o, &base) in out.iter_mut().zip(LUMA_QTABLE.iter()) {
        *o = ((base * scale + 50) / 100).clamp(1, 255);
    }
    out
}

/// Precomputed orthonormal DCT-II basis: `basis[u][x] = a(u) cos((2x+1)u pi / 16)`
/// with `a(0) = sqrt(1/8)`, `a(u>0) = 1/2`.
pub struct Dct8 {
    basis: [[f64; BLOCK]; BLOCK],
}

impl Dct8 {
    pub fn new() -> Self {
        let mut basis = [[0.0; BLOCK]; BLOCK];
        let n = BLOCK as f64;
        for (u, row) in basis.iter_mut().enumerate() {
            let scale = if u == 0 {
                math::sqrt(1.0 / n)
            } else {
                math::sqrt(2.0 / n)
            };
            for (x, value) in row.iter_mut().enumerate() {
                *value = scale * math::cos((2.0 * x as f64 + 1.0) * u as f64 * math::PI / (2.0 * n));
            }
        }
        Dct8 { basis }
    }

    /// Forward 2-D transform of a row-major 8x8 block.
    pub fn forward(&self, block: &[f64; 64]) -> [f64; 64] {
        let mut rows = [0.0; 64];
        for y in 0..BLOCK {
            for u in 0..BLOCK {
                let mut acc = 0.0;
                for x in 0..BLOCK {
                    acc += self.basis[u][x] * block[y * BLOCK + x];
                }
                rows[y * BLOCK + u] = acc;
            }
        }
        let mut out = [0.0; 64];
        for v in 0..BLOCK {
            for u in 0..BLOCK {
                let mut acc = 0.0;
                for y in 0..BLOCK {
                    acc += self.basis[v][y] * rows[y * BLOCK + u];
                }
                out[v * BLOCK + u] = acc;
            }
        }
        out
    }

    /// Inverse 2-D transform of a row-major 8x8 coefficient block.
    pub fn inverse(&self, coeffs: &[f64; 64]) -> [f64; 64] {
        let mut rows = [0.0; 64];
        for v in 0..BLOCK {
            for x in 0..BLOCK {
                let mut acc = 0.0;
                for u in 0..BLOCK {
                    acc += self.basis[u][x] * coeffs[v * BLOCK + u];
                }
                rows[v * BLOCK + x] = acc;
            }
        }
        let mut out = [0.0; 64];
        for y in 0..BLOCK {
            for x in 0..BLOCK {
                let mut acc = 0.0;
                for v in 0..BLOCK {
                    acc += self.basis[v][y] * rows[v * BLOCK + x];
                }
                out[y * BLOCK + x] = acc;
            }
        }
        out
    }
}

impl Default for Dct8 {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SequenceStream;

    #[test]
    fn transform_round_trip_is_near_exact() {
        let dct = Dct8::new();
        let mut rng = SequenceStream::new(99);
        for _ in 0..200 {
            let mut block = [0.0f64; 64];
            for b in &mut block {
                *b = (rng.next_u64() & 0xFF) as f64 - 128.0;
            }
            let back = dct.inverse(&dct.forward(&block));
            for (a, b) in block.iter().zip(&back) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dc_coefficient_is_eight_times_mean() {
        let dct = Dct8::new();
        let block = [13.0f64; 64];
        let coeffs = dct.forward(&block);
        assert!((coeffs[0] - 8.0 * 13.0).abs() < 1e-9);
        for &c in &coeffs[1..] {
            assert!(c.abs() < 1e-9);
        }
    }

    #[test]
    fn transform_preserves_energy() {
        let dct = Dct8::new();
        let mut rng = SequenceStream::new(7);
        let mut block = [0.0f64; 64];
        for b in &mut block {
            *b = (rng.next_u64() & 0xFF) as f64;
        }
        let coeffs = dct.forward(&block);
        let e_spatial: f64 = block.iter().map(|v| v * v).sum();
        let e_freq: f64 = coeffs.iter().map(|v| v * v).sum();
        assert!((e_spatial - e_freq).abs() < 1e-6);
    }

    #[test]
    fn quality_scaling_endpoints() {
        assert_eq!(scaled_qtable(50), LUMA_QTABLE);
        assert!(scaled_qtable(100).iter().all(|&q| q == 1));
        // quality 10: scale 500, entries clamp at 255
        let q10 = scaled_qtable(10);
        assert_eq!(q10[0], (16 * 500 + 50) / 100);
        assert!(q10.iter().all(|&q| (1..=255).contains(&q)));
    }
}

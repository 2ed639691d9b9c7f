//! Deterministic random number generation for reproducible attacks.
//!
//! The generators here are part of the public contract: attack outputs are
//! golden-file tested, so the exact bit streams below must never change.
//!
//! * Per-sample streams: `splitmix64` seeded with
//!   `seed ^ sample_index.wrapping_mul(0x9E3779B97F4A7C15)`. Each sample of an
//!   image gets its own stream, so noise output is independent of traversal
//!   order and safe to evaluate in parallel.
//! * Uniforms: the high 53 bits of an output word, mapped to `(0, 1]` via
//!   `((bits >> 11) + 1) / 2^53`.
//! * Gaussians: Box-Muller on two successive uniforms,
//!   `sqrt(-2 ln u1) * cos(2 pi u2)`.
//! * Batch-cell seeds: `master_seed ^ fnv1a64(cell_name_bytes)`.

use crate::math;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Advances a splitmix64 state and returns the next output word.
#[inline]
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a 64-bit hash; used to derive batch-cell seeds from cell names.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

/// A counter-style stream bound to one sample of one image.
#[derive(Debug, Clone)]
pub struct SampleStream {
    state: u64,
}

impl SampleStream {
    /// Opens the stream for `sample_index` under `seed`.
    #[inline]
    pub fn new(seed: u64, sample_index: u64) -> Self {
        SampleStream {
            state: seed ^ sample_index.wrapping_mul(GOLDEN_GAMMA),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        splitmix64(&mut self.state)
    }

    /// Uniform draw in `(0, 1]` built from the high 53 bits of one word.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        unit_from_bits(self.next_u64())
    }

    /// Standard normal draw via Box-Muller on two successive uniforms.
    #[inline]
    pub fn next_standard_normal(&mut self) -> f64 {
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * math::PI * u2)
    }
}

/// A plain sequential stream, used where draw order is inherently serial
/// (e.g. the salt-and-pepper position shuffle).
#[derive(Debug, Clone)]
pub struct SequenceStream {
    state: u64,
}

impl SequenceStream {
    #[inline]
    pub fn new(seed: u64) -> Self {
        SequenceStream { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        splitmix64(&mut self.state)
    }

    /// Uniform index in `[0, bound)` via the multiply-shift reduction.
    #[inline]
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((u128::from(self.next_u64()) * u128::from(bound)) >> 64) as u64
    }

    #[inline]
    pub fn next_bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

#[inline]
fn unit_from_bits(bits: u64) -> f64 {
    ((bits >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

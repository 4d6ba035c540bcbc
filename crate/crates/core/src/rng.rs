//! Deterministic, splittable random streams.
//!
//! Every stochastic routine in this crate draws from a [`Stream`]: a
//! ChaCha8 generator keyed by a 64-bit seed and a 64-bit stream index.
//! ChaCha is counter-based, so streams with the same seed and different
//! indices are independent and can be consumed in any order by any
//! number of workers without affecting the values each stream yields.
//! Monte Carlo paths use `stream = path index`; other consumers use the
//! fixed indices below so they never collide with a path.

#[allow(unused_imports)]
use crate::fmath::F64Math;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Stream index used by boundary direction sampling.
pub const STREAM_BOUNDARY: u64 = 1 << 48;
/// Stream index used by random body-pair generation.
pub const STREAM_BODY_GEN: u64 = (1 << 48) + 1;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn key_from_seed(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// One independent random stream.
pub struct Stream {
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::from_seed(key_from_seed(seed));
        rng.set_stream(stream);
        Stream {
            rng,
            spare_normal: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[lo, hi)`.
    #[inline]
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform draw from `0..n`.
    pub fn pick(&mut self, n: usize) -> usize {
        // Modulo bias is < 2^-50 for the n used here (tiny fixture counts).
        (self.next_u64() % n as u64) as usize
    }

    /// Standard normal draw (Marsaglia polar method).
    ///
    /// Draws are produced in pairs; the spare is cached, so consecutive
    /// calls on one stream consume the underlying generator in a
    /// deterministic (if state-dependent) pattern. Streams are never
    /// shared between paths, so this cannot couple paths.
    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s < 1.0 && s > 0.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * f);
                return u * f;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let mut a = Stream::new(7, 3);
        let mut b = Stream::new(7, 3);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn streams_differ_by_index() {
        let mut a = Stream::new(7, 0);
        let mut b = Stream::new(7, 1);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn normal_moments_are_plausible() {
        let mut s = Stream::new(42, 0);
        let n = 200_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..n {
            let z = s.standard_normal();
            m1 += z;
            m2 += z * z;
        }
        m1 /= n as f64;
        m2 /= n as f64;
        assert!(m1.abs() < 0.01, "mean {m1}");
        assert!((m2 - 1.0).abs() < 0.02, "second moment {m2}");
    }
}

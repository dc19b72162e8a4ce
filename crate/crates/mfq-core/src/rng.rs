//! Deterministic random streams.
//!
//! Every stochastic quantity in the crate (map phases, sampling shots, random
//! test states) draws from a ChaCha stream constructed from `(seed, tag,
//! index)`. The triple is packed directly into the 32-byte cipher seed, so a
//! given realization is bit-reproducible regardless of how many workers run
//! the ensemble or in which order realizations execute.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::state::QuantumState;
use crate::C64;

/// Stream tags namespace the independent uses of one user-facing seed.
pub mod tag {
    /// Map phase vectors (one stream per realization).
    pub const MAP_PHASES: u32 = 0x_0001;
    /// Measurement-shot sampling.
    pub const SAMPLING: u32 = 0x_0002;
    /// Random test/bench states.
    pub const TEST_STATES: u32 = 0x_0003;
    /// Harness-level draws (column choices, vector subsets).
    pub const HARNESS: u32 = 0x_0004;
}

/// Builds the ChaCha stream for `(seed, tag, index)`.
pub fn stream(seed: u64, tag: u32, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..12].copy_from_slice(&tag.to_le_bytes());
    key[12..20].copy_from_slice(&index.to_le_bytes());
    // Fixed salt so the all-zero triple still keys a scrambled cipher state.
    key[20..32].copy_from_slice(b"mfq-stream-1");
    ChaCha8Rng::from_seed(key)
}

/// Uniform draw from `[0, 1)` with 53-bit resolution.
pub fn uniform_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform angle in `[0, 2π)`.
pub fn uniform_angle(rng: &mut impl RngCore) -> f64 {
    uniform_f64(rng) * 2.0 * core::f64::consts::PI
}

/// A Haar-ish random state: i.i.d. complex Gaussian amplitudes, normalized.
///
/// Exact Haar distribution is irrelevant here; the point is a generic dense
/// vector with no special structure, reproducible from the stream.
pub fn random_state(n: usize, rng: &mut impl RngCore) -> QuantumState {
    let len = 1usize << n;
    let mut amplitudes = Vec::with_capacity(len);
    for _ in 0..len {
        let (a, b) = gauss_pair(rng);
        amplitudes.push(C64::new(a, b));
    }
    QuantumState::from_unnormalized(n, amplitudes)
        .expect("a Gaussian vector is nonzero with probability 1")
}

/// One Box–Muller pair of independent standard normals.
fn gauss_pair(rng: &mut impl RngCore) -> (f64, f64) {
    // Guard the log: shift u into (0, 1].
    let u = 1.0 - uniform_f64(rng);
    let v = uniform_f64(rng);
    let r = (-2.0 * u.ln()).sqrt();
    let ang = 2.0 * core::f64::consts::PI * v;
    (r * ang.cos(), r * ang.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream(7, tag::MAP_PHASES, 3).next_u64()).collect();
        let b: Vec<u64> = {
            let mut r = stream(7, tag::MAP_PHASES, 3);
            (0..4).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a[0], b[0], "same triple must reproduce the same stream");

        let mut other_index = stream(7, tag::MAP_PHASES, 4);
        let mut other_tag = stream(7, tag::SAMPLING, 3);
        let mut other_seed = stream(8, tag::MAP_PHASES, 3);
        assert_ne!(b[0], other_index.next_u64(), "index must change the stream");
        assert_ne!(b[0], other_tag.next_u64(), "tag must change the stream");
        assert_ne!(b[0], other_seed.next_u64(), "seed must change the stream");
    }

    #[test]
    fn uniform_draws_stay_in_range() {
        let mut rng = stream(1, tag::SAMPLING, 0);
        for _ in 0..10_000 {
            let u = uniform_f64(&mut rng);
            assert!((0.0..1.0).contains(&u), "u = {u}");
            let a = uniform_angle(&mut rng);
            assert!((0.0..2.0 * core::f64::consts::PI).contains(&a), "angle = {a}");
        }
    }

    #[test]
    fn random_state_is_normalized() {
        let mut rng = stream(2, tag::TEST_STATES, 0);
        let s = random_state(6, &mut rng);
        let norm_sq: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((norm_sq - 1.0).abs() < 1e-12, "norm² = {norm_sq}");
    }
}

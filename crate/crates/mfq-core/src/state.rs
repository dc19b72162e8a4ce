//! Unit-norm complex amplitude vectors over a computational basis.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::Error;
use crate::{Result, C64};

/// Tolerance on `|‖ψ‖² − 1|` accepted at construction.
pub const NORM_TOL: f64 = 1e-10;

/// Kahan-compensated sum: error stays O(ε) independent of term count, which
/// the moment and partition-function identities rely on at large `N`.
pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// A pure state of `n` qubits: `N = 2^n` complex amplitudes with unit norm.
///
/// The amplitude at index `i` is the coefficient of the computational basis
/// vector `|i⟩`; the squared magnitudes form a probability measure over the
/// `N` basis points.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n: usize,
    amplitudes: Vec<C64>,
}

impl QuantumState {
    /// Wraps an amplitude vector, checking the length and norm invariants.
    ///
    /// The length must be exactly `2^n` and `‖ψ‖²` must equal 1 within
    /// [`NORM_TOL`].
    pub fn new(n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let expected = 1usize
            .checked_shl(n as u32)
            .ok_or(Error::LengthMismatch { expected: usize::MAX, got: amplitudes.len() })?;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch { expected, got: amplitudes.len() });
        }
        let norm_sq = kahan_sum(amplitudes.iter().map(|a| a.norm_sqr()));
        // Written so that a NaN norm (non-finite amplitudes) is rejected.
        if !((norm_sq - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { n, amplitudes })
    }

    /// Wraps an arbitrary nonzero vector of length `2^n`, rescaling it to
    /// unit norm.
    pub fn from_unnormalized(n: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let expected = 1usize << n;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch { expected, got: amplitudes.len() });
        }
        let norm_sq = kahan_sum(amplitudes.iter().map(|a| a.norm_sqr()));
        if norm_sq == 0.0 || !norm_sq.is_finite() {
            return Err(Error::NotNormalized { norm_sq });
        }
        let inv = 1.0 / norm_sq.sqrt();
        for a in &mut amplitudes {
            *a *= inv;
        }
        Ok(Self { n, amplitudes })
    }

    /// The computational basis state `|i⟩`.
    pub fn basis(n: usize, i: usize) -> Result<Self> {
        let len = 1usize << n;
        if i >= len {
            return Err(Error::LengthMismatch { expected: len, got: i });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); len];
        amplitudes[i] = C64::new(1.0, 0.0);
        Self::new(n, amplitudes)
    }

    /// The uniform superposition with all amplitudes `2^{−n/2}`.
    pub fn uniform(n: usize) -> Self {
        let len = 1usize << n;
        let amp = C64::new(1.0 / (len as f64).sqrt(), 0.0);
        Self { n, amplitudes: vec![amp; len] }
    }

    /// Qubit count `n`.
    pub fn qubits(&self) -> usize {
        self.n
    }

    /// Dimension `N = 2^n`.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    /// Amplitude slice in basis order.
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Consumes the state, returning the raw amplitude vector.
    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// Squared magnitudes `|ψ_i|²` (the measure the density-based partition
    /// functions analyze).
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Componentwise complex conjugate.
    pub fn conjugate(&self) -> Self {
        Self { n: self.n, amplitudes: self.amplitudes.iter().map(|a| a.conj()).collect() }
    }

    /// `Σ_i |ψ_i|^{2q}`, the q-th moment of the amplitude measure.
    pub fn moment(&self, q: f64) -> f64 {
        kahan_sum(self.amplitudes.iter().map(|a| a.norm_sqr().powf(q)))
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .fold(C64::new(0.0, 0.0), |acc, z| acc + z)
    }
}

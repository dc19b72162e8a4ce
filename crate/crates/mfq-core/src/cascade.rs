//! Binomial cascade states with analytic multifractal exponents.
//!
//! A cascade state on `n` qubits assigns basis index `b₁…b_n` (most
//! significant bit first) the probability `Π_j w(b_j)` with `w(0) = p1`,
//! `w(1) = p2 = 1 − p1`; amplitudes are the positive square roots. Its
//! moments obey the exact identity `Σ_i |ψ_i|^{2q} = (p1^q + p2^q)^n`,
//! which makes the scaling exponent `τ_q = −log₂(p1^q + p2^q)` available in
//! closed form — the strongest oracle in the crate.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::Error;
use crate::state::QuantumState;
use crate::{Result, C64};

/// Parameters of a binomial cascade: depth and the two branch weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeParams {
    n: usize,
    p1: f64,
    p2: f64,
}

impl CascadeParams {
    /// Validates the depth (`n ≥ 1`) and weight (`0 < p1 < 1`); `p2` is
    /// derived as `1 − p1`.
    pub fn new(n: usize, p1: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DepthTooSmall { n });
        }
        if !(p1 > 0.0 && p1 < 1.0) {
            return Err(Error::InvalidWeight { p1 });
        }
        Ok(Self { n, p1, p2: 1.0 - p1 })
    }

    /// Cascade depth (qubit count).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight attached to a 0 digit.
    pub fn p1(&self) -> f64 {
        self.p1
    }

    /// Weight attached to a 1 digit (`1 − p1`).
    pub fn p2(&self) -> f64 {
        self.p2
    }
}

/// Builds the cascade state of `params` by `n` successive splits.
pub fn cascade_state(params: &CascadeParams) -> Result<QuantumState> {
    let (s1, s2) = (params.p1.sqrt(), params.p2.sqrt());
    let mut amps: Vec<f64> = vec![1.0];
    for _ in 0..params.n {
        let mut next = Vec::with_capacity(amps.len() * 2);
        for &a in &amps {
            next.push(a * s1);
            next.push(a * s2);
        }
        amps = next;
    }
    QuantumState::new(params.n, amps.into_iter().map(|a| C64::new(a, 0.0)).collect())
}

/// Closed-form scaling exponent `τ_q = −log₂(p1^q + (1−p1)^q)` of the
/// cascade measure.
pub fn cascade_tau_analytic(q: f64, p1: f64) -> f64 {
    let p2 = 1.0 - p1;
    -(p1.powf(q) + p2.powf(q)).log2()
}

//! Intermediate-map unitaries: dense build, fast application, and
//! eigenvector ensembles.
//!
//! The map on `N = 2^n` momentum states is
//!
//! ```text
//! U_{pp'} = (e^{iφ_p} / N) · (1 − e^{2πiNγ}) / (1 − e^{2πi(p−p'+Nγ)/N})
//! ```
//!
//! with rational `γ = n1/n2` in lowest terms and `Nγ ∉ ℤ` (otherwise the
//! kernel is singular). Independent uniform phases `φ_p` make a random-matrix
//! ensemble whose eigenvectors are multifractal. A geometric-series identity
//! factors each entry as `(1/N) Σ_q e^{2πi(p−p')q/N} e^{2πiγq}`, so the whole
//! matrix is `D_φ · F · D_γ · F⁻¹` with `F` the normalized Fourier transform
//! — which is what [`apply_isrm`] exploits to iterate states in
//! `O(N log N)` per step instead of `O(N²)`.

use alloc::boxed::Box;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::eig::{unitary_eig, EigenSystem};
use crate::error::Error;
use crate::fourier::{fft_in_place, Direction};
use crate::matrix::UnitaryMatrix;
use crate::rng::{self, tag};
use crate::state::QuantumState;
use crate::{Result, C64};

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Largest dimension accepted by the dense eigendecomposition path.
pub const DENSE_EIG_LIMIT: usize = 1 << 12;

/// Parameters of one intermediate-map realization.
#[derive(Debug, Clone, PartialEq)]
pub struct IsrmParams {
    n: usize,
    n1: u64,
    n2: u64,
    phases: Vec<f64>,
    seed: Option<u64>,
}

impl IsrmParams {
    /// Wraps explicit phases, validating the ratio and the phase range.
    pub fn with_phases(n: usize, n1: u64, n2: u64, phases: Vec<f64>) -> Result<Self> {
        let len = dimension(n)?;
        validate_ratio(len, n1, n2)?;
        if phases.len() != len {
            return Err(Error::LengthMismatch { expected: len, got: phases.len() });
        }
        for (index, &value) in phases.iter().enumerate() {
            // Negated comparison so NaN phases are rejected too.
            if !(value >= 0.0 && value < TAU) {
                return Err(Error::PhaseOutOfRange { index, value });
            }
        }
        Ok(Self { n, n1, n2, phases, seed: None })
    }

    /// Draws i.i.d. uniform phases on `[0, 2π)` from the stream keyed by
    /// `(seed, realization)`; a fixed pair reproduces the phases bitwise.
    pub fn random(n: usize, n1: u64, n2: u64, seed: u64, realization: u64) -> Result<Self> {
        let len = dimension(n)?;
        validate_ratio(len, n1, n2)?;
        let mut stream = rng::stream(seed, tag::MAP_PHASES, realization);
        let phases = (0..len).map(|_| rng::uniform_angle(&mut stream)).collect();
        Ok(Self { n, n1, n2, phases, seed: Some(seed) })
    }

    /// Qubit count `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `N = 2^n`.
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    /// Ratio numerator.
    pub fn n1(&self) -> u64 {
        self.n1
    }

    /// Ratio denominator.
    pub fn n2(&self) -> u64 {
        self.n2
    }

    /// `γ = n1/n2` as a float (exact arithmetic uses the integers instead).
    pub fn gamma(&self) -> f64 {
        self.n1 as f64 / self.n2 as f64
    }

    /// Momentum-space phases `φ_p`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Seed the phases were drawn from, if they were drawn.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

fn dimension(n: usize) -> Result<usize> {
    1usize
        .checked_shl(n as u32)
        .ok_or(Error::DimensionLimit { n, limit: usize::MAX })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn validate_ratio(len: usize, n1: u64, n2: u64) -> Result<()> {
    if n1 == 0 || n2 == 0 || gcd(n1, n2) != 1 {
        return Err(Error::NotCoprime { n1, n2 });
    }
    // Nγ integer ⇔ n2 | N·n1 ⇔ the kernel denominator vanishes at one offset.
    if (len as u128 * n1 as u128) % n2 as u128 == 0 {
        return Err(Error::SingularGamma { n: len, n1, n2 });
    }
    Ok(())
}

/// `e^{iθ}` for `θ = 2π·num/den`, with the angle reduced by exact integer
/// arithmetic before any trig call.
fn unit_phase(num: u128, den: u128) -> C64 {
    let ang = TAU * ((num % den) as f64 / den as f64);
    C64::new(ang.cos(), ang.sin())
}

/// Assembles the dense `N × N` map and certifies its unitarity.
pub fn build_isrm(params: &IsrmParams) -> Result<UnitaryMatrix> {
    let len = params.len();
    let (n1, n2) = (params.n1 as u128, params.n2 as u128);
    let nu128 = len as u128;

    // Row-independent numerator 1 − e^{2πiNγ}, reduced mod 2π exactly.
    let numer = C64::new(1.0, 0.0) - unit_phase(nu128 * n1, n2);

    // The denominator depends only on d = (p − p') mod N, so one O(N) table
    // of base[d] = numer / (N · (1 − e^{2πi(d + Nγ)/N})) covers every entry.
    let modulus = nu128 * n2;
    let base: Vec<C64> = (0..len)
        .map(|d| {
            let num = d as u128 * n2 + nu128 * n1;
            let denom = C64::new(1.0, 0.0) - unit_phase(num, modulus);
            numer / denom / len as f64
        })
        .collect();

    let mut entries = Vec::with_capacity(len * len);
    for p in 0..len {
        let phi = params.phases()[p];
        let row_phase = C64::new(phi.cos(), phi.sin());
        for pp in 0..len {
            let d = (p + len - pp) % len;
            entries.push(row_phase * base[d]);
        }
    }
    UnitaryMatrix::new(len, entries)
}

/// Applies `U^t` to a state through the Fourier factorization,
/// `O(t·N log N)` total.
pub fn apply_isrm(state: &QuantumState, params: &IsrmParams, t: u64) -> Result<QuantumState> {
    if state.qubits() != params.n {
        return Err(Error::RegisterMismatch { n_left: params.n, n_right: state.qubits() });
    }
    if t == 0 {
        return Ok(state.clone());
    }
    let len = params.len();

    // Exact rational reduction of both diagonals: e^{2πi q n1/n2} repeats
    // with period n2 in q, and φ_p is given directly.
    let gamma_diag: Vec<C64> = (0..len)
        .map(|q| unit_phase(q as u128 * params.n1 as u128, params.n2 as u128))
        .collect();
    let phase_diag: Vec<C64> =
        params.phases().iter().map(|&phi| C64::new(phi.cos(), phi.sin())).collect();

    let mut buf: Vec<C64> = state.amplitudes().to_vec();
    for _ in 0..t {
        fft_in_place(&mut buf, Direction::Inverse);
        for (z, g) in buf.iter_mut().zip(&gamma_diag) {
            *z *= g;
        }
        fft_in_place(&mut buf, Direction::Forward);
        for (z, p) in buf.iter_mut().zip(&phase_diag) {
            *z *= p;
        }
    }
    QuantumState::new(params.n, buf)
}

/// One realization of the ensemble: phases from `(seed, realization)`,
/// dense build, full eigendecomposition.
///
/// This is the unit of work both [`isrm_eigenvector_ensemble`] and parallel
/// drivers schedule; determinism comes from the keyed stream, not from
/// execution order.
pub fn isrm_eigensystem(
    n: usize,
    n1: u64,
    n2: u64,
    seed: u64,
    realization: u64,
) -> Result<EigenSystem> {
    let params = IsrmParams::random(n, n1, n2, seed, realization)?;
    let matrix = build_isrm(&params)?;
    unitary_eig(&matrix)
}

/// Eigensystems of `realizations` independent map realizations.
pub fn isrm_eigenvector_ensemble(
    n: usize,
    n1: u64,
    n2: u64,
    realizations: usize,
    seed: u64,
) -> Result<Vec<EigenSystem>> {
    isrm_eigenvector_ensemble_with_limit(n, n1, n2, realizations, seed, DENSE_EIG_LIMIT)
}

/// Same as [`isrm_eigenvector_ensemble`] with an explicit dimension cap.
pub fn isrm_eigenvector_ensemble_with_limit(
    n: usize,
    n1: u64,
    n2: u64,
    realizations: usize,
    seed: u64,
    limit: usize,
) -> Result<Vec<EigenSystem>> {
    let len = dimension(n)?;
    if len > limit {
        return Err(Error::DimensionLimit { n: len, limit });
    }
    (0..realizations)
        .map(|r| {
            isrm_eigensystem(n, n1, n2, seed, r as u64)
                .map_err(|e| Error::EnsembleMember { realization: r, source: Box::new(e) })
        })
        .collect()
}

//! Multifractal quantum states and their scaling analysis.
//!
//! This crate builds quantum states with multifractal amplitude statistics
//! (binomial cascade states, eigenvectors and iterates of an intermediate-map
//! random matrix ensemble), extracts their multifractal exponents through
//! discrete-wavelet partition functions, and emulates at statevector scale the
//! quantum procedures that would extract the same exponents on quantum
//! hardware (amplitude amplification onto the two-register diagonal, phase
//! estimation, scale-register sampling), together with an explicit
//! quantum-vs-classical operation-count model.
//!
//! The crate is `no_std` + `alloc` (disable the default `std` feature);
//! everything is pure computation on owned buffers. File formats, the CLI,
//! and parallel ensemble orchestration live in the companion `mfq-cli` crate.
//!
//! Conventions fixed throughout:
//! - The forward QFT kernel is `e^{+2πi jk/N}/√N` ([`qft`]).
//! - The wavelet band holding `2^j` detail coefficients is labeled with the
//!   scale `a = 2^{-j}`; the single approximation coefficient is stored
//!   separately and excluded from partition bands unless explicitly folded in.
//! - Log-log fits are ordinary least squares of `log₂ value` against `log₂ a`
//!   (or `log₂ N` for size scaling), over a dyadic-level window reported with
//!   every fitted exponent.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod cascade;
pub mod eig;
pub mod emulate;
pub mod error;
pub mod fourier;
pub mod isrm;
pub mod matrix;
pub mod multifractal;
pub mod rng;
pub mod state;
pub mod wavelet;

pub use cascade::{cascade_state, cascade_tau_analytic, CascadeParams};
pub use eig::{unitary_eig, unitary_eig_with, EigOptions, EigenSystem};
pub use emulate::{
    alpha_beta_exponents, build_product_state, build_product_state_with_cap, cost_model,
    grover_iteration_count, grover_select_diagonal, grover_step, phase_estimation,
    phase_estimation_for, sample_scale_register, CostReport, CostTask, GroverRun,
    PhaseEstimationResult, SampleMoment, ScaleHistogram, TwoRegisterState,
    GROVER_SUCCESS_THRESHOLD, PHASE_ESTIMATION_CAP, REGISTER_CAP,
};
pub use error::Error;
pub use fourier::{apply_diagonal_phase, qft, Direction};
pub use isrm::{
    apply_isrm, build_isrm, isrm_eigensystem, isrm_eigenvector_ensemble,
    isrm_eigenvector_ensemble_with_limit, IsrmParams, DENSE_EIG_LIMIT,
};
pub use matrix::{UnitaryMatrix, UNITARITY_TOL};
pub use multifractal::{
    default_fit_window, dq_from_tau, ensemble_log_average, ensemble_mean_average, fit_tau,
    moments_tau, partition_amplitude, partition_density, partition_unnormalized,
    partition_with, Normalization, PartitionTable, ScaleEntry, ScalingSeries,
};
pub use state::{QuantumState, NORM_TOL};
pub use wavelet::{fwt_forward, fwt_inverse, WaveletCoeffs, WaveletFilter};

/// Complex scalar used for all amplitudes and matrix entries.
pub type C64 = num_complex::Complex<f64>;

/// Result alias over the crate-wide error type.
pub type Result<T> = core::result::Result<T, Error>;

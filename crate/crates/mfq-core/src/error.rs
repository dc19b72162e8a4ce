//! Crate-wide error type.

use alloc::boxed::Box;
use core::fmt;

/// Errors reported by state construction, transforms, estimators, and the
/// emulation layer.
///
/// Every variant carries the offending numbers so callers can produce a
/// diagnostic without re-deriving them.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Vector length is not the expected power of two.
    LengthMismatch { expected: usize, got: usize },
    /// Vector length must be a power of two.
    NotPowerOfTwo { len: usize },
    /// State norm² deviates from 1 beyond the allowed tolerance.
    NotNormalized { norm_sq: f64 },
    /// Matrix fails the unitarity check `U·U† = I`.
    NotUnitary { max_deviation: f64 },
    /// Depth below the supported minimum for the operation.
    DepthTooSmall { n: usize },
    /// Wavelet filter taps violate an orthonormality invariant.
    InvalidFilter { reason: &'static str },
    /// Requested scale is not one of the registered dyadic scales.
    UnknownScale { scale: f64 },
    /// Cascade weight outside the open interval (0, 1).
    InvalidWeight { p1: f64 },
    /// Map ratio parameters must be coprime.
    NotCoprime { n1: u64, n2: u64 },
    /// `N·n1/n2` is an integer, which makes the map kernel singular.
    SingularGamma { n: usize, n1: u64, n2: u64 },
    /// Phase entry outside `[0, 2π)`.
    PhaseOutOfRange { index: usize, value: f64 },
    /// Symmetric QL iteration failed to converge within the iteration budget.
    EigNoConvergence { index: usize },
    /// An eigenpair residual `‖Uv − e^{iθ}v‖` exceeds the contract bound.
    EigResidual { index: usize, residual: f64 },
    /// Matrix dimension exceeds the configured dense-solve limit.
    DimensionLimit { n: usize, limit: usize },
    /// Register sizes disagree or exceed the two-register cap.
    RegisterCap { n: usize, cap: usize },
    /// Registers must hold the same number of qubits.
    RegisterMismatch { n_left: usize, n_right: usize },
    /// Scaling fits need at least this many distinct sizes.
    InsufficientSizes { got: usize, need: usize },
    /// Log-log fits need at least this many usable points in the window.
    InsufficientPoints { got: usize, need: usize },
    /// Sampling distribution has zero total weight.
    EmptyDistribution,
    /// Probability argument outside its valid range.
    InvalidProbability { x: f64 },
    /// Moment order rejected (e.g. `q = 1` has no generalized dimension).
    InvalidMomentOrder { q: f64 },
    /// A required model parameter was not supplied.
    MissingParameter(&'static str),
    /// Fitted or supplied exponent violates its analytic range.
    ExponentOutOfRange { name: &'static str, value: f64 },
    /// Partition tables in an ensemble do not share (depth, q, normalization).
    LayoutMismatch,
    /// A failure inside one realization of an ensemble computation.
    EnsembleMember { realization: usize, source: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::NotPowerOfTwo { len } => {
                write!(f, "length {len} is not a power of two")
            }
            Error::NotNormalized { norm_sq } => {
                write!(f, "state not normalized: |psi|^2 = {norm_sq:.17}")
            }
            Error::NotUnitary { max_deviation } => {
                write!(f, "matrix not unitary: max |U U† − I| = {max_deviation:.3e}")
            }
            Error::DepthTooSmall { n } => {
                write!(f, "depth n = {n} below the supported minimum")
            }
            Error::InvalidFilter { reason } => {
                write!(f, "invalid wavelet filter: {reason}")
            }
            Error::UnknownScale { scale } => {
                write!(f, "scale {scale} is not a registered dyadic scale")
            }
            Error::InvalidWeight { p1 } => {
                write!(f, "cascade weight p1 = {p1} outside (0, 1)")
            }
            Error::NotCoprime { n1, n2 } => {
                write!(f, "ratio {n1}/{n2} not in lowest terms")
            }
            Error::SingularGamma { n, n1, n2 } => {
                write!(f, "gamma = {n1}/{n2} gives integer N*gamma at N = {n} (singular kernel)")
            }
            Error::PhaseOutOfRange { index, value } => {
                write!(f, "phase[{index}] = {value} outside [0, 2pi)")
            }
            Error::EigNoConvergence { index } => {
                write!(f, "QL iteration exceeded its budget at eigenvalue {index}")
            }
            Error::EigResidual { index, residual } => {
                write!(f, "eigenpair {index} residual {residual:.3e} exceeds 1e-8")
            }
            Error::DimensionLimit { n, limit } => {
                write!(f, "dimension {n} exceeds dense-solve limit {limit}")
            }
            Error::RegisterCap { n, cap } => {
                write!(f, "register of {n} qubits exceeds cap {cap}")
            }
            Error::RegisterMismatch { n_left, n_right } => {
                write!(f, "register sizes differ: {n_left} vs {n_right} qubits")
            }
            Error::InsufficientSizes { got, need } => {
                write!(f, "need at least {need} distinct sizes, got {got}")
            }
            Error::InsufficientPoints { got, need } => {
                write!(f, "need at least {need} usable points in the fit window, got {got}")
            }
            Error::EmptyDistribution => write!(f, "distribution has zero total weight"),
            Error::InvalidProbability { x } => {
                write!(f, "probability {x} outside its valid range")
            }
            Error::InvalidMomentOrder { q } => {
                write!(f, "moment order q = {q} rejected")
            }
            Error::MissingParameter(name) => write!(f, "missing parameter: {name}"),
            Error::ExponentOutOfRange { name, value } => {
                write!(f, "exponent {name} = {value} outside its analytic range")
            }
            Error::LayoutMismatch => {
                write!(f, "partition tables do not share depth, moment order, and normalization")
            }
            Error::EnsembleMember { realization, ref source } => {
                write!(f, "realization {realization} failed: {source}")
            }
        }
    }
}

impl core::error::Error for Error {}

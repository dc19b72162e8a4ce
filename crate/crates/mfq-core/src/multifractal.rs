//! Multifractal exponent estimators.
//!
//! Two independent routes to the exponents τ_q:
//!
//! * **Moment scaling across sizes** ([`moments_tau`]): fit
//!   `log₂ Σ_i |ψ_i|^{2q}` against `log₂ N` over states of growing size;
//!   the slope is `−τ_q`.
//! * **Wavelet partition functions at fixed size** ([`partition_density`],
//!   [`partition_amplitude`], [`partition_unnormalized`]): transform one
//!   state, form per-band sums `Z(a, q)`, and fit `log₂ Z` against `log₂ a`
//!   — the slope is the exponent (`τ_q` for the normalized variants, `τ′_q`
//!   for the unnormalized one).
//!
//! Generalized dimensions follow as `D_q = τ_q / (q − 1)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::Error;
use crate::state::{kahan_sum, QuantumState};
use crate::wavelet::{fwt_forward, level_scale, WaveletCoeffs, WaveletFilter};
use crate::{Result, C64};

/// Which per-band statistic a partition table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Transform of `|ψ_i|²`; terms `|T| / Σ_b |T|` raised to `q`.
    Density,
    /// Transform of `ψ`; terms `|T|² / Σ_b |T|²` raised to `q`.
    Amplitude,
    /// Transform of `ψ`; plain sums `Σ_b |T|^{2q}` (no normalization).
    Unnormalized,
}

impl Normalization {
    /// Stable lowercase name used in reports and file output.
    pub fn name(self) -> &'static str {
        match self {
            Normalization::Density => "density",
            Normalization::Amplitude => "amplitude",
            Normalization::Unnormalized => "unnormalized",
        }
    }
}

/// One scale's row of a partition table.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleEntry {
    /// Dyadic level `j` (the band holds `2^j` coefficients).
    pub level: usize,
    /// Scale `a = 2^{−j}`.
    pub scale: f64,
    /// `Z(a, q)`, or `None` when the band had no usable coefficients.
    pub value: Option<f64>,
    /// Standard error of `log₂ Z` across an ensemble (`None` for a single
    /// state or a one-member average).
    pub log2_stderr: Option<f64>,
    /// How many tables contributed to this row (1 for a single state).
    pub count: usize,
    /// Zero coefficients encountered in the band.
    pub excluded_zeros: usize,
}

/// Per-scale partition values `Z(a, q)` of one state (or an ensemble
/// average) at a single moment order.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionTable {
    q: f64,
    normalization: Normalization,
    depth: usize,
    entries: Vec<ScaleEntry>,
}

impl PartitionTable {
    /// Moment order `q`.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Which statistic the values are.
    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Transform depth `n` (the table has one row per detail level).
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Rows ordered coarse to fine (level 0 up to `n − 1`).
    pub fn entries(&self) -> &[ScaleEntry] {
        &self.entries
    }
}

/// A fitted log-log scaling law.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSeries {
    /// Moment order the law was fitted at.
    pub q: f64,
    /// The fitted points: `(log₂ a, log₂ Z)` or `(log₂ N, log₂ moment)`.
    pub points: Vec<(f64, f64)>,
    /// Inclusive level range the points were taken from.
    pub fit_window: (usize, usize),
    /// Fitted exponent.
    pub tau: f64,
    /// Standard error of the fitted slope.
    pub stderr: f64,
}

/// `Z(a, q) = Σ_b (|T(a,b)| / Σ_b |T(a,b)|)^q` over the transform of
/// `|ψ_i|²`.
pub fn partition_density(
    psi: &QuantumState,
    filter: &WaveletFilter,
    q: f64,
) -> Result<PartitionTable> {
    partition_with(psi, filter, q, Normalization::Density, false)
}

/// `Z(a, q) = Σ_b (|T(a,b)|² / Σ_b |T(a,b)|²)^q` over the transform of `ψ`.
pub fn partition_amplitude(
    psi: &QuantumState,
    filter: &WaveletFilter,
    q: f64,
) -> Result<PartitionTable> {
    partition_with(psi, filter, q, Normalization::Amplitude, false)
}

/// Unnormalized sums `Σ_b |T(a,b)|^{2q}` over the transform of `ψ`.
pub fn partition_unnormalized(
    psi: &QuantumState,
    filter: &WaveletFilter,
    q: f64,
) -> Result<PartitionTable> {
    partition_with(psi, filter, q, Normalization::Unnormalized, false)
}

/// General partition computation.
///
/// `include_approx` additionally counts the approximation slot as a member
/// of the coarsest (`a = 1`) band; the default partitions use detail bands
/// only, and the switch exists for sensitivity checks (with it, the
/// unnormalized `q = 1` values sum to exactly `‖ψ‖² = 1` across bands).
pub fn partition_with(
    psi: &QuantumState,
    filter: &WaveletFilter,
    q: f64,
    normalization: Normalization,
    include_approx: bool,
) -> Result<PartitionTable> {
    let coeffs = match normalization {
        Normalization::Density => {
            let probabilities: Vec<C64> =
                psi.probabilities().into_iter().map(|p| C64::new(p, 0.0)).collect();
            fwt_forward(&probabilities, filter)?
        }
        Normalization::Amplitude | Normalization::Unnormalized => {
            fwt_forward(psi.amplitudes(), filter)?
        }
    };
    Ok(partition_of_coeffs(&coeffs, q, normalization, include_approx))
}

fn partition_of_coeffs(
    coeffs: &WaveletCoeffs,
    q: f64,
    normalization: Normalization,
    include_approx: bool,
) -> PartitionTable {
    let depth = coeffs.depth();
    let mut entries = Vec::with_capacity(depth);
    for level in 0..depth {
        // The band measure: first power of |T| for the density variant
        // (the transformed vector already holds a measure), energy |T|²
        // when the transform acted on amplitudes.
        let mut measures: Vec<f64> = coeffs
            .band_at_level(level)
            .iter()
            .map(|t| match normalization {
                Normalization::Density => t.norm(),
                _ => t.norm_sqr(),
            })
            .collect();
        if include_approx && level == 0 {
            let t = coeffs.approximation();
            measures.push(match normalization {
                Normalization::Density => t.norm(),
                _ => t.norm_sqr(),
            });
        }

        // Zero coefficients contribute nothing for q > 0 and would be
        // singular for q ≤ 0; both cases drop them and report the count.
        let excluded_zeros = measures.iter().filter(|&&m| m == 0.0).count();
        measures.retain(|&m| m != 0.0);

        let value = match normalization {
            Normalization::Unnormalized => {
                Some(kahan_sum(measures.iter().map(|&m| m.powf(q))))
            }
            Normalization::Density | Normalization::Amplitude => {
                let total = kahan_sum(measures.iter().copied());
                if total == 0.0 {
                    None
                } else {
                    Some(kahan_sum(measures.iter().map(|&m| (m / total).powf(q))))
                }
            }
        };

        entries.push(ScaleEntry {
            level,
            scale: level_scale(level),
            value,
            log2_stderr: None,
            count: 1,
            excluded_zeros,
        });
    }
    PartitionTable { q, normalization, depth, entries }
}

/// Default level window for partition fits: `[2, n − 3]` when that holds 3
/// points, widened symmetrically (fine end first) until it does.
///
/// The coarsest bands carry 1–2 coefficients and the finest are
/// filter-boundary dominated, so both ends are trimmed whenever the depth
/// allows it.
pub fn default_fit_window(depth: usize) -> (usize, usize) {
    let top = depth.saturating_sub(1);
    let mut j_min = 2.min(top);
    let mut j_max = depth.saturating_sub(3).max(j_min);
    loop {
        let points = j_max - j_min + 1;
        if points >= 3 || (j_min == 0 && j_max == top) {
            return (j_min, j_max);
        }
        if j_max + 2 < depth {
            j_max += 1;
        } else if j_min > 1 {
            j_min -= 1;
        } else if j_max < top {
            j_max += 1;
        } else {
            j_min = 0;
        }
    }
}

/// Ordinary least squares of `log₂ Z` against `log₂ a` over the usable
/// scales inside `window`; the slope is the scaling exponent.
///
/// `q` must match the table's moment order. Usable scales are those with a
/// present, finite, positive value; at least 3 are required.
pub fn fit_tau(table: &PartitionTable, q: f64, window: (usize, usize)) -> Result<ScalingSeries> {
    if q != table.q {
        return Err(Error::InvalidMomentOrder { q });
    }
    let points: Vec<(f64, f64)> = table
        .entries
        .iter()
        .filter(|e| e.level >= window.0 && e.level <= window.1)
        .filter_map(|e| match e.value {
            Some(v) if v.is_finite() && v > 0.0 => Some((-(e.level as f64), v.log2())),
            _ => None,
        })
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientPoints { got: points.len(), need: 3 });
    }
    let (tau, stderr) = ols_slope(&points);
    Ok(ScalingSeries { q, points, fit_window: window, tau, stderr })
}

/// Moment-scaling estimate of `τ_q` across states of different sizes:
/// slope of `log₂ Σ_i |ψ_i|^{2q}` against `log₂ N` equals `−τ_q`.
///
/// States sharing a size are grouped by averaging their `log₂` moments.
/// At least 3 distinct sizes are required.
pub fn moments_tau(states: &[QuantumState], q: f64) -> Result<ScalingSeries> {
    let mut by_size: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for state in states {
        let moment = state.moment(q);
        let log2_moment = moment.log2();
        if log2_moment.is_finite() {
            by_size.entry(state.qubits()).or_default().push(log2_moment);
        }
    }
    if by_size.len() < 3 {
        return Err(Error::InsufficientSizes { got: by_size.len(), need: 3 });
    }
    let points: Vec<(f64, f64)> = by_size
        .iter()
        .map(|(&n, logs)| (n as f64, kahan_sum(logs.iter().copied()) / logs.len() as f64))
        .collect();
    let window = (
        *by_size.keys().next().expect("nonempty map"),
        *by_size.keys().next_back().expect("nonempty map"),
    );
    let (slope, stderr) = ols_slope(&points);
    Ok(ScalingSeries { q, points, fit_window: window, tau: -slope, stderr })
}

/// Generalized dimension `D_q = τ_q / (q − 1)`; undefined at `q = 1`.
pub fn dq_from_tau(tau: f64, q: f64) -> Result<f64> {
    if q == 1.0 {
        return Err(Error::InvalidMomentOrder { q });
    }
    Ok(tau / (q - 1.0))
}

/// Averages an ensemble of partition tables in log space: per scale, the
/// arithmetic mean of `log₂ Z` over the tables where the scale is usable,
/// stored back as `Z = 2^{mean}` with the standard error of the mean.
pub fn ensemble_log_average(tables: &[PartitionTable]) -> Result<PartitionTable> {
    average_tables(tables, true)
}

/// Averages `Z` itself (linear mean) instead of `log₂ Z`.
///
/// A sensitivity-check companion to [`ensemble_log_average`], which is the
/// reported statistic.
pub fn ensemble_mean_average(tables: &[PartitionTable]) -> Result<PartitionTable> {
    average_tables(tables, false)
}

fn average_tables(tables: &[PartitionTable], log_space: bool) -> Result<PartitionTable> {
    let first = match tables.first() {
        Some(t) => t,
        None => return Err(Error::InsufficientPoints { got: 0, need: 1 }),
    };
    if tables.iter().any(|t| {
        t.q != first.q || t.normalization != first.normalization || t.depth != first.depth
    }) {
        return Err(Error::LayoutMismatch);
    }

    let entries = (0..first.depth)
        .map(|level| {
            let mut samples: Vec<f64> = Vec::with_capacity(tables.len());
            let mut excluded_zeros = 0;
            for table in tables {
                let entry = &table.entries[level];
                excluded_zeros += entry.excluded_zeros;
                match entry.value {
                    Some(v) if log_space && v.is_finite() && v > 0.0 => samples.push(v.log2()),
                    Some(v) if !log_space && v.is_finite() => samples.push(v),
                    _ => {}
                }
            }
            let count = samples.len();
            let (value, log2_stderr) = if count == 0 {
                (None, None)
            } else {
                let mean = kahan_sum(samples.iter().copied()) / count as f64;
                let stderr = if log_space && count >= 2 {
                    let ss = kahan_sum(samples.iter().map(|s| (s - mean) * (s - mean)));
                    Some((ss / (count as f64 * (count - 1) as f64)).sqrt())
                } else {
                    None
                };
                let value = if log_space { mean.exp2() } else { mean };
                (Some(value), stderr)
            };
            ScaleEntry {
                level,
                scale: level_scale(level),
                value,
                log2_stderr,
                count,
                excluded_zeros,
            }
        })
        .collect();

    Ok(PartitionTable {
        q: first.q,
        normalization: first.normalization,
        depth: first.depth,
        entries,
    })
}

/// Slope and slope standard error of the least-squares line through
/// `(x, y)` points.
pub(crate) fn ols_slope(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let x_mean = kahan_sum(points.iter().map(|p| p.0)) / n;
    let y_mean = kahan_sum(points.iter().map(|p| p.1)) / n;
    let sxx = kahan_sum(points.iter().map(|p| (p.0 - x_mean) * (p.0 - x_mean)));
    let sxy = kahan_sum(points.iter().map(|p| (p.0 - x_mean) * (p.1 - y_mean)));
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ssr = kahan_sum(points.iter().map(|p| {
        let r = p.1 - (intercept + slope * p.0);
        r * r
    }))
    .max(0.0);
    let dof = points.len().saturating_sub(2);
    let stderr = if dof > 0 && sxx > 0.0 { (ssr / dof as f64 / sxx).sqrt() } else { 0.0 };
    (slope, stderr)
}

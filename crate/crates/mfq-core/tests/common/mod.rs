//! Shared oracles for the integration tests: dense matrix re-implementations
//! of the fast transforms, and spectrum-prescribed unitary builders.
//!
//! Each integration test binary compiles this module separately and uses a
//! different subset of it.
#![allow(dead_code)]

use mfq_core::{C64, UnitaryMatrix, WaveletFilter};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entrywise modulus difference between two equal-length slices.
pub fn max_amp_err(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "comparing slices of different lengths");
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Row-major dense matrix product `a · b` of `dim × dim` matrices.
pub fn matmul(a: &[C64], b: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}

/// Dense row-major matrix of the full wavelet analysis pyramid on vectors of
/// length `len`.
///
/// Built purely from the filter taps: each stage is a circulant
/// convolve-and-downsample block acting on the leading coordinates, exactly
/// one row per output coefficient. Multiplying the stage matrices in order
/// yields an independent (if slow) re-implementation of the fast transform.
pub fn dense_analysis_matrix(len: usize, filter: &WaveletFilter) -> Vec<C64> {
    assert!(len.is_power_of_two() && len >= 4, "oracle needs a power of two ≥ 4");
    let lo = filter.lowpass();
    let hi = filter.highpass();
    let mut total: Vec<C64> = identity(len);
    let mut m = len;
    while m >= 2 {
        // Stage on the leading m coordinates: rows 0..m/2 take the lowpass
        // products at even shifts, rows m/2..m the highpass ones; the
        // trailing len − m coordinates pass through untouched.
        let mut stage = identity(len);
        for k in 0..m / 2 {
            for col in 0..m {
                stage[k * len + col] = c(0.0, 0.0);
                stage[(m / 2 + k) * len + col] = c(0.0, 0.0);
            }
            for (t, (&l, &h)) in lo.iter().zip(hi).enumerate() {
                let col = (2 * k + t) % m;
                stage[k * len + col] += c(l, 0.0);
                stage[(m / 2 + k) * len + col] += c(h, 0.0);
            }
        }
        total = matmul(&stage, &total, len);
        m /= 2;
    }
    total
}

/// Dense `dim × dim` identity.
pub fn identity(dim: usize) -> Vec<C64> {
    let mut out = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        out[i * dim + i] = c(1.0, 0.0);
    }
    out
}

/// `‖M·M† − I‖_max` for a dense row-major `dim × dim` matrix.
pub fn unitarity_error(m: &[C64], dim: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let mut s = c(0.0, 0.0);
            for k in 0..dim {
                s += m[i * dim + k] * m[j * dim + k].conj();
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - c(target, 0.0)).norm());
        }
    }
    worst
}

/// Dense `dim × dim` unitary with the exact prescribed eigenphase multiset.
///
/// Construction: `F† · diag(e^{iθ}) · F` with `F` the discrete Fourier
/// matrix, so eigenvector `m` is the Fourier mode of frequency `m` and the
/// spectrum is exactly `{e^{iθ_m}}` — a circulant matrix with a known
/// decomposition that never goes through the solver under test.
pub fn circulant_with_phases(phases: &[f64]) -> UnitaryMatrix {
    let dim = phases.len();
    let scale = 1.0 / (dim as f64).sqrt();
    let omega = core::f64::consts::TAU / dim as f64;
    let mut forward = vec![c(0.0, 0.0); dim * dim];
    let mut inverse_diag = vec![c(0.0, 0.0); dim * dim];
    for j in 0..dim {
        for k in 0..dim {
            let angle = omega * (j as f64) * (k as f64);
            forward[j * dim + k] = c(angle.cos(), -angle.sin()) * scale;
            // Row j of F† · diag: conjugate transpose entry times the phase.
            inverse_diag[j * dim + k] =
                c(angle.cos(), angle.sin()) * scale * c(phases[k].cos(), phases[k].sin());
        }
    }
    let entries = matmul(&inverse_diag, &forward, dim);
    UnitaryMatrix::new(dim, entries).expect("prescribed-spectrum circulant is unitary")
}

/// Wrapped circular distance between two angles.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let tau = core::f64::consts::TAU;
    let d = (a - b).rem_euclid(tau);
    d.min(tau - d)
}

/// Asserts the recovered eigenphases match `expected` as a multiset on the
/// circle, within `tol` per phase (greedy nearest matching).
pub fn assert_phase_multiset(recovered: &[f64], expected: &[f64], tol: f64, label: &str) {
    assert_eq!(recovered.len(), expected.len(), "{label}: phase count differs");
    let mut used = vec![false; recovered.len()];
    for &want in expected {
        let mut best: Option<(usize, f64)> = None;
        for (i, &got) in recovered.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = phase_distance(got, want);
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        let (i, d) = best.expect("unused phase remains");
        assert!(
            d <= tol,
            "{label}: no recovered phase within {tol:.1e} of {want:.12} (closest off by {d:.3e})"
        );
        used[i] = true;
    }
}

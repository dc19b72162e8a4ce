//! Fast end-to-end sanity checks (`mfq selftest`).
//!
//! Each suite exercises one pillar of the pipeline against an exact
//! mathematical identity, so a pass means the installed binary computes
//! the right numbers on this machine — not merely that it was once tested
//! somewhere else.  The full set runs in a few seconds.

use std::f64::consts::TAU;

use mfq_core::emulate::grover_select_diagonal;
use mfq_core::fourier::apply_diagonal_phase;
use mfq_core::isrm::{apply_isrm, build_isrm, IsrmParams};
use mfq_core::multifractal::moments_tau;
use mfq_core::rng::{random_state, stream, tag};
use mfq_core::wavelet::{fwt_forward, fwt_inverse};
use mfq_core::{
    cascade_state, cascade_tau_analytic, emulate, CascadeParams, QuantumState,
};

/// Seed for the selftest's own random draws; fixed so failures reproduce.
const SEED: u64 = 11;

type Suite = fn() -> Result<(), String>;

/// All suites with their report names.
pub const SUITES: [(&str, Suite); 6] = [
    ("wavelet_round_trip", wavelet_round_trip),
    ("map_unitarity", map_unitarity),
    ("cascade_moments", cascade_moments),
    ("amplification_rotation", amplification_rotation),
    ("phase_estimation_grid", phase_estimation_grid),
    ("eigensolver_residuals", eigensolver_residuals),
];

/// Outcome of a full selftest run.
#[derive(Debug)]
pub struct SelftestReport {
    /// Names of the suites that passed.
    pub passed: Vec<&'static str>,
    /// `(name, reason)` of the suites that failed.
    pub failed: Vec<(&'static str, String)>,
}

/// Runs every suite, reporting each line through `progress`.
pub fn run_all(mut progress: impl FnMut(&str)) -> SelftestReport {
    let mut report = SelftestReport { passed: Vec::new(), failed: Vec::new() };
    for (name, suite) in SUITES {
        match suite() {
            Ok(()) => {
                progress(&format!("selftest {name}: ok"));
                report.passed.push(name);
            }
            Err(reason) => {
                progress(&format!("selftest {name}: FAILED — {reason}"));
                report.failed.push((name, reason));
            }
        }
    }
    report
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(what()) }
}

/// Forward/inverse transform identity and energy conservation for both
/// filters across sizes.
fn wavelet_round_trip() -> Result<(), String> {
    for (filter_name, filter) in [
        ("haar", mfq_core::WaveletFilter::haar()),
        ("daub4", mfq_core::WaveletFilter::daubechies4()),
    ] {
        for n in 2..=8 {
            let mut rng = stream(SEED, tag::TEST_STATES, n as u64);
            let state = random_state(n, &mut rng);
            let coeffs = fwt_forward(state.amplitudes(), &filter)
                .map_err(|e| format!("forward transform failed: {e}"))?;
            let energy: f64 = coeffs.coeffs().iter().map(|c| c.norm_sqr()).sum();
            check((energy - 1.0).abs() < 1e-12, || {
                format!("{filter_name} n={n}: transform energy {energy} ≠ 1")
            })?;
            let back = fwt_inverse(&coeffs, &filter);
            let err = state
                .amplitudes()
                .iter()
                .zip(&back)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            check(err < 1e-12, || {
                format!("{filter_name} n={n}: round-trip error {err:e}")
            })?;
        }
    }
    Ok(())
}

/// The dense map build is unitary and agrees with the transform-based
/// application.
fn map_unitarity() -> Result<(), String> {
    let params = IsrmParams::random(6, 1, 5, SEED, 0)
        .map_err(|e| format!("parameter draw failed: {e}"))?;
    let matrix = build_isrm(&params).map_err(|e| format!("dense build failed: {e}"))?;
    let deviation = matrix.unitarity_deviation();
    check(deviation < 1e-10, || format!("unitarity deviation {deviation:e}"))?;

    let mut rng = stream(SEED, tag::TEST_STATES, 100);
    let state = random_state(6, &mut rng);
    let fast = apply_isrm(&state, &params, 1)
        .map_err(|e| format!("transform application failed: {e}"))?;
    let dense = matrix
        .matvec(state.amplitudes())
        .map_err(|e| format!("dense application failed: {e}"))?;
    let err = fast
        .amplitudes()
        .iter()
        .zip(&dense)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    check(err < 1e-10, || format!("transform vs dense mismatch {err:e}"))
}

/// Cascade moments obey the closed product form, and the cross-size moment
/// slope reproduces the closed-form exponent.
fn cascade_moments() -> Result<(), String> {
    for &p1 in &[0.2, 0.3, 0.45] {
        for &q in &[0.5, 2.0, 3.0] {
            let mut states = Vec::new();
            for n in 4..=9 {
                let psi = cascade_state(&CascadeParams::new(n, p1).expect("valid"))
                    .map_err(|e| format!("cascade build failed: {e}"))?;
                let moment = psi.moment(q);
                let expected = (p1.powf(q) + (1.0 - p1).powf(q)).powi(n as i32);
                check((moment - expected).abs() <= 1e-12 * expected.abs(), || {
                    format!("n={n} p1={p1} q={q}: moment {moment} ≠ {expected}")
                })?;
                states.push(psi);
            }
            let series = moments_tau(&states, q)
                .map_err(|e| format!("moment fit failed: {e}"))?;
            let analytic = cascade_tau_analytic(q, p1);
            check((series.tau - analytic).abs() < 1e-9, || {
                format!("p1={p1} q={q}: fitted {} vs analytic {analytic}", series.tau)
            })?;
        }
    }
    Ok(())
}

/// The amplification trace follows the two-reflection rotation law
/// `sin²((2k+1)·asin(√x))` exactly.
fn amplification_rotation() -> Result<(), String> {
    let uniform = QuantumState::uniform(3);
    let (_, run) = grover_select_diagonal(&uniform, u64::MAX)
        .map_err(|e| format!("amplification failed: {e}"))?;
    let theta = run.x.sqrt().asin();
    check((run.x - 0.125).abs() < 1e-14, || {
        format!("uniform 3-qubit diagonal weight {} ≠ 1/8", run.x)
    })?;
    for (k, &p) in run.success_probability.iter().enumerate() {
        let law = ((2 * k + 1) as f64 * theta).sin().powi(2);
        check((p - law).abs() < 1e-10, || {
            format!("step {k}: probability {p} vs rotation law {law}")
        })?;
    }
    check(!run.flagged, || "amplification flagged on an ideal trace".to_string())
}

/// Phase estimation of a diagonal unitary whose eigenphase sits on the
/// time grid is exact.
fn phase_estimation_grid() -> Result<(), String> {
    let n = 3;
    let n_time = 6;
    let target_bin = 13;
    let phase = TAU * target_bin as f64 / (1u64 << n_time) as f64;
    let mut phases = vec![0.25; 1 << n];
    phases[5] = phase;
    let psi0 = QuantumState::basis(n, 5).expect("valid basis index");
    let result = emulate::phase_estimation_for(&psi0, n_time, |s| {
        apply_diagonal_phase(s, &phases)
    })
    .map_err(|e| format!("phase estimation failed: {e}"))?;
    check(result.peak_bin == target_bin, || {
        format!("peak bin {} ≠ {target_bin}", result.peak_bin)
    })?;
    check(result.peak_probability > 1.0 - 1e-10, || {
        format!("on-grid peak probability {} < 1 − 1e-10", result.peak_probability)
    })
}

/// A full eigendecomposition of a small map realization passes the
/// residual, orthonormality, and completeness gates.
fn eigensolver_residuals() -> Result<(), String> {
    let params = IsrmParams::random(5, 1, 3, SEED, 0)
        .map_err(|e| format!("parameter draw failed: {e}"))?;
    let matrix = build_isrm(&params).map_err(|e| format!("dense build failed: {e}"))?;
    let system = mfq_core::isrm_eigensystem(5, 1, 3, SEED, 0)
        .map_err(|e| format!("eigendecomposition failed: {e}"))?;
    let residual = system
        .max_residual(&matrix)
        .map_err(|e| format!("residual check failed: {e}"))?;
    check(residual < 1e-8, || format!("max residual {residual:e}"))?;
    let ortho = system.orthonormality_deviation();
    check(ortho < 1e-10, || format!("orthonormality deviation {ortho:e}"))?;
    let complete = system.completeness_deviation();
    check(complete < 1e-10, || format!("completeness deviation {complete:e}"))
}

//! Statevector emulation of the quantum measurement procedures, plus the
//! quantum-vs-classical cost model.
//!
//! The emulated pipeline: form the two-register product `ψ ⊗ ψ*`, amplify
//! the diagonal subspace `{|i⟩|i⟩}` by Grover reflections until the
//! diagonal weight peaks, post-select it (the amplitudes there are
//! `∝ |ψ_i|²`), and read exponents from register measurements — phase
//! estimation on the time register, or scale sampling after a wavelet
//! transform. Everything runs on explicit statevectors, so register sizes
//! are capped; asymptotic costs are covered by [`cost_model`], not by the
//! emulator.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::Error;
use crate::fourier::{fft_in_place, Direction};
use crate::isrm::{apply_isrm, IsrmParams};
use crate::rng::{self, tag};
use crate::state::{kahan_sum, QuantumState, NORM_TOL};
use crate::wavelet::{fwt_forward, level_scale, WaveletCoeffs, WaveletFilter};
use crate::{multifractal, Result, C64};

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Default per-register qubit cap for explicit two-register states
/// (`2^16` amplitudes at the cap).
pub const REGISTER_CAP: usize = 8;

/// Total qubit cap (state register + time register) for emulated phase
/// estimation; matches the two-register amplitude budget.
pub const PHASE_ESTIMATION_CAP: usize = 16;

/// A diagonal-probability peak below this flags an amplification run.
pub const GROVER_SUCCESS_THRESHOLD: f64 = 0.8;

/// An explicit state of two `n`-qubit registers, indexed `(i, j) → i·N + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoRegisterState {
    n: usize,
    amplitudes: Vec<C64>,
}

impl TwoRegisterState {
    /// Wraps a length-`N²` amplitude vector, checking length and norm.
    pub fn new(n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let expected = 1usize
            .checked_shl(2 * n as u32)
            .ok_or(Error::LengthMismatch { expected: usize::MAX, got: amplitudes.len() })?;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch { expected, got: amplitudes.len() });
        }
        let norm_sq = kahan_sum(amplitudes.iter().map(|a| a.norm_sqr()));
        // Negated comparison so a NaN norm is rejected.
        if !((norm_sq - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { n, amplitudes })
    }

    /// Qubits per register.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of one register, `N = 2^n`.
    pub fn register_len(&self) -> usize {
        1usize << self.n
    }

    /// Total amplitude count `N²`.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    /// Never true: a register holds at least one amplitude.
    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Full amplitude slice in `(i, j)` row-major order.
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitude at `(i, j)`.
    pub fn amplitude(&self, i: usize, j: usize) -> C64 {
        self.amplitudes[i * self.register_len() + j]
    }

    /// The diagonal amplitudes `amp(i, i)`.
    pub fn diagonal(&self) -> Vec<C64> {
        let len = self.register_len();
        (0..len).map(|i| self.amplitudes[i * len + i]).collect()
    }

    /// Total probability on the diagonal subspace.
    pub fn diagonal_probability(&self) -> f64 {
        kahan_sum(self.diagonal().into_iter().map(|a| a.norm_sqr()))
    }
}

/// Tensor product `ψ ⊗ χ` under the default register cap.
pub fn build_product_state(psi: &QuantumState, chi: &QuantumState) -> Result<TwoRegisterState> {
    build_product_state_with_cap(psi, chi, REGISTER_CAP)
}

/// Tensor product with an explicit per-register qubit cap.
pub fn build_product_state_with_cap(
    psi: &QuantumState,
    chi: &QuantumState,
    cap: usize,
) -> Result<TwoRegisterState> {
    if psi.qubits() != chi.qubits() {
        return Err(Error::RegisterMismatch { n_left: psi.qubits(), n_right: chi.qubits() });
    }
    let n = psi.qubits();
    if n > cap {
        return Err(Error::RegisterCap { n, cap });
    }
    let len = psi.len();
    let mut amplitudes = Vec::with_capacity(len * len);
    for &a in psi.amplitudes() {
        for &b in chi.amplitudes() {
            amplitudes.push(a * b);
        }
    }
    TwoRegisterState::new(n, amplitudes)
}

/// One amplitude-amplification iteration: reflect about the complement of
/// the subspace selected by `target`, then about `initial`.
///
/// Expanding the two reflections on a start state with projected weight
/// `x` gives `(4x−3)·(target part) + (4x−1)·(rest)`; iterating from
/// `initial` rotates by `2·asin(√x)` per step in the plane those two
/// components span, up to an overall sign.
pub fn grover_step(
    state: &TwoRegisterState,
    initial: &TwoRegisterState,
    target: impl Fn(usize, usize) -> bool,
) -> Result<TwoRegisterState> {
    if state.n != initial.n {
        return Err(Error::RegisterMismatch { n_left: state.n, n_right: initial.n });
    }
    let len = state.register_len();

    // Reflection about the complement of the target subspace: negate the
    // amplitudes the predicate selects.
    let mut out: Vec<C64> = state.amplitudes.clone();
    for i in 0..len {
        for j in 0..len {
            if target(i, j) {
                out[i * len + j] = -out[i * len + j];
            }
        }
    }

    // Reflection about the initial state: s ↦ 2⟨init|s⟩·init − s, applied
    // with the overall sign of the composed operator V(I−2|0⟩⟨0|)V⁻¹,
    // i.e. s ↦ s − 2⟨init|s⟩·init.
    let overlap = initial
        .amplitudes
        .iter()
        .zip(&out)
        .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
    for (o, &a) in out.iter_mut().zip(&initial.amplitudes) {
        *o -= 2.0 * overlap * a;
    }
    TwoRegisterState::new(state.n, out)
}

/// Optimal reflection count `max(0, round(π/(4·asin(√x)) − 1/2))` for a
/// target subspace of initial weight `x`.
pub fn grover_iteration_count(x: f64) -> Result<u64> {
    // Negated comparison so NaN is rejected along with x ≤ 0 and x > 1.
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::InvalidProbability { x });
    }
    let theta = x.sqrt().asin();
    let k = (core::f64::consts::PI / (4.0 * theta) - 0.5).round();
    Ok(if k > 0.0 { k as u64 } else { 0 })
}

/// Record of one diagonal-amplification run.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverRun {
    /// Initial diagonal weight `x = Σ_i |ψ_i|⁴`.
    pub x: f64,
    /// Iteration index the run stopped at (the diagonal-probability peak).
    pub iterations: u64,
    /// Diagonal probability after `0, 1, …` iterations (`[0]` is `x`).
    pub success_probability: Vec<f64>,
    /// True when the peak stayed below [`GROVER_SUCCESS_THRESHOLD`].
    pub flagged: bool,
}

/// Amplifies the diagonal of `ψ ⊗ ψ*` and post-selects it.
///
/// Runs reflections up to the analytically optimal count (capped by
/// `max_iterations`), stops at the iteration maximizing the diagonal
/// probability, and renormalizes the diagonal amplitudes onto a single
/// `n`-qubit register. Those amplitudes are `∝ |ψ_i|²`; the global phase is
/// canonicalized so the largest-magnitude component is real positive.
pub fn grover_select_diagonal(
    psi: &QuantumState,
    max_iterations: u64,
) -> Result<(QuantumState, GroverRun)> {
    let initial = build_product_state(psi, &psi.conjugate())?;
    let x = initial.diagonal_probability();
    // x = Σ|ψ_i|⁴ ≥ 1/N > 0 for any normalized state, so this cannot fail.
    let optimal = grover_iteration_count(x)?;
    let steps = optimal.min(max_iterations);

    let mut trace = vec![x];
    let mut best = (0u64, x, initial.clone());
    let mut state = initial.clone();
    for k in 1..=steps {
        state = grover_step(&state, &initial, |i, j| i == j)?;
        let p = state.diagonal_probability();
        trace.push(p);
        if p > best.1 {
            best = (k, p, state.clone());
        }
    }

    let (iterations, peak, at_peak) = best;
    let mut diagonal = at_peak.diagonal();
    // Canonical global phase: rotate the largest component to the positive
    // real axis (the post-selected vector is only defined up to a phase).
    let principal = diagonal
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .expect("diagonal is nonempty");
    let rotation = principal.conj() / principal.norm();
    for d in &mut diagonal {
        *d *= rotation;
    }
    let selected = QuantumState::from_unnormalized(psi.qubits(), diagonal)?;

    let run = GroverRun {
        x,
        iterations,
        success_probability: trace,
        flagged: peak < GROVER_SUCCESS_THRESHOLD,
    };
    Ok((selected, run))
}

/// Outcome distribution of an emulated phase estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEstimationResult {
    /// Time-register qubits `n_t` (the grid has `2^{n_t}` bins).
    pub n_time: usize,
    /// Probability of measuring each time-register bin `m`.
    pub histogram: Vec<f64>,
    /// Bin with the highest probability (first such bin on a tie).
    pub peak_bin: usize,
    /// Probability at the peak bin.
    pub peak_probability: f64,
}

impl PhaseEstimationResult {
    /// Grid phase `2πm / 2^{n_t}` a bin estimates.
    pub fn grid_phase(&self, bin: usize) -> f64 {
        TAU * bin as f64 / self.histogram.len() as f64
    }
}

/// Phase estimation against an arbitrary unitary given as a one-step
/// closure (must apply the same unitary on every call).
///
/// Emulates one register plus a time register: builds the uniform-time
/// superposition `2^{−n_t/2} Σ_t |t⟩ U^t|ψ₀⟩`, Fourier-transforms the time
/// register, and returns its measurement distribution. A peak at bin `m`
/// estimates an eigenphase `θ ≈ 2πm/2^{n_t}` of the eigenvectors `ψ₀`
/// overlaps.
pub fn phase_estimation_for(
    psi0: &QuantumState,
    n_time: usize,
    step: impl Fn(&QuantumState) -> Result<QuantumState>,
) -> Result<PhaseEstimationResult> {
    let total = psi0.qubits() + n_time;
    if total > PHASE_ESTIMATION_CAP {
        return Err(Error::RegisterCap { n: total, cap: PHASE_ESTIMATION_CAP });
    }
    let bins = 1usize << n_time;
    let state_len = psi0.len();

    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(bins);
    rows.push(psi0.amplitudes().to_vec());
    let mut current = psi0.clone();
    for _ in 1..bins {
        current = step(&current)?;
        rows.push(current.amplitudes().to_vec());
    }

    // Per state-register component, transform the time column. The
    // e^{−2πimt/2^{n_t}} kernel puts the peak for an eigenphase θ at
    // m ≈ θ·2^{n_t}/2π.
    let scale = 1.0 / (bins as f64).sqrt();
    let mut histogram = vec![0.0; bins];
    let mut column = vec![C64::new(0.0, 0.0); bins];
    for i in 0..state_len {
        for (t, slot) in column.iter_mut().enumerate() {
            *slot = rows[t][i] * scale;
        }
        fft_in_place(&mut column, Direction::Inverse);
        for (h, value) in histogram.iter_mut().zip(&column) {
            *h += value.norm_sqr();
        }
    }

    let peak_bin = histogram
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(m, _)| m)
        .expect("histogram is nonempty");
    let peak_probability = histogram[peak_bin];
    Ok(PhaseEstimationResult { n_time, histogram, peak_bin, peak_probability })
}

/// Phase estimation of an intermediate-map unitary on `ψ₀`.
pub fn phase_estimation(
    params: &IsrmParams,
    psi0: &QuantumState,
    n_time: usize,
) -> Result<PhaseEstimationResult> {
    phase_estimation_for(psi0, n_time, |s| apply_isrm(s, params, 1))
}

/// Which power of `|T|` weights the scale-register distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMoment {
    /// Weights `Σ_b |T(a,b)|²` — measuring directly after the transform.
    Two,
    /// Weights `Σ_b |T(a,b)|⁴` — measuring the diagonal-amplified state.
    Four,
}

impl SampleMoment {
    /// The moment order as an integer.
    pub fn order(self) -> u8 {
        match self {
            SampleMoment::Two => 2,
            SampleMoment::Four => 4,
        }
    }

    /// Parses the order; only 2 and 4 are meaningful.
    pub fn from_order(order: u8) -> Result<Self> {
        match order {
            2 => Ok(SampleMoment::Two),
            4 => Ok(SampleMoment::Four),
            _ => Err(Error::InvalidMomentOrder { q: order as f64 }),
        }
    }
}

/// Empirical scale-register measurement record.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleHistogram {
    /// Scale `a = 2^{−j}` per detail band, coarse to fine.
    pub scales: Vec<f64>,
    /// Exact sampling distribution the shots were drawn from.
    pub probabilities: Vec<f64>,
    /// Shots that landed in each band.
    pub counts: Vec<u64>,
    /// `counts / shots`.
    pub frequencies: Vec<f64>,
    /// Total shots drawn.
    pub shots: u64,
}

/// Draws `shots` scale labels with probability `∝ Σ_b |T(a,b)|^moment`
/// over the detail bands, deterministically from `seed`.
pub fn sample_scale_register(
    coeffs: &WaveletCoeffs,
    moment: SampleMoment,
    shots: u64,
    seed: u64,
) -> Result<ScaleHistogram> {
    if shots == 0 {
        return Err(Error::InsufficientPoints { got: 0, need: 1 });
    }
    let depth = coeffs.depth();
    let weights: Vec<f64> = (0..depth)
        .map(|level| {
            kahan_sum(coeffs.band_at_level(level).iter().map(|t| {
                let e = t.norm_sqr();
                match moment {
                    SampleMoment::Two => e,
                    SampleMoment::Four => e * e,
                }
            }))
        })
        .collect();
    let total = kahan_sum(weights.iter().copied());
    if !(total > 0.0) {
        return Err(Error::EmptyDistribution);
    }

    let mut cumulative = Vec::with_capacity(depth);
    let mut running = 0.0;
    for &w in &weights {
        running += w;
        cumulative.push(running);
    }

    let mut stream = rng::stream(seed, tag::SAMPLING, 0);
    let mut counts = vec![0u64; depth];
    for _ in 0..shots {
        let u = rng::uniform_f64(&mut stream) * total;
        let band = cumulative.partition_point(|&c| c <= u).min(depth - 1);
        counts[band] += 1;
    }

    Ok(ScaleHistogram {
        scales: (0..depth).map(level_scale).collect(),
        probabilities: weights.iter().map(|w| w / total).collect(),
        frequencies: counts.iter().map(|&c| c as f64 / shots as f64).collect(),
        counts,
        shots,
    })
}

/// Fits both measurement exponents over states of growing size: `α` from
/// `Σ_i |ψ_i|⁴ ~ N^{−α}` and `β` from `Σ_{a,b} |T_ψ(a,b)|⁴ ~ N^{−β}`
/// (detail bands of the transform of `ψ`).
///
/// Needs at least 3 distinct sizes with nonzero statistics.
pub fn alpha_beta_exponents(
    states: &[QuantumState],
    filter: &WaveletFilter,
) -> Result<(f64, f64)> {
    let alpha = multifractal::moments_tau(states, 2.0)?.tau;

    let mut detail_fourth: Vec<(f64, f64)> = Vec::with_capacity(states.len());
    for state in states {
        let coeffs = fwt_forward(state.amplitudes(), filter)?;
        let sum = kahan_sum(coeffs.coeffs()[1..].iter().map(|t| {
            let e = t.norm_sqr();
            e * e
        }));
        let log2_sum = sum.log2();
        if log2_sum.is_finite() {
            detail_fourth.push((state.qubits() as f64, log2_sum));
        }
    }
    let points = group_means(&detail_fourth);
    if points.len() < 3 {
        return Err(Error::InsufficientSizes { got: points.len(), need: 3 });
    }
    let (slope, _) = multifractal::ols_slope(&points);
    Ok((alpha, -slope))
}

/// Collapses `(x, y)` samples to per-`x` mean points, ordered by `x`.
fn group_means(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    for x in xs {
        let group: Vec<f64> =
            samples.iter().filter(|s| s.0 == x).map(|s| s.1).collect();
        points.push((x, kahan_sum(group.iter().copied()) / group.len() as f64));
    }
    points
}

/// The four measurement tasks the cost model covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostTask {
    /// Exponents from `t` map iterates, density route.
    IterateDensity,
    /// Exponents from exact eigenvectors, density route.
    EigenvectorDensity,
    /// Exponents from `t` map iterates, amplitude route.
    IterateAmplitude,
    /// Exponents from exact eigenvectors, amplitude route.
    EigenvectorAmplitude,
}

impl CostTask {
    /// All tasks, in report order.
    pub const ALL: [CostTask; 4] = [
        CostTask::IterateDensity,
        CostTask::EigenvectorDensity,
        CostTask::IterateAmplitude,
        CostTask::EigenvectorAmplitude,
    ];

    /// Stable snake-case name used in reports and file output.
    pub fn name(self) -> &'static str {
        match self {
            CostTask::IterateDensity => "iterate_density",
            CostTask::EigenvectorDensity => "eigenvector_density",
            CostTask::IterateAmplitude => "iterate_amplitude",
            CostTask::EigenvectorAmplitude => "eigenvector_amplitude",
        }
    }

    /// Inverse of [`CostTask::name`].
    pub fn from_name(name: &str) -> Option<Self> {
        CostTask::ALL.into_iter().find(|t| t.name() == name)
    }

    fn needs_t(self) -> bool {
        matches!(self, CostTask::IterateDensity | CostTask::IterateAmplitude)
    }

    fn needs_beta(self) -> bool {
        matches!(self, CostTask::IterateAmplitude | CostTask::EigenvectorAmplitude)
    }
}

/// Operation-count comparison for one task at one size.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    /// Qubit count (`N = 2^n`).
    pub n: usize,
    /// Task the counts describe.
    pub task: CostTask,
    /// Exponent of `Σ|ψ_i|⁴ ~ N^{−α}`.
    pub alpha: f64,
    /// Exponent of `Σ|T_ψ|⁴ ~ N^{−β}` (amplitude-route tasks only).
    pub beta: Option<f64>,
    /// Iteration count (iterate tasks only).
    pub t: Option<u64>,
    /// Estimated quantum operation count.
    pub quantum_count: f64,
    /// Estimated classical operation count.
    pub classical_count: f64,
    /// `log₂(classical / quantum)`.
    pub log2_gain: f64,
}

/// Quantum-vs-classical operation counts for extracting multifractal
/// exponents at size `N = 2^n`.
///
/// Formulas per task (quantum vs classical): iterate_density `t·N^{α/2}`
/// vs `t·N`; eigenvector_density `N^{1+α}` vs `N²`; iterate_amplitude
/// `t·N^{β/2}` vs `t·N`; eigenvector_amplitude `N^{1+α/2+β/2}` vs `N²`.
/// Iterate tasks need `t ≥ 1`; amplitude tasks need `beta`.
pub fn cost_model(
    n: usize,
    t: Option<u64>,
    alpha: f64,
    beta: Option<f64>,
    task: CostTask,
) -> Result<CostReport> {
    // Cauchy–Schwarz bounds α ∈ [0, 1]; negated check rejects NaN too.
    if !((-1e-9..=1.0 + 1e-9).contains(&alpha)) {
        return Err(Error::ExponentOutOfRange { name: "alpha", value: alpha });
    }
    let beta_value = if task.needs_beta() {
        let b = beta.ok_or(Error::MissingParameter("beta"))?;
        if !b.is_finite() {
            return Err(Error::ExponentOutOfRange { name: "beta", value: b });
        }
        Some(b)
    } else {
        beta
    };
    let t_value = if task.needs_t() {
        match t {
            Some(t) if t >= 1 => Some(t),
            _ => return Err(Error::MissingParameter("t")),
        }
    } else {
        t
    };

    let nf = n as f64;
    // The iteration count scales both sides of the iterate tasks; keeping it
    // out of the exp2 keeps counts like t·2^{n/2} exact floating products.
    let t_factor = if task.needs_t() {
        t_value.expect("validated above") as f64
    } else {
        1.0
    };
    let (log2_quantum, log2_classical) = match task {
        CostTask::IterateDensity => (nf * alpha / 2.0, nf),
        CostTask::EigenvectorDensity => (nf * (1.0 + alpha), 2.0 * nf),
        CostTask::IterateAmplitude => {
            (nf * beta_value.expect("validated above") / 2.0, nf)
        }
        CostTask::EigenvectorAmplitude => {
            let b = beta_value.expect("validated above");
            (nf * (1.0 + alpha / 2.0 + b / 2.0), 2.0 * nf)
        }
    };

    Ok(CostReport {
        n,
        task,
        alpha,
        beta: beta_value,
        t: t_value,
        quantum_count: t_factor * log2_quantum.exp2(),
        classical_count: t_factor * log2_classical.exp2(),
        log2_gain: log2_classical - log2_quantum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{cascade_state, CascadeParams};
    use crate::eig::unitary_eig;
    use crate::fourier::apply_diagonal_phase;
    use crate::isrm;
    use crate::matrix::UnitaryMatrix;
    use crate::multifractal::moments_tau;

    fn max_amp_err(a: &[C64], b: &[C64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn product_state_construction() {
        let zero = QuantumState::basis(2, 0).unwrap();
        let p = build_product_state(&zero, &zero).unwrap();
        assert_eq!(p.amplitude(0, 0), C64::new(1.0, 0.0));
        assert!((p.diagonal_probability() - 1.0).abs() < 1e-15);

        let u = QuantumState::uniform(2);
        let p = build_product_state(&u, &u).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((p.amplitude(i, j) - C64::new(0.25, 0.0)).norm() < 1e-15);
            }
        }

        let psi = cascade_state(&CascadeParams::new(3, 0.3).unwrap()).unwrap();
        let p = build_product_state(&psi, &psi.conjugate()).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let want = psi.amplitudes()[i] * psi.amplitudes()[j].conj();
                assert!((p.amplitude(i, j) - want).norm() < 1e-12, "entry ({i},{j})");
            }
        }
        let want_x = 0.58f64.powi(3);
        assert!(
            (p.diagonal_probability() - want_x).abs() < 1e-12,
            "diagonal weight {} vs (p1²+p2²)³ = {want_x}",
            p.diagonal_probability()
        );
    }

    #[test]
    fn product_state_caps_and_mismatches() {
        let a = QuantumState::uniform(3);
        let b = QuantumState::uniform(2);
        assert!(matches!(
            build_product_state(&a, &b).unwrap_err(),
            Error::RegisterMismatch { n_left: 3, n_right: 2 }
        ));
        assert!(matches!(
            build_product_state_with_cap(&a, &a, 2).unwrap_err(),
            Error::RegisterCap { n: 3, cap: 2 }
        ));
        let wide = QuantumState::uniform(9);
        assert!(matches!(
            build_product_state(&wide, &wide).unwrap_err(),
            Error::RegisterCap { n: 9, cap: 8 }
        ));
    }

    #[test]
    fn grover_step_matches_the_reflection_expansion() {
        let mut stream = rng::stream(71, tag::TEST_STATES, 0);
        let psi = rng::random_state(3, &mut stream);
        let initial = build_product_state(&psi, &psi.conjugate()).unwrap();
        let x = initial.diagonal_probability();

        let stepped = grover_step(&initial, &initial, |i, j| i == j).unwrap();
        let len = initial.register_len();
        let want: Vec<C64> = initial
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                let on_diagonal = k / len == k % len;
                if on_diagonal {
                    (4.0 * x - 3.0) * a
                } else {
                    (4.0 * x - 1.0) * a
                }
            })
            .collect();
        let err = max_amp_err(stepped.amplitudes(), &want);
        assert!(err < 1e-12, "one-step expansion mismatch: {err:.3e}");
    }

    #[test]
    fn grover_step_fixed_points() {
        // Fully inside the target subspace (x = 1): the step is exactly the
        // identity with this sign convention.
        let zero = QuantumState::basis(2, 0).unwrap();
        let inside = build_product_state(&zero, &zero).unwrap();
        let stepped = grover_step(&inside, &inside, |i, j| i == j).unwrap();
        assert!(max_amp_err(stepped.amplitudes(), inside.amplitudes()) < 1e-12);

        // Fully outside (x = 0): the step is exactly minus the identity.
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![C64::new(0.0, 0.0); 16];
        amps[1] = C64::new(s, 0.0);
        amps[4] = C64::new(s, 0.0);
        let outside = TwoRegisterState::new(2, amps).unwrap();
        let stepped = grover_step(&outside, &outside, |i, j| i == j).unwrap();
        let negated: Vec<C64> = outside.amplitudes().iter().map(|a| -a).collect();
        assert!(max_amp_err(stepped.amplitudes(), &negated) < 1e-12);
    }

    #[test]
    fn iteration_count_reference_values() {
        assert_eq!(grover_iteration_count(1.0).unwrap(), 0);
        assert_eq!(grover_iteration_count(0.25).unwrap(), 1);
        assert_eq!(grover_iteration_count(2.0f64.powi(-20)).unwrap(), 804);
        assert!(matches!(
            grover_iteration_count(0.0).unwrap_err(),
            Error::InvalidProbability { .. }
        ));
        assert!(grover_iteration_count(1.5).is_err());
        assert!(grover_iteration_count(f64::NAN).is_err());
    }

    #[test]
    fn amplification_trace_follows_the_rotation_law() {
        let psi = QuantumState::uniform(4);
        let (_, run) = grover_select_diagonal(&psi, 50).unwrap();
        assert!((run.x - 1.0 / 16.0).abs() < 1e-14);
        assert_eq!(run.iterations, 3, "x = 1/16 peaks after 3 reflections");
        assert!(!run.flagged);

        let theta = run.x.sqrt().asin();
        for (k, &p) in run.success_probability.iter().enumerate() {
            let analytic = ((2 * k + 1) as f64 * theta).sin().powi(2);
            assert!(
                (p - analytic).abs() < 1e-10,
                "step {k}: trace {p} vs sin²((2k+1)θ) = {analytic}"
            );
        }
        let peak = run.success_probability[run.iterations as usize];
        assert!(peak >= 0.96, "uniform n=4 peak = {peak}");
    }

    #[test]
    fn amplification_post_selection_oracle() {
        let psi = cascade_state(&CascadeParams::new(6, 0.3).unwrap()).unwrap();
        let (selected, run) = grover_select_diagonal(&psi, 100).unwrap();

        let want_x = 0.58f64.powi(6);
        assert!((run.x - want_x).abs() < 1e-12, "x = {} vs 0.58⁶ = {want_x}", run.x);
        assert_eq!(run.iterations, 3);
        assert!(!run.flagged);

        // End-to-end oracle: the diagonal must be |ψ_i|² / √(Σ|ψ_i|⁴).
        let scale = 1.0 / run.x.sqrt();
        let want: Vec<C64> = psi
            .probabilities()
            .into_iter()
            .map(|p| C64::new(p * scale, 0.0))
            .collect();
        let err = max_amp_err(selected.amplitudes(), &want);
        assert!(err < 1e-10, "post-selected diagonal off by {err:.3e}");
    }

    #[test]
    fn amplification_of_a_basis_state_is_immediate() {
        let psi = QuantumState::basis(2, 0).unwrap();
        let (selected, run) = grover_select_diagonal(&psi, 10).unwrap();
        assert_eq!(run.iterations, 0);
        assert_eq!(run.success_probability, vec![1.0]);
        assert!(!run.flagged);
        assert!(max_amp_err(selected.amplitudes(), psi.amplitudes()) < 1e-15);
    }

    #[test]
    fn amplification_flags_a_capped_run() {
        // x = 1/32 wants 4 reflections; capped at 2 the diagonal reaches
        // only sin²(5θ) ≈ 0.60, below the success threshold.
        let psi = QuantumState::uniform(5);
        let (_, run) = grover_select_diagonal(&psi, 2).unwrap();
        assert_eq!(run.iterations, 2);
        assert!(run.flagged, "peak {} should be flagged", run.success_probability[2]);
    }

    #[test]
    fn phase_estimation_hits_on_grid_phases_exactly() {
        let n_time = 4;
        let bins = 1 << n_time;
        let target_bin = 5;
        let theta = TAU * target_bin as f64 / bins as f64;
        let psi0 = QuantumState::basis(2, 3).unwrap();
        let mut phases = [0.0; 4];
        phases[3] = theta;

        let result =
            phase_estimation_for(&psi0, n_time, |s| apply_diagonal_phase(s, &phases)).unwrap();
        assert_eq!(result.peak_bin, target_bin);
        assert!((result.peak_probability - 1.0).abs() < 1e-10);
        assert!((result.grid_phase(result.peak_bin) - theta).abs() < 1e-12);
        let total = kahan_sum(result.histogram.iter().copied());
        assert!((total - 1.0).abs() < 1e-10, "histogram total {total}");
    }

    #[test]
    fn phase_estimation_off_grid_peak_stays_strong() {
        let n_time = 4;
        let bins = 1usize << n_time;
        // Worst case: exactly between bins 5 and 6.
        let theta = TAU * 5.5 / bins as f64;
        let psi0 = QuantumState::basis(1, 0).unwrap();
        let phases = [theta, 0.0];

        let result =
            phase_estimation_for(&psi0, n_time, |s| apply_diagonal_phase(s, &phases)).unwrap();
        assert!(
            result.peak_bin == 5 || result.peak_bin == 6,
            "peak bin {} not adjacent to θ",
            result.peak_bin
        );
        assert!(result.peak_probability >= 0.4, "peak {}", result.peak_probability);
        let total = kahan_sum(result.histogram.iter().copied());
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn phase_estimation_recovers_eigensolver_phases() {
        // 0.1 + 0.17·p stays below 2π for p < 32, so no reduction is needed.
        let phases: Vec<f64> = (0..32).map(|p| 0.1 + 0.17 * p as f64).collect();
        let params = IsrmParams::with_phases(5, 1, 3, phases).unwrap();
        let u = isrm::build_isrm(&params).unwrap();
        let system = unitary_eig(&u).unwrap();

        let n_time = 5;
        let bins = 1usize << n_time;
        for &k in &[0usize, 13, 31] {
            let psi0 = QuantumState::new(5, system.eigenvector(k).to_vec()).unwrap();
            let result = phase_estimation(&params, &psi0, n_time).unwrap();
            let theta = system.eigenphases()[k];
            let nearest = ((theta * bins as f64 / TAU).round() as usize) % bins;
            assert_eq!(
                result.peak_bin, nearest,
                "eigenvector {k}: peak {} vs nearest grid bin {nearest} for θ = {theta}",
                result.peak_bin
            );
            assert!(result.peak_probability >= 0.4);
        }
    }

    #[test]
    fn phase_estimation_respects_the_register_cap() {
        let psi0 = QuantumState::uniform(12);
        let err = phase_estimation_for(&psi0, 5, |s| Ok(s.clone())).unwrap_err();
        assert!(matches!(err, Error::RegisterCap { n: 17, cap: 16 }));
    }

    #[test]
    fn matrix_oracle_for_emulated_estimation() {
        // Cross-check against an explicitly diagonal unitary built as a
        // dense matrix, not just closures: a 4×4 with two on-grid phases.
        let bins = 8usize;
        let thetas = [TAU * 2.0 / 8.0, TAU * 6.0 / 8.0];
        let entries: Vec<C64> = (0..4)
            .flat_map(|i| {
                (0..4).map(move |j| {
                    if i == j {
                        let t = thetas[i % 2];
                        C64::new(t.cos(), t.sin())
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        let u = UnitaryMatrix::new(4, entries).unwrap();

        // Equal-weight superposition of two eigenvectors → two equal peaks;
        // rounding decides which of the two the argmax reports.
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let psi0 = QuantumState::new(
            2,
            vec![C64::new(s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        let result = phase_estimation_for(&psi0, 3, |state| {
            let amps = u.matvec(state.amplitudes())?;
            QuantumState::new(state.qubits(), amps)
        })
        .unwrap();
        assert_eq!(result.histogram.len(), bins);
        assert!((result.histogram[2] - 0.5).abs() < 1e-10);
        assert!((result.histogram[6] - 0.5).abs() < 1e-10);
        assert!(
            result.peak_bin == 2 || result.peak_bin == 6,
            "peak bin {} not one of the two equal peaks",
            result.peak_bin
        );
    }

    #[test]
    fn sampling_concentrates_and_reproduces() {
        // All coefficient weight in the level-2 band → every draw lands there.
        let mut coeffs = vec![C64::new(0.0, 0.0); 32];
        coeffs[4] = C64::new(0.6, 0.0);
        coeffs[5] = C64::new(0.0, 0.8);
        let coeffs = WaveletCoeffs::new(5, coeffs).unwrap();
        let h = sample_scale_register(&coeffs, SampleMoment::Two, 1000, 9).unwrap();
        assert_eq!(h.counts[2], 1000);
        assert!((h.frequencies[2] - 1.0).abs() < 1e-15);
        assert!((h.probabilities[2] - 1.0).abs() < 1e-12);

        let again = sample_scale_register(&coeffs, SampleMoment::Two, 1000, 9).unwrap();
        assert_eq!(h, again, "fixed seed must reproduce the histogram");
        let shifted = sample_scale_register(&coeffs, SampleMoment::Two, 1000, 10).unwrap();
        assert_eq!(shifted.counts[2], 1000, "support has one band regardless of seed");
    }

    #[test]
    fn sampling_moments_reweight_the_bands() {
        // Two bands with |T|² = 0.64 and 0.36: moment 2 weights 16:9,
        // moment 4 weights 256:81.
        let mut raw = vec![C64::new(0.0, 0.0); 8];
        raw[1] = C64::new(0.8, 0.0);
        raw[2] = C64::new(0.6, 0.0);
        let coeffs = WaveletCoeffs::new(3, raw).unwrap();

        let two = sample_scale_register(&coeffs, SampleMoment::Two, 1, 3).unwrap();
        assert!((two.probabilities[0] - 0.64).abs() < 1e-12);
        assert!((two.probabilities[1] - 0.36).abs() < 1e-12);

        let four = sample_scale_register(&coeffs, SampleMoment::Four, 1, 3).unwrap();
        let want = 0.64f64.powi(2) / (0.64f64.powi(2) + 0.36f64.powi(2));
        assert!((four.probabilities[0] - want).abs() < 1e-12);
    }

    #[test]
    fn sampling_frequencies_concentrate_on_the_exact_distribution() {
        let psi = cascade_state(&CascadeParams::new(10, 0.3).unwrap()).unwrap();
        let coeffs = fwt_forward(psi.amplitudes(), &WaveletFilter::haar()).unwrap();
        let shots = 100_000u64;
        let h = sample_scale_register(&coeffs, SampleMoment::Two, shots, 2024).unwrap();
        for (level, (&freq, &p)) in h.frequencies.iter().zip(&h.probabilities).enumerate() {
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            assert!(
                (freq - p).abs() <= 3.0 * sigma + 1e-9,
                "level {level}: |{freq} − {p}| > 3σ = {:.2e}",
                3.0 * sigma
            );
        }
    }

    #[test]
    fn sampling_rejects_empty_distributions_and_zero_shots() {
        let mut raw = vec![C64::new(0.0, 0.0); 8];
        raw[0] = C64::new(1.0, 0.0); // approximation slot only
        let coeffs = WaveletCoeffs::new(3, raw).unwrap();
        assert!(matches!(
            sample_scale_register(&coeffs, SampleMoment::Two, 10, 0).unwrap_err(),
            Error::EmptyDistribution
        ));

        let mut raw = vec![C64::new(0.0, 0.0); 8];
        raw[1] = C64::new(1.0, 0.0);
        let coeffs = WaveletCoeffs::new(3, raw).unwrap();
        assert!(matches!(
            sample_scale_register(&coeffs, SampleMoment::Two, 0, 0).unwrap_err(),
            Error::InsufficientPoints { got: 0, need: 1 }
        ));

        assert!(SampleMoment::from_order(2).is_ok());
        assert!(SampleMoment::from_order(4).is_ok());
        assert!(matches!(
            SampleMoment::from_order(3).unwrap_err(),
            Error::InvalidMomentOrder { .. }
        ));
    }

    #[test]
    fn exponent_fits_match_their_analytic_values() {
        let filter = WaveletFilter::haar();

        let cascades: Vec<QuantumState> = (8..=12)
            .map(|n| cascade_state(&CascadeParams::new(n, 0.3).unwrap()).unwrap())
            .collect();
        let (alpha, beta) = alpha_beta_exponents(&cascades, &filter).unwrap();
        let want = crate::cascade::cascade_tau_analytic(2.0, 0.3);
        assert!((alpha - want).abs() < 1e-9, "cascade α = {alpha} vs τ₂ = {want}");
        assert!(beta.is_finite() && beta > 0.0 && beta < 2.0, "cascade β = {beta}");

        let basis: Vec<QuantumState> =
            (4..=8).map(|n| QuantumState::basis(n, 1).unwrap()).collect();
        let (alpha, _) = alpha_beta_exponents(&basis, &filter).unwrap();
        assert!(alpha.abs() < 1e-12, "basis α = {alpha}");

        // Uniform states: α = 1 via the moment route. Their wavelet detail
        // coefficients vanish identically, so β has no data and the joint
        // fit must say so rather than invent a number.
        let uniform: Vec<QuantumState> = (4..=8).map(QuantumState::uniform).collect();
        assert!((moments_tau(&uniform, 2.0).unwrap().tau - 1.0).abs() < 1e-12);
        assert!(matches!(
            alpha_beta_exponents(&uniform, &filter).unwrap_err(),
            Error::InsufficientSizes { got: 0, need: 3 }
        ));
    }

    #[test]
    fn cost_model_reference_points() {
        let r = cost_model(20, Some(100), 1.0, None, CostTask::IterateDensity).unwrap();
        assert!((r.quantum_count - 102_400.0).abs() < 1e-6);
        assert!((r.classical_count - 104_857_600.0).abs() < 1e-3);
        assert!((r.log2_gain - 10.0).abs() < 1e-12);

        let r = cost_model(10, None, 1.0, None, CostTask::EigenvectorDensity).unwrap();
        assert_eq!(r.quantum_count, r.classical_count, "no gain in the worst case α = 1");
        assert!((r.log2_gain).abs() < 1e-12);

        let r =
            cost_model(12, None, 0.5, Some(0.5), CostTask::EigenvectorAmplitude).unwrap();
        assert!((r.quantum_count - 2.0f64.powi(18)).abs() < 1e-3);
        assert!((r.classical_count - 2.0f64.powi(24)).abs() < 1e-3);
        assert!((r.log2_gain - 6.0).abs() < 1e-12);
    }

    #[test]
    fn cost_model_validates_its_inputs() {
        assert!(matches!(
            cost_model(10, Some(5), 1.2, None, CostTask::IterateDensity).unwrap_err(),
            Error::ExponentOutOfRange { name: "alpha", .. }
        ));
        assert!(matches!(
            cost_model(10, None, 0.5, None, CostTask::IterateDensity).unwrap_err(),
            Error::MissingParameter("t")
        ));
        assert!(matches!(
            cost_model(10, Some(0), 0.5, None, CostTask::IterateDensity).unwrap_err(),
            Error::MissingParameter("t")
        ));
        assert!(matches!(
            cost_model(10, None, 0.5, None, CostTask::EigenvectorAmplitude).unwrap_err(),
            Error::MissingParameter("beta")
        ));
        assert!(matches!(
            cost_model(10, None, 0.5, Some(f64::NAN), CostTask::EigenvectorAmplitude)
                .unwrap_err(),
            Error::ExponentOutOfRange { name: "beta", .. }
        ));
        assert_eq!(CostTask::from_name("iterate_amplitude"), Some(CostTask::IterateAmplitude));
        assert_eq!(CostTask::from_name("nonsense"), None);
    }
}

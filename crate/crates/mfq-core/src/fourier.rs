//! Normalized discrete Fourier transform (the emulated QFT) and diagonal
//! phase application.
//!
//! Sign convention, fixed once for the whole crate: the forward transform
//! maps amplitude `j` to `(1/√N) Σ_k e^{+2πi jk/N} ψ_k`; the inverse uses the
//! negative kernel. Both run in `O(N log N)` via an iterative radix-2
//! decimation with a precomputed twiddle table.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::Error;
use crate::state::QuantumState;
use crate::{Result, C64};

/// Transform direction: which sign the exponent kernel carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `e^{+2πi jk/N}`.
    Forward,
    /// Kernel `e^{−2πi jk/N}`.
    Inverse,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Inverse => -1.0,
        }
    }
}

/// Applies the normalized Fourier transform to a state.
///
/// `inverse ∘ forward` is the identity; both directions preserve the norm.
pub fn qft(state: &QuantumState, direction: Direction) -> QuantumState {
    let n = state.qubits();
    let mut buf: Vec<C64> = state.amplitudes().to_vec();
    fft_in_place(&mut buf, direction);
    QuantumState::new(n, buf).expect("unitary transform preserves the norm")
}

/// Multiplies amplitude `i` by `e^{iφ(i)}`; `phases` must hold one angle in
/// radians per basis index.
pub fn apply_diagonal_phase(state: &QuantumState, phases: &[f64]) -> Result<QuantumState> {
    if phases.len() != state.len() {
        return Err(Error::LengthMismatch { expected: state.len(), got: phases.len() });
    }
    let amplitudes = state
        .amplitudes()
        .iter()
        .zip(phases)
        .map(|(a, &phi)| a * C64::new(phi.cos(), phi.sin()))
        .collect();
    QuantumState::new(state.qubits(), amplitudes)
}

/// In-place normalized FFT on a power-of-two buffer.
///
/// This is the raw kernel behind [`qft`], exposed for callers that transform
/// sub-registers (e.g. the time register in phase estimation). The buffer
/// length must be a power of two.
pub fn fft_in_place(buf: &mut [C64], direction: Direction) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n <= 1 {
        return;
    }
    bit_reverse_permute(buf);

    // One table of e^{sign·2πi k/n} for k < n/2 serves every stage: a stage
    // with butterfly span `len` strides through it by n/len.
    let sign = direction.sign();
    let step = sign * 2.0 * core::f64::consts::PI / n as f64;
    let twiddle: Vec<C64> = (0..n / 2)
        .map(|k| {
            let ang = step * k as f64;
            C64::new(ang.cos(), ang.sin())
        })
        .collect();

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        let mut base = 0;
        while base < n {
            for k in 0..half {
                let w = twiddle[k * stride];
                let lo = buf[base + k];
                let hi = buf[base + k + half] * w;
                buf[base + k] = lo + hi;
                buf[base + k + half] = lo - hi;
            }
            base += len;
        }
        len *= 2;
    }

    let scale = 1.0 / (n as f64).sqrt();
    for z in buf.iter_mut() {
        *z *= scale;
    }
}

fn bit_reverse_permute(buf: &mut [C64]) {
    let n = buf.len();
    let shift = n.leading_zeros() + 1;
    for i in 0..n {
        let j = i.reverse_bits() >> shift;
        if j > i {
            buf.swap(i, j);
        }
    }
}

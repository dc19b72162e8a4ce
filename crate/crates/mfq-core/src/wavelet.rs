//! Discrete wavelet transform with a full-depth pyramid and dyadic bands.
//!
//! The forward transform repeatedly splits the current approximation into a
//! half-length approximation and a half-length detail band via periodic
//! (circular) convolution with orthonormal filter taps, recursing until a
//! single approximation coefficient remains. Coefficients are stored in one
//! flat vector: slot 0 holds the approximation, and the detail band at level
//! `j` (scale `a = 2^{−j}`) occupies slots `[2^j, 2^{j+1})`, giving band
//! lengths 1, 1, 2, 4, …, 2^{n−1} that partition all `2^n` slots.
//!
//! Periodic wrap keeps every pyramid level exactly orthogonal, so the
//! transform preserves norms to rounding error and inverts exactly.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::Error;
use crate::{Result, C64};

/// Tolerance on the filter orthonormality invariants.
const FILTER_TOL: f64 = 1e-12;

/// A pair of orthonormal conjugate filters driving the pyramid recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilter {
    name: String,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

impl WaveletFilter {
    /// Validates and wraps a custom filter pair.
    ///
    /// Requirements: equal, even, non-zero tap counts; unit norm for both
    /// tap vectors; and mutual orthogonality, all within `1e-12`.
    pub fn new(name: impl Into<String>, lowpass: Vec<f64>, highpass: Vec<f64>) -> Result<Self> {
        if lowpass.len() != highpass.len() {
            return Err(Error::InvalidFilter { reason: "lowpass and highpass tap counts differ" });
        }
        if lowpass.is_empty() || lowpass.len() % 2 != 0 {
            return Err(Error::InvalidFilter { reason: "tap count must be even and non-zero" });
        }
        let norm_lo: f64 = lowpass.iter().map(|x| x * x).sum();
        let norm_hi: f64 = highpass.iter().map(|x| x * x).sum();
        let cross: f64 = lowpass.iter().zip(&highpass).map(|(a, b)| a * b).sum();
        if !((norm_lo - 1.0).abs() <= FILTER_TOL) {
            return Err(Error::InvalidFilter { reason: "lowpass taps are not unit norm" });
        }
        if !((norm_hi - 1.0).abs() <= FILTER_TOL) {
            return Err(Error::InvalidFilter { reason: "highpass taps are not unit norm" });
        }
        if !(cross.abs() <= FILTER_TOL) {
            return Err(Error::InvalidFilter { reason: "lowpass and highpass are not orthogonal" });
        }
        Ok(Self { name: name.into(), lowpass, highpass })
    }

    /// The two-tap Haar filter.
    pub fn haar() -> Self {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        Self::new("haar", vec![s, s], vec![s, -s]).expect("analytic taps are orthonormal")
    }

    /// The four-tap Daubechies filter with the standard orthonormal taps
    /// `{(1+√3), (3+√3), (3−√3), (1−√3)}/(4√2)` and the alternating-sign
    /// reversed highpass.
    pub fn daubechies4() -> Self {
        let r3 = 3.0f64.sqrt();
        let s = 1.0 / (4.0 * core::f64::consts::SQRT_2);
        let lo = vec![(1.0 + r3) * s, (3.0 + r3) * s, (3.0 - r3) * s, (1.0 - r3) * s];
        let hi = vec![lo[3], -lo[2], lo[1], -lo[0]];
        Self::new("daub4", lo, hi).expect("analytic taps are orthonormal")
    }

    /// Identifier used in reports ("haar", "daub4", or the custom name).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Lowpass (approximation) taps.
    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    /// Highpass (detail) taps.
    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }
}

/// Full-depth pyramid coefficients of a length-`2^n` vector.
///
/// Invariants: the flat vector has length `2^n`; slot 0 is the
/// approximation; the detail band at scale `a = 2^{−j}` holds `1/a = 2^j`
/// coefficients; for orthonormal filters `‖coeffs‖ = ‖input‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoeffs {
    n: usize,
    coeffs: Vec<C64>,
}

impl WaveletCoeffs {
    /// Wraps a flat coefficient vector in pyramid layout.
    pub fn new(n: usize, coeffs: Vec<C64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::DepthTooSmall { n });
        }
        let expected = 1usize
            .checked_shl(n as u32)
            .ok_or(Error::LengthMismatch { expected: usize::MAX, got: coeffs.len() })?;
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch { expected, got: coeffs.len() });
        }
        Ok(Self { n, coeffs })
    }

    /// Pyramid depth `n` (input length `2^n`).
    pub fn depth(&self) -> usize {
        self.n
    }

    /// Total number of coefficients `2^n`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Always false: a valid pyramid has at least four slots.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The flat coefficient vector (approximation first, then bands by
    /// increasing level).
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// The single approximation coefficient.
    pub fn approximation(&self) -> C64 {
        self.coeffs[0]
    }

    /// Registered scales, coarse to fine: `1, 1/2, …, 1/2^{n−1}`.
    pub fn scales(&self) -> Vec<f64> {
        (0..self.n).map(|j| level_scale(j)).collect()
    }

    /// Detail band `T(a, ·)` for a registered scale `a`, in order
    /// `b = 1 … 1/a`.
    pub fn band_values(&self, a: f64) -> Result<&[C64]> {
        for j in 0..self.n {
            if a == level_scale(j) {
                return Ok(self.band_at_level(j));
            }
        }
        Err(Error::UnknownScale { scale: a })
    }

    /// Detail band at level `j` (scale `2^{−j}`), `2^j` coefficients.
    pub(crate) fn band_at_level(&self, j: usize) -> &[C64] {
        let offset = 1usize << j;
        &self.coeffs[offset..2 * offset]
    }

    /// Consumes the pyramid, returning the flat coefficient vector.
    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }
}

/// Scale of detail level `j`: `a = 2^{−j}` (exact in floating point).
pub(crate) fn level_scale(j: usize) -> f64 {
    1.0 / (1u64 << j) as f64
}

/// Forward transform: full-depth pyramid of `vector` under `filter`.
///
/// The input length must be a power of two `2^n` with `n ≥ 2`.
pub fn fwt_forward(vector: &[C64], filter: &WaveletFilter) -> Result<WaveletCoeffs> {
    let len = vector.len();
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { len });
    }
    let n = len.trailing_zeros() as usize;
    if n < 2 {
        return Err(Error::DepthTooSmall { n });
    }
    let lo = filter.lowpass();
    let hi = filter.highpass();
    let mut buf = vector.to_vec();
    let mut half = vec![C64::new(0.0, 0.0); len];
    let mut m = len;
    while m >= 2 {
        let (approx, detail) = half[..m].split_at_mut(m / 2);
        for k in 0..m / 2 {
            let mut s = C64::new(0.0, 0.0);
            let mut d = C64::new(0.0, 0.0);
            for (t, (&l, &h)) in lo.iter().zip(hi).enumerate() {
                let x = buf[(2 * k + t) % m];
                s += l * x;
                d += h * x;
            }
            approx[k] = s;
            detail[k] = d;
        }
        buf[..m / 2].copy_from_slice(approx);
        buf[m / 2..m].copy_from_slice(detail);
        m /= 2;
    }
    WaveletCoeffs::new(n, buf)
}

/// Inverse transform: reconstructs the original vector from a pyramid.
///
/// Exact inverse of [`fwt_forward`] (to rounding) for any filter passing the
/// [`WaveletFilter`] invariants together with orthogonality across even
/// shifts, which both built-in filters satisfy.
pub fn fwt_inverse(coeffs: &WaveletCoeffs, filter: &WaveletFilter) -> Vec<C64> {
    let lo = filter.lowpass();
    let hi = filter.highpass();
    let len = coeffs.len();
    let mut buf = coeffs.coeffs().to_vec();
    let mut doubled = vec![C64::new(0.0, 0.0); len];
    let mut m = 1usize;
    while m < len {
        let target = &mut doubled[..2 * m];
        for z in target.iter_mut() {
            *z = C64::new(0.0, 0.0);
        }
        for k in 0..m {
            let s = buf[k];
            let d = buf[m + k];
            for (t, (&l, &h)) in lo.iter().zip(hi).enumerate() {
                target[(2 * k + t) % (2 * m)] += l * s + h * d;
            }
        }
        buf[..2 * m].copy_from_slice(target);
        m *= 2;
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_vec(xs: &[f64]) -> Vec<C64> {
        xs.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn built_in_filters_pass_their_own_validation() {
        for f in [WaveletFilter::haar(), WaveletFilter::daubechies4()] {
            let lo2: f64 = f.lowpass().iter().map(|x| x * x).sum();
            let hi2: f64 = f.highpass().iter().map(|x| x * x).sum();
            let cross: f64 = f.lowpass().iter().zip(f.highpass()).map(|(a, b)| a * b).sum();
            assert!((lo2 - 1.0).abs() < 1e-15, "{}: |lo|^2 = {lo2}", f.name());
            assert!((hi2 - 1.0).abs() < 1e-15, "{}: |hi|^2 = {hi2}", f.name());
            assert!(cross.abs() < 1e-15, "{}: lo·hi = {cross}", f.name());
            assert!(f.lowpass().len() % 2 == 0);
        }
    }

    #[test]
    fn custom_filter_validation_rejects_bad_taps() {
        let err = WaveletFilter::new("bad", vec![1.0, 1.0], vec![1.0, -1.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidFilter { .. }), "got {err:?}");
        let err = WaveletFilter::new("odd", vec![1.0], vec![1.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidFilter { .. }), "got {err:?}");
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let err = WaveletFilter::new("skew", vec![s, s], vec![s, s]).unwrap_err();
        assert!(matches!(err, Error::InvalidFilter { .. }), "got {err:?}");
    }

    #[test]
    fn constant_vector_has_no_detail() {
        let x = real_vec(&[0.5, 0.5, 0.5, 0.5]);
        let c = fwt_forward(&x, &WaveletFilter::haar()).unwrap();
        assert!((c.approximation() - C64::new(1.0, 0.0)).norm() < 1e-15);
        for z in &c.coeffs()[1..] {
            assert!(z.norm() < 1e-15, "detail coefficient {z} should vanish");
        }
    }

    #[test]
    fn basis_vector_pyramid_matches_hand_computation() {
        let x = real_vec(&[1.0, 0.0, 0.0, 0.0]);
        let c = fwt_forward(&x, &WaveletFilter::haar()).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((c.approximation() - C64::new(0.5, 0.0)).norm() < 1e-15);
        let band1 = c.band_values(1.0).unwrap();
        assert_eq!(band1.len(), 1);
        assert!((band1[0] - C64::new(0.5, 0.0)).norm() < 1e-15);
        let band_half = c.band_values(0.5).unwrap();
        assert_eq!(band_half.len(), 2);
        assert!((band_half[0] - C64::new(s, 0.0)).norm() < 1e-15);
        assert!(band_half[1].norm() < 1e-15);
    }

    #[test]
    fn parseval_holds_for_daubechies_at_scale() {
        let mut rng = crate::rng::stream(21, crate::rng::tag::TEST_STATES, 0);
        let state = crate::rng::random_state(10, &mut rng);
        let c = fwt_forward(state.amplitudes(), &WaveletFilter::daubechies4()).unwrap();
        let total: f64 = c.coeffs().iter().map(|z| z.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-12, "coefficient norm² = {total}");
    }

    #[test]
    fn round_trips_are_exact_for_both_filters() {
        let mut rng = crate::rng::stream(22, crate::rng::tag::TEST_STATES, 0);
        for filter in [WaveletFilter::haar(), WaveletFilter::daubechies4()] {
            for n in [2usize, 3, 5, 12] {
                let state = crate::rng::random_state(n, &mut rng);
                let c = fwt_forward(state.amplitudes(), &filter).unwrap();
                let back = fwt_inverse(&c, &filter);
                let err = max_abs_diff(state.amplitudes(), &back);
                assert!(err < 1e-12, "{} n={n}: round-trip error {err}", filter.name());
            }
        }
    }

    #[test]
    fn inverse_of_pure_approximation_is_constant() {
        let mut flat = vec![C64::new(0.0, 0.0); 4];
        flat[0] = C64::new(1.0, 0.0);
        let c = WaveletCoeffs::new(2, flat).unwrap();
        let x = fwt_inverse(&c, &WaveletFilter::haar());
        for z in &x {
            assert!((z - C64::new(0.5, 0.0)).norm() < 1e-15, "component {z}");
        }
    }

    #[test]
    fn band_layout_partitions_all_slots() {
        let mut rng = crate::rng::stream(23, crate::rng::tag::TEST_STATES, 0);
        let state = crate::rng::random_state(3, &mut rng);
        let c = fwt_forward(state.amplitudes(), &WaveletFilter::haar()).unwrap();
        assert_eq!(c.scales(), vec![1.0, 0.5, 0.25]);
        assert_eq!(c.band_values(1.0).unwrap().len(), 1);
        assert_eq!(c.band_values(0.25).unwrap().len(), 4);
        // Approximation + concatenated bands reassemble the flat vector.
        let mut rebuilt = vec![c.approximation()];
        for a in c.scales() {
            rebuilt.extend_from_slice(c.band_values(a).unwrap());
        }
        assert_eq!(rebuilt, c.coeffs().to_vec());
        let err = c.band_values(0.3).unwrap_err();
        assert!(matches!(err, Error::UnknownScale { .. }), "got {err:?}");
    }

    #[test]
    fn rejects_bad_shapes() {
        let x = real_vec(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            fwt_forward(&x, &WaveletFilter::haar()).unwrap_err(),
            Error::NotPowerOfTwo { len: 3 }
        ));
        let x = real_vec(&[1.0, 0.0]);
        assert!(matches!(
            fwt_forward(&x, &WaveletFilter::haar()).unwrap_err(),
            Error::DepthTooSmall { n: 1 }
        ));
    }

    #[test]
    fn transform_is_linear() {
        let mut rng = crate::rng::stream(24, crate::rng::tag::TEST_STATES, 0);
        let x = crate::rng::random_state(5, &mut rng);
        let y = crate::rng::random_state(5, &mut rng);
        let (alpha, beta) = (C64::new(0.3, -0.7), C64::new(-1.1, 0.2));
        let combo: Vec<C64> = x
            .amplitudes()
            .iter()
            .zip(y.amplitudes())
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let f = WaveletFilter::daubechies4();
        let cx = fwt_forward(x.amplitudes(), &f).unwrap();
        let cy = fwt_forward(y.amplitudes(), &f).unwrap();
        let expect: Vec<C64> = cx
            .coeffs()
            .iter()
            .zip(cy.coeffs())
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let got = fwt_forward(&combo, &f).unwrap();
        assert!(max_abs_diff(got.coeffs(), &expect) < 1e-12);
    }
}

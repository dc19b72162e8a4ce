//! Dense complex matrices with a validated unitarity invariant.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::{Result, C64};

/// Tolerance on `max |U·U† − I|` accepted at construction.
pub const UNITARITY_TOL: f64 = 1e-10;

/// A dense `N×N` complex matrix verified to satisfy `U·U† = I` entrywise
/// within [`UNITARITY_TOL`].
///
/// Entries are stored row-major: `entries[i*N + j]` is `U_{ij}` (row `i`
/// applied to input component `j`).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl UnitaryMatrix {
    /// Wraps a row-major entry vector after checking the unitarity invariant.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch { expected: dim * dim, got: entries.len() });
        }
        let m = Self { dim, entries };
        let dev = m.unitarity_deviation();
        // Written so that a NaN deviation (non-finite entries) is rejected.
        if !(dev <= UNITARITY_TOL) {
            return Err(Error::NotUnitary { max_deviation: dev });
        }
        Ok(m)
    }

    /// Wraps entries without the `O(N³)` unitarity check.
    ///
    /// For callers that already hold an analytic unitarity guarantee (or are
    /// deliberately testing failure paths); everything downstream still
    /// enforces its own residual contracts.
    pub fn new_unchecked(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch { expected: dim * dim, got: entries.len() });
        }
        Ok(Self { dim, entries })
    }

    /// Matrix dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// Entry `U_{ij}`.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[C64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    /// Dense matrix–vector product `U·x`.
    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.dim {
            return Err(Error::LengthMismatch { expected: self.dim, got: x.len() });
        }
        Ok((0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(u, v)| u * v)
                    .fold(C64::new(0.0, 0.0), |acc, z| acc + z)
            })
            .collect())
    }

    /// `max_{ij} |(U·U†)_{ij} − δ_{ij}|`.
    ///
    /// `U·U†` is Hermitian, so only the upper triangle is evaluated.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let ri = self.row(i);
            for j in i..n {
                let rj = self.row(j);
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += ri[k] * rj[k].conj();
                }
                if i == j {
                    acc -= 1.0;
                }
                let dev = acc.norm();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }

    /// The identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }
}

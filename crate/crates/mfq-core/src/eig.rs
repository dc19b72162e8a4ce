//! Eigendecomposition of unitary matrices.
//!
//! The solver reduces everything to real symmetric eigenproblems. A unitary
//! `U` splits into commuting Hermitian parts `H = (U + U†)/2` and
//! `K = (U − U†)/(2i)`; any Hermitian matrix is in turn embedded as a
//! `2N×2N` real symmetric matrix and solved with the classic Householder +
//! implicit-QL pair (`tred2`/`tql2`, following the EISPACK/JAMA lineage).
//!
//! For an eigenphase `θ` the rotated combination `cos σ·H + sin σ·K` has
//! eigenvalue `cos(θ−σ)`, which folds phases symmetric about `σ` onto the
//! same value. A second stage projects the complementary combination
//! `−sin σ·H + cos σ·K` (eigenvalue `sin(θ−σ)`) onto each near-degenerate
//! cluster to pull folded pairs apart, and a Rayleigh–Ritz refinement
//! resolves phases that are genuinely close on the unit circle. A final
//! residual gate certifies every returned pair `(θ_k, v_k)`.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::Error;
use crate::matrix::UnitaryMatrix;
use crate::{Result, C64};

const TAU: f64 = core::f64::consts::TAU;

/// Fixed frame rotation for the Hermitian-part combination.
///
/// Any value works for generic spectra; a fixed irrational-looking angle
/// keeps the folding point `θ = σ` away from the structured phases (0, π/2,
/// π, …) that deliberate constructions tend to produce.
const SIGMA: f64 = 0.739_085_133_215_160_7;

/// Tuning knobs for [`unitary_eig_with`].
#[derive(Debug, Clone)]
pub struct EigOptions {
    /// Iteration cap per eigenvalue in the implicit-QL sweep.
    pub max_ql_iterations: usize,
    /// Largest accepted value of `max_k ‖U v_k − e^{iθ_k} v_k‖`.
    pub residual_tol: f64,
    /// Gap below which `cos(θ−σ)` eigenvalues are treated as one cluster.
    pub cluster_tol: f64,
    /// Circular gap below which extracted phases are re-resolved jointly.
    pub phase_group_tol: f64,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            max_ql_iterations: 50,
            residual_tol: 1e-8,
            cluster_tol: 1e-3,
            phase_group_tol: 1e-5,
        }
    }
}

/// Full spectral decomposition of a unitary matrix.
///
/// Invariants maintained by construction: eigenphases lie in `[0, 2π)` and
/// are sorted ascending; `eigenvector(k)` is the unit-norm eigenvector
/// belonging to `eigenphases()[k]`; vectors are mutually orthonormal.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    dim: usize,
    phases: Vec<f64>,
    /// Row-major: row `k` is eigenvector `k`.
    vectors: Vec<C64>,
}

impl EigenSystem {
    /// Matrix dimension `N` (also the number of eigenpairs).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Eigenphases in `[0, 2π)`, ascending.
    pub fn eigenphases(&self) -> &[f64] {
        &self.phases
    }

    /// Eigenvector `k` as a unit-norm amplitude slice.
    pub fn eigenvector(&self, k: usize) -> &[C64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }

    /// Eigenvalue `e^{iθ_k}` on the unit circle.
    pub fn eigenvalue(&self, k: usize) -> C64 {
        C64::from_polar(1.0, self.phases[k])
    }

    /// Flat row-major eigenvector storage (row `k` = eigenvector `k`).
    pub fn vectors_flat(&self) -> &[C64] {
        &self.vectors
    }

    /// Reassembles a decomposition from stored parts, re-checking shape and
    /// phase-range invariants (orthonormality is not re-verified here).
    pub fn from_parts(dim: usize, phases: Vec<f64>, vectors: Vec<C64>) -> Result<Self> {
        if phases.len() != dim {
            return Err(Error::LengthMismatch { expected: dim, got: phases.len() });
        }
        if vectors.len() != dim * dim {
            return Err(Error::LengthMismatch { expected: dim * dim, got: vectors.len() });
        }
        let mut prev = f64::NEG_INFINITY;
        for (index, &value) in phases.iter().enumerate() {
            if !(0.0..TAU).contains(&value) || value < prev {
                return Err(Error::PhaseOutOfRange { index, value });
            }
            prev = value;
        }
        Ok(Self { dim, phases, vectors })
    }

    /// Decomposes into `(dim, phases, row-major vectors)`.
    pub fn into_parts(self) -> (usize, Vec<f64>, Vec<C64>) {
        (self.dim, self.phases, self.vectors)
    }

    /// `max_k ‖U v_k − e^{iθ_k} v_k‖` against a concrete matrix.
    pub fn max_residual(&self, u: &UnitaryMatrix) -> Result<f64> {
        if u.dim() != self.dim {
            return Err(Error::LengthMismatch { expected: self.dim, got: u.dim() });
        }
        let mut worst: f64 = 0.0;
        for k in 0..self.dim {
            let v = self.eigenvector(k);
            let w = u.matvec(v)?;
            let lambda = self.eigenvalue(k);
            let mut acc = 0.0;
            for (wi, vi) in w.iter().zip(v) {
                acc += (wi - lambda * vi).norm_sqr();
            }
            worst = worst.max(acc.sqrt());
        }
        Ok(worst)
    }

    /// `max_{ij} |v_i† v_j − δ_{ij}|` over all eigenvector pairs.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            let vi = self.eigenvector(i);
            for j in i..self.dim {
                let mut acc = cdot(vi, self.eigenvector(j));
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// `max_p |Σ_k |v_k[p]|² − 1|`: how far the eigenbasis is from resolving
    /// the identity component-wise.
    pub fn completeness_deviation(&self) -> f64 {
        let mut sums = vec![0.0f64; self.dim];
        for k in 0..self.dim {
            for (s, z) in sums.iter_mut().zip(self.eigenvector(k)) {
                *s += z.norm_sqr();
            }
        }
        sums.iter().fold(0.0f64, |m, s| m.max((s - 1.0).abs()))
    }
}

/// Eigendecomposition with default [`EigOptions`].
pub fn unitary_eig(u: &UnitaryMatrix) -> Result<EigenSystem> {
    unitary_eig_with(u, &EigOptions::default())
}

/// Eigendecomposition of a unitary matrix with explicit options.
///
/// Returns phases in `[0, 2π)` sorted ascending together with an orthonormal
/// eigenbasis, or an error if the QL sweep stalls or any eigenpair fails the
/// residual gate.
pub fn unitary_eig_with(u: &UnitaryMatrix, opts: &EigOptions) -> Result<EigenSystem> {
    let n = u.dim();
    if n == 0 {
        return Ok(EigenSystem { dim: 0, phases: Vec::new(), vectors: Vec::new() });
    }
    let e = u.entries();
    let zero = C64::new(0.0, 0.0);

    // Hermitian and anti-Hermitian parts, rotated by the fixed frame angle.
    let (cs, sn) = (SIGMA.cos(), SIGMA.sin());
    let mut a_rot = vec![zero; n * n];
    let mut k_rot = vec![zero; n * n];
    for i in 0..n {
        for j in 0..n {
            let a = e[i * n + j];
            let b = e[j * n + i].conj();
            let h = 0.5 * (a + b);
            let k = C64::new(0.0, -0.5) * (a - b);
            a_rot[i * n + j] = cs * h + sn * k;
            k_rot[i * n + j] = -sn * h + cs * k;
        }
    }

    // Stage 1: eigenbasis of cos(θ−σ).
    let (mu, mut vecs) = hermitian_eig(n, &a_rot, opts)?;
    drop(a_rot);

    // Stage 2: split every cos-degenerate cluster by the projected sin part.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && mu[end] - mu[end - 1] <= opts.cluster_tol {
            end += 1;
        }
        let m = end - start;
        if m >= 2 {
            let mut kv = vec![zero; m * n];
            for (b, chunk) in kv.chunks_exact_mut(n).enumerate() {
                matvec_flat(n, &k_rot, &vecs[(start + b) * n..(start + b + 1) * n], chunk);
            }
            let mut small = vec![zero; m * m];
            for a in 0..m {
                for b in 0..m {
                    small[a * m + b] =
                        cdot(&vecs[(start + a) * n..(start + a + 1) * n], &kv[b * n..(b + 1) * n]);
                }
            }
            hermitianize(m, &mut small);
            let (_, mix) = hermitian_eig(m, &small, opts)?;
            let idxs: Vec<usize> = (start..end).collect();
            recombine_rows(n, &idxs, &mix, &mut vecs);
        }
        start = end;
    }
    drop(k_rot);

    // Phases from the Rayleigh quotients c_k = v_k† U v_k.
    let mut w = vec![zero; n * n];
    for (k, chunk) in w.chunks_exact_mut(n).enumerate() {
        matvec_flat(n, e, &vecs[k * n..(k + 1) * n], chunk);
    }
    let mut c: Vec<C64> = (0..n)
        .map(|k| cdot(&vecs[k * n..(k + 1) * n], &w[k * n..(k + 1) * n]))
        .collect();
    let mut theta: Vec<f64> = c.iter().map(|z| wrap_phase(z.arg())).collect();
    sort_by_phase(n, &mut theta, &mut vecs, &mut w, &mut c);

    // Refinement: phases within the circular group tolerance are re-resolved
    // jointly through the projected operator G_{ab} = v_a† U v_b. In the
    // rotated frame e^{−iθ̄}G the anti-Hermitian part has eigenvalues
    // ≈ θ − θ̄, i.e. maximal slope where cos/sin stages are flattest.
    for group in circular_groups(&theta, opts.phase_group_tol) {
        let m = group.len();
        if m < 2 {
            continue;
        }
        let mut g = vec![zero; m * m];
        for (a, &ia) in group.iter().enumerate() {
            for (b, &ib) in group.iter().enumerate() {
                g[a * m + b] = cdot(&vecs[ia * n..(ia + 1) * n], &w[ib * n..(ib + 1) * n]);
            }
        }
        let mean = circular_mean(group.iter().map(|&i| theta[i]));
        let frame = C64::from_polar(1.0, -mean);
        let mut kb = vec![zero; m * m];
        for a in 0..m {
            for b in 0..m {
                let x = frame * g[a * m + b];
                let y = (frame * g[b * m + a]).conj();
                kb[a * m + b] = C64::new(0.0, -0.5) * (x - y);
            }
        }
        let (_, mix) = hermitian_eig(m, &kb, opts)?;
        recombine_rows(n, &group, &mix, &mut vecs);
        recombine_rows(n, &group, &mix, &mut w);
        for &i in &group {
            c[i] = cdot(&vecs[i * n..(i + 1) * n], &w[i * n..(i + 1) * n]);
            theta[i] = wrap_phase(c[i].arg());
        }
    }
    sort_by_phase(n, &mut theta, &mut vecs, &mut w, &mut c);

    // Restore exact orthonormality with one modified Gram–Schmidt pass over
    // the whole basis in phase order. A pair with eigenvalue gap g and
    // residuals r may legally reach |⟨v_a, v_b⟩| ≈ r/g, so orthogonality
    // cannot be left to the residual gate; the projection removed here is
    // bounded by r/g and perturbs the residual by at most ~‖projection‖·g,
    // never above the residual already present, so the gate below stays
    // honest for close and distant pairs alike.
    for ij in 0..n {
        for ip in 0..ij {
            let p = cdot(&vecs[ip * n..(ip + 1) * n], &vecs[ij * n..(ij + 1) * n]);
            axpy_rows(n, -p, ip, ij, &mut vecs);
            axpy_rows(n, -p, ip, ij, &mut w);
        }
        let norm = cdot(&vecs[ij * n..(ij + 1) * n], &vecs[ij * n..(ij + 1) * n]).re.sqrt();
        let inv = 1.0 / norm;
        for z in &mut vecs[ij * n..(ij + 1) * n] {
            *z *= inv;
        }
        for z in &mut w[ij * n..(ij + 1) * n] {
            *z *= inv;
        }
        c[ij] = cdot(&vecs[ij * n..(ij + 1) * n], &w[ij * n..(ij + 1) * n]);
        theta[ij] = wrap_phase(c[ij].arg());
    }
    sort_by_phase(n, &mut theta, &mut vecs, &mut w, &mut c);

    // Residual gate on ‖U v − e^{iθ}v‖, summed term-by-term (the expanded
    // form ‖Uv‖² + 1 − 2|c| cancels O(1) quantities and bottoms out near
    // √ε ≈ 1.5e-8, too coarse for this gate).
    let mut worst = (0usize, 0.0f64);
    for k in 0..n {
        let lambda = C64::from_polar(1.0, theta[k]);
        let r2: f64 = w[k * n..(k + 1) * n]
            .iter()
            .zip(&vecs[k * n..(k + 1) * n])
            .map(|(wi, vi)| (wi - lambda * vi).norm_sqr())
            .sum();
        let r = r2.sqrt();
        if r > worst.1 {
            worst = (k, r);
        }
    }
    if worst.1 > opts.residual_tol {
        return Err(Error::EigResidual { index: worst.0, residual: worst.1 });
    }

    Ok(EigenSystem { dim: n, phases: theta, vectors: vecs })
}

/// Conjugate-linear dot product `Σ conj(a_i)·b_i`.
fn cdot(a: &[C64], b: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

/// Dense `y = M·x` for a flat row-major `n×n` matrix.
fn matvec_flat(n: usize, m: &[C64], x: &[C64], y: &mut [C64]) {
    for (i, yi) in y.iter_mut().enumerate().take(n) {
        let row = &m[i * n..(i + 1) * n];
        let mut acc = C64::new(0.0, 0.0);
        for (a, b) in row.iter().zip(x) {
            acc += a * b;
        }
        *yi = acc;
    }
}

/// `row[dst] += coef · row[src]` on flat row-major storage (`src ≠ dst`).
fn axpy_rows(n: usize, coef: C64, src: usize, dst: usize, data: &mut [C64]) {
    debug_assert_ne!(src, dst, "axpy_rows needs disjoint rows");
    let hi = src.max(dst);
    let (left, right) = data.split_at_mut(hi * n);
    let (s, d): (&[C64], &mut [C64]) = if src < dst {
        (&left[src * n..src * n + n], &mut right[..n])
    } else {
        (&right[..n], &mut left[dst * n..dst * n + n])
    };
    for (dz, sz) in d.iter_mut().zip(s) {
        *dz += coef * sz;
    }
}

/// Replaces the rows named by `idxs` with mixtures `new_j = Σ_a mix[j,a]·old_a`.
fn recombine_rows(n: usize, idxs: &[usize], mix: &[C64], data: &mut [C64]) {
    let m = idxs.len();
    let mut old = vec![C64::new(0.0, 0.0); m * n];
    for (a, &i) in idxs.iter().enumerate() {
        old[a * n..(a + 1) * n].copy_from_slice(&data[i * n..(i + 1) * n]);
    }
    for (j, &i) in idxs.iter().enumerate() {
        let dst = &mut data[i * n..(i + 1) * n];
        for z in dst.iter_mut() {
            *z = C64::new(0.0, 0.0);
        }
        for a in 0..m {
            let coef = mix[j * m + a];
            for (dz, oz) in dst.iter_mut().zip(&old[a * n..(a + 1) * n]) {
                *dz += coef * oz;
            }
        }
    }
}

/// Symmetrizes a small matrix that is Hermitian up to rounding.
fn hermitianize(m: usize, a: &mut [C64]) {
    for i in 0..m {
        for j in i..m {
            let avg = 0.5 * (a[i * m + j] + a[j * m + i].conj());
            a[i * m + j] = avg;
            a[j * m + i] = avg.conj();
        }
        a[i * m + i] = C64::new(a[i * m + i].re, 0.0);
    }
}

/// Maps an angle to `[0, 2π)` (the half-open interval is enforced even under
/// rounding at the seam).
fn wrap_phase(t: f64) -> f64 {
    let mut x = t % TAU;
    if x < 0.0 {
        x += TAU;
    }
    if x >= TAU || x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Circular mean angle of a non-empty phase collection.
fn circular_mean(phases: impl Iterator<Item = f64>) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for t in phases {
        acc += C64::from_polar(1.0, t);
    }
    wrap_phase(acc.arg())
}

/// Groups indices of an ascending phase list whose consecutive circular gaps
/// stay below `tol`; the seam across `2π → 0` joins the first and last runs.
fn circular_groups(theta: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let n = theta.len();
    if n == 0 {
        return Vec::new();
    }
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize];
    for i in 1..n {
        if theta[i] - theta[i - 1] <= tol {
            current.push(i);
        } else {
            runs.push(core::mem::take(&mut current));
            current.push(i);
        }
    }
    runs.push(current);
    if runs.len() > 1 && (theta[0] + TAU - theta[n - 1]) <= tol {
        let last = runs.pop().expect("non-empty runs");
        runs[0].splice(0..0, last);
    }
    runs
}

/// Sorts `(theta, vecs, w, c)` jointly by phase, ascending.
fn sort_by_phase(n: usize, theta: &mut Vec<f64>, vecs: &mut Vec<C64>, w: &mut Vec<C64>, c: &mut Vec<C64>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| theta[a].partial_cmp(&theta[b]).expect("finite phases"));
    if order.iter().enumerate().all(|(i, &k)| i == k) {
        return;
    }
    let zero = C64::new(0.0, 0.0);
    let mut new_theta = vec![0.0f64; n];
    let mut new_vecs = vec![zero; n * n];
    let mut new_w = vec![zero; n * n];
    let mut new_c = vec![zero; n];
    for (i, &k) in order.iter().enumerate() {
        new_theta[i] = theta[k];
        new_c[i] = c[k];
        new_vecs[i * n..(i + 1) * n].copy_from_slice(&vecs[k * n..(k + 1) * n]);
        new_w[i * n..(i + 1) * n].copy_from_slice(&w[k * n..(k + 1) * n]);
    }
    *theta = new_theta;
    *vecs = new_vecs;
    *w = new_w;
    *c = new_c;
}

/// Hermitian eigendecomposition through the real-symmetric embedding
/// `[[Re H, −Im H], [Im H, Re H]]`.
///
/// Returns eigenvalues ascending and the matching orthonormal eigenvectors
/// as rows. Each complex eigenvector appears twice in the embedded problem
/// (multiplication by `i` maps one real copy to the other); a pivoted
/// Gram–Schmidt pass inside every eigenvalue cluster extracts one complex
/// representative per pair.
fn hermitian_eig(n: usize, h: &[C64], opts: &EigOptions) -> Result<(Vec<f64>, Vec<C64>)> {
    debug_assert_eq!(h.len(), n * n, "flat Hermitian input must be n×n");
    let nn = 2 * n;
    let mut s = vec![0.0f64; nn * nn];
    for i in 0..n {
        for j in 0..n {
            let z = h[i * n + j];
            s[i * nn + j] = z.re;
            s[i * nn + n + j] = -z.im;
            s[(n + i) * nn + j] = z.im;
            s[(n + i) * nn + n + j] = z.re;
        }
    }
    let d = sym_eig(nn, &mut s, opts.max_ql_iterations)?;

    let scale = d.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = 1e-9 * scale;
    let zero = C64::new(0.0, 0.0);
    let mut vals = Vec::with_capacity(n);
    let mut vecs = vec![zero; n * n];
    let mut out = 0usize;
    let mut start = 0usize;
    while start < nn {
        // Clusters keep even size: embedded eigenvalues come in exact pairs.
        let mut end = start + 1;
        while end < nn && ((end - start) % 2 == 1 || d[end] - d[end - 1] <= tol) {
            end += 1;
        }
        let pairs = (end - start) / 2;
        let mean = d[start..end].iter().sum::<f64>() / (end - start) as f64;

        let mut cands: Vec<Vec<C64>> = (start..end)
            .map(|k| (0..n).map(|j| C64::new(s[j * nn + k], s[(n + j) * nn + k])).collect())
            .collect();
        for _ in 0..pairs {
            let mut best = 0usize;
            let mut best_norm = -1.0f64;
            for (idx, cand) in cands.iter().enumerate() {
                let q: f64 = cand.iter().map(|z| z.norm_sqr()).sum();
                if q > best_norm {
                    best = idx;
                    best_norm = q;
                }
            }
            debug_assert!(best_norm > 1e-6, "degenerate cluster extraction");
            let mut picked = cands.swap_remove(best);
            let inv = 1.0 / best_norm.sqrt();
            for z in &mut picked {
                *z *= inv;
            }
            for cand in &mut cands {
                let p = cdot(&picked, cand);
                for (cz, pz) in cand.iter_mut().zip(&picked) {
                    *cz -= p * pz;
                }
            }
            vecs[out * n..(out + 1) * n].copy_from_slice(&picked);
            vals.push(mean);
            out += 1;
        }
        start = end;
    }
    debug_assert_eq!(out, n, "embedded spectrum must reduce to n complex pairs");
    Ok((vals, vecs))
}

/// Real symmetric eigendecomposition, in place.
///
/// On entry `v` holds the symmetric matrix (row-major, `nn×nn`); on exit its
/// columns are orthonormal eigenvectors matching the returned ascending
/// eigenvalues. Ported from the public-domain JAMA `tred2`/`tql2` routines
/// (themselves from the Algol/EISPACK originals), with the QL rotation
/// sweeps restructured to stream row-wise over the accumulator matrix.
fn sym_eig(nn: usize, v: &mut [f64], max_ql_iterations: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(v.len(), nn * nn, "flat symmetric input must be nn×nn");
    let n = nn;
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    if n == 0 {
        return Ok(d);
    }

    // --- tred2: Householder reduction to tridiagonal form. ---
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
        // Scale to avoid under/overflow.
        let mut scale = 0.0f64;
        let mut h = 0.0f64;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            // Generate the Householder vector.
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }

            // Apply the similarity transformation to remaining columns.
            for j in 0..i {
                let f = d[j];
                v[j * n + i] = f;
                let mut g = e[j] + v[j * n + j] * f;
                for k in (j + 1)..i {
                    g += v[k * n + j] * d[k];
                    e[k] += v[k * n + j] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0f64;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the Householder transformations.
    for i in 0..(n - 1) {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for (k, item) in d.iter_mut().enumerate().take(i + 1) {
                *item = v[k * n + i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0f64;
                for k in 0..=i {
                    g += v[k * n + i + 1] * v[k * n + j];
                }
                for k in 0..=i {
                    v[k * n + j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = 0.0;
    }
    v[(n - 1) * n + n - 1] = 1.0;
    e[0] = 0.0;

    // --- tql2: implicit QL with shifts on the tridiagonal form. ---
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = 2.0f64.powi(-52);
    let mut rotations: Vec<(f64, f64)> = Vec::with_capacity(n);
    for l in 0..n {
        // Find a small subdiagonal element.
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        let m = m.min(n - 1);

        // If m == l, d[l] is already an eigenvalue; otherwise iterate.
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > max_ql_iterations {
                    return Err(Error::EigNoConvergence { index: l });
                }

                // Compute the implicit shift.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                // Implicit QL sweep: compute the rotation chain first…
                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                rotations.clear();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    rotations.push((c, s));
                }
                // …then stream them across each accumulator row in the same
                // order (row-wise passes keep the memory access contiguous;
                // the arithmetic per row is identical to the interleaved
                // original).
                for row in v.chunks_exact_mut(n) {
                    let mut i = m;
                    for &(c, s) in rotations.iter() {
                        i -= 1;
                        let h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        // The shift accumulator applies even to eigenvalues that converged
        // during earlier sweeps (m == l on entry).
        d[l] += f;
        e[l] = 0.0;
    }

    // Sort eigenvalues ascending, carrying eigenvector columns along.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for j in (i + 1)..n {
            if d[j] < p {
                k = j;
                p = d[j];
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for j in 0..n {
                v.swap(j * n + i, j * n + k);
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, tag};
    use rand_core::RngCore;

    fn uniform(rng: &mut impl RngCore) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Dense unitary with prescribed eigenphases, diagonal in the discrete
    /// Fourier frame: U_{ab} = (1/n) Σ_k e^{2πik(a−b)/n} e^{iθ_k}.
    fn fourier_frame_unitary(phases: &[f64]) -> UnitaryMatrix {
        let n = phases.len();
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &t) in phases.iter().enumerate() {
                    let ang = TAU * (k * a % n) as f64 / n as f64 - TAU * (k * b % n) as f64 / n as f64 + t;
                    acc += C64::from_polar(1.0 / n as f64, ang);
                }
                entries[a * n + b] = acc;
            }
        }
        UnitaryMatrix::new(n, entries).expect("analytic construction is unitary")
    }

    /// The Fourier-frame eigenvector with index k.
    fn fourier_column(n: usize, k: usize) -> Vec<C64> {
        let scale = 1.0 / (n as f64).sqrt();
        (0..n).map(|j| C64::from_polar(scale, TAU * ((j * k) % n) as f64 / n as f64)).collect()
    }

    #[test]
    fn tridiagonal_toeplitz_matches_analytic_eigenvalues() {
        // Second-difference matrix: eigenvalues 2 − 2cos(kπ/(n+1)).
        let n = 16;
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            a[i * n + i] = 2.0;
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        let d = sym_eig(n, &mut a, 50).expect("convergence");
        for (k, &got) in d.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * core::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!(
                (got - want).abs() < 1e-12,
                "eigenvalue {k}: got {got}, analytic {want}"
            );
        }
    }

    #[test]
    fn dense_symmetric_solution_satisfies_matrix_identities() {
        let n = 24;
        let mut rng = stream(11, tag::TEST_STATES, 0);
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = 2.0 * uniform(&mut rng) - 1.0;
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        let orig = a.clone();
        let d = sym_eig(n, &mut a, 50).expect("convergence");

        let trace: f64 = (0..n).map(|i| orig[i * n + i]).sum();
        let fro: f64 = orig.iter().map(|x| x * x).sum();
        let sum: f64 = d.iter().sum();
        let sum_sq: f64 = d.iter().map(|x| x * x).sum();
        assert!((trace - sum).abs() < 1e-10, "trace {trace} vs eigenvalue sum {sum}");
        assert!((fro - sum_sq).abs() < 1e-9, "‖A‖²_F {fro} vs Σλ² {sum_sq}");

        // Residuals ‖A v_k − λ_k v_k‖ and pairwise orthonormality.
        for k in 0..n {
            let col: Vec<f64> = (0..n).map(|j| a[j * n + k]).collect();
            let mut res = 0.0f64;
            for i in 0..n {
                let mut acc = 0.0;
                for j in 0..n {
                    acc += orig[i * n + j] * col[j];
                }
                res += (acc - d[k] * col[i]) * (acc - d[k] * col[i]);
            }
            assert!(res.sqrt() < 1e-12, "residual for eigenpair {k}: {}", res.sqrt());
            for k2 in k..n {
                let dot: f64 = (0..n).map(|j| a[j * n + k] * a[j * n + k2]).sum();
                let target = if k == k2 { 1.0 } else { 0.0 };
                assert!((dot - target).abs() < 1e-12, "columns {k},{k2} not orthonormal");
            }
        }
    }

    #[test]
    fn identity_matrix_has_all_zero_phases() {
        let sys = unitary_eig(&UnitaryMatrix::identity(4)).expect("identity decomposes");
        assert_eq!(sys.dim(), 4);
        assert_eq!(sys.eigenphases(), &[0.0; 4]);
        assert!(sys.orthonormality_deviation() < 1e-12);
        assert!(sys.completeness_deviation() < 1e-12);
    }

    #[test]
    fn quarter_turn_diagonal_recovers_basis_vectors() {
        let zero = C64::new(0.0, 0.0);
        let u = UnitaryMatrix::new(2, vec![C64::new(1.0, 0.0), zero, zero, C64::new(0.0, 1.0)])
            .expect("diagonal unitary");
        let sys = unitary_eig(&u).expect("decomposition");
        assert!((sys.eigenphases()[0] - 0.0).abs() < 1e-12, "got {:?}", sys.eigenphases());
        assert!(
            (sys.eigenphases()[1] - core::f64::consts::FRAC_PI_2).abs() < 1e-12,
            "got {:?}",
            sys.eigenphases()
        );
        // Eigenvectors are the basis states up to a global phase.
        assert!((sys.eigenvector(0)[0].norm() - 1.0).abs() < 1e-12);
        assert!(sys.eigenvector(0)[1].norm() < 1e-12);
        assert!((sys.eigenvector(1)[1].norm() - 1.0).abs() < 1e-12);
        assert!(sys.eigenvector(1)[0].norm() < 1e-12);
    }

    #[test]
    fn well_separated_fourier_spectrum_is_recovered() {
        let phases = [0.3, 1.1, 2.4, 2.9, 4.0, 4.7, 5.5, 6.1];
        let u = fourier_frame_unitary(&phases);
        let sys = unitary_eig(&u).expect("decomposition");
        let mut want = phases;
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (k, (&got, &exp)) in sys.eigenphases().iter().zip(&want).enumerate() {
            assert!((got - exp).abs() < 1e-10, "phase {k}: got {got}, want {exp}");
        }
        // Each eigenvector matches its Fourier column up to a phase factor.
        for (k, &t) in phases.iter().enumerate() {
            let slot = sys
                .eigenphases()
                .iter()
                .position(|&p| (p - t).abs() < 1e-8)
                .expect("phase recovered");
            let overlap = cdot(&fourier_column(8, k), sys.eigenvector(slot)).norm();
            assert!((overlap - 1.0).abs() < 1e-10, "eigenvector {k} overlap {overlap}");
        }
        assert!(sys.max_residual(&u).unwrap() < 1e-11);
        assert!(sys.orthonormality_deviation() < 1e-11);
    }

    #[test]
    fn phases_folded_by_the_hermitian_part_are_split() {
        // Pairs symmetric about σ (and about σ+π) make cos(θ−σ) degenerate
        // while the phases themselves stay far apart.
        let delta = [0.25, 0.03, 1.1];
        let mut phases = Vec::new();
        for &d in &delta {
            phases.push(wrap_phase(SIGMA + d));
            phases.push(wrap_phase(SIGMA - d));
        }
        phases.push(wrap_phase(SIGMA + core::f64::consts::PI + 0.4));
        phases.push(wrap_phase(SIGMA + core::f64::consts::PI - 0.4));
        let u = fourier_frame_unitary(&phases);
        let sys = unitary_eig(&u).expect("decomposition");
        let mut want = phases.clone();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (&got, &exp) in sys.eigenphases().iter().zip(&want) {
            assert!((got - exp).abs() < 1e-9, "got {got}, want {exp}");
        }
        assert!(sys.max_residual(&u).unwrap() < 1e-10);
        assert!(sys.orthonormality_deviation() < 1e-10);
    }

    #[test]
    fn nearly_coincident_phases_pass_the_residual_gate() {
        let phases = [1.0, 1.0 + 3e-6, 1.0 + 7e-6, 4.2];
        let u = fourier_frame_unitary(&phases);
        let sys = unitary_eig(&u).expect("decomposition");
        assert!(sys.max_residual(&u).unwrap() < 1e-10);
        assert!(sys.orthonormality_deviation() < 1e-10);
        // The three-fold bunch spans the right subspace even if individual
        // vectors inside it are free to mix.
        let mut span = 0.0;
        for k in 0..3 {
            for j in 0..3 {
                span += cdot(&fourier_column(4, k), sys.eigenvector(j)).norm_sqr();
            }
        }
        assert!((span - 3.0).abs() < 1e-9, "subspace overlap {span}");
    }

    #[test]
    fn iteration_cap_is_enforced() {
        let mut rng = stream(12, tag::TEST_STATES, 0);
        let n = 8;
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = 2.0 * uniform(&mut rng) - 1.0;
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        let err = sym_eig(n, &mut a, 0).unwrap_err();
        assert!(matches!(err, Error::EigNoConvergence { .. }), "got {err:?}");
    }

    #[test]
    fn contracting_map_fails_the_residual_gate() {
        let mut entries = vec![C64::new(0.0, 0.0); 9];
        for i in 0..3 {
            entries[i * 3 + i] = C64::new(0.9, 0.0);
        }
        let u = UnitaryMatrix::new_unchecked(3, entries).expect("shape");
        let err = unitary_eig(&u).unwrap_err();
        assert!(matches!(err, Error::EigResidual { .. }), "got {err:?}");
    }

    #[test]
    fn parts_round_trip_and_validation() {
        let u = fourier_frame_unitary(&[0.5, 2.0, 3.5, 5.0]);
        let sys = unitary_eig(&u).expect("decomposition");
        let copy = sys.clone();
        let (dim, phases, vectors) = sys.into_parts();
        let back = EigenSystem::from_parts(dim, phases, vectors).expect("valid parts");
        assert_eq!(back, copy);

        let bad = EigenSystem::from_parts(2, vec![3.0, 1.0], vec![C64::new(0.0, 0.0); 4]);
        assert!(matches!(bad.unwrap_err(), Error::PhaseOutOfRange { index: 1, .. }));
        let bad = EigenSystem::from_parts(1, vec![TAU], vec![C64::new(1.0, 0.0)]);
        assert!(matches!(bad.unwrap_err(), Error::PhaseOutOfRange { index: 0, .. }));
        let bad = EigenSystem::from_parts(2, vec![0.0], vec![C64::new(0.0, 0.0); 4]);
        assert!(matches!(bad.unwrap_err(), Error::LengthMismatch { .. }));
    }

    #[test]
    fn wrap_phase_lands_in_the_half_open_interval() {
        assert_eq!(wrap_phase(0.0), 0.0);
        assert_eq!(wrap_phase(TAU), 0.0);
        assert_eq!(wrap_phase(-0.0), 0.0);
        let just_under = -1e-18;
        let wrapped = wrap_phase(just_under);
        assert!((0.0..TAU).contains(&wrapped), "got {wrapped}");
        assert!((wrap_phase(-core::f64::consts::PI) - core::f64::consts::PI).abs() < 1e-15);
    }
}

//! Lanczos iteration for the lowest eigenpairs of large Hermitian
//! operators, with full reorthogonalization.
//!
//! Dense factorizations handle every default-sized problem in this
//! crate; this path serves basis-doubling convergence studies and other
//! beyond-default resolutions where a dense solve would be wasteful.
//! The Krylov basis is reorthogonalized twice per step, so the usual
//! ghost-eigenvalue pathology of plain Lanczos does not arise.

use crate::error::{Error, Result};
use crate::matrix::{HamiltonianMatrix, MatrixData};
use faer::{Mat, Side};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

/// Hermitian operator that can be applied to a vector.
pub(crate) trait ApplyHermitian {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64], y: &mut [C64]);
    /// Upper bound estimate for the spectral radius, used to scale
    /// convergence tolerances.
    fn norm_estimate(&self) -> f64;
}

/// Dense (or diagonal) matrix application.
pub(crate) struct DenseApply<'a>(pub &'a HamiltonianMatrix);

impl ApplyHermitian for DenseApply<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.0.apply(x, y);
    }
    fn norm_estimate(&self) -> f64 {
        // Gershgorin-style bound from a few sampled rows would be cheap
        // but max |entry| * dim overshoots badly; use max row sum on the
        // diagonal variant and a crude bound otherwise.
        match &self.0.data {
            MatrixData::Diagonal(d) => d.iter().fold(0.0f64, |a, &x| a.max(x.abs())),
            _ => {
                let n = self.0.dim();
                let mut bound = 0.0f64;
                for i in 0..n {
                    let mut row = 0.0;
                    for j in 0..n {
                        row += self.0.entry(i, j).norm();
                    }
                    bound = bound.max(row);
                }
                bound
            }
        }
    }
}

/// FFT-based application of a spectral phase-grid Hamiltonian.
pub(crate) struct FourierGridApply {
    kinetic: Vec<f64>,
    potential: Vec<f64>,
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl FourierGridApply {
    pub fn from_matrix(h: &HamiltonianMatrix) -> Option<Self> {
        let fa = h.fourier_apply.as_ref()?;
        let n = h.dim();
        let mut planner = FftPlanner::new();
        Some(Self {
            kinetic: fa.kinetic.clone(),
            potential: fa.potential.clone(),
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        })
    }
}

impl ApplyHermitian for FourierGridApply {
    fn dim(&self) -> usize {
        self.potential.len()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let n = self.dim();
        let mut buf = x.to_vec();
        self.fwd.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kinetic) {
            *b *= *k / n as f64;
        }
        self.inv.process(&mut buf);
        for i in 0..n {
            y[i] = buf[i] + x[i] * self.potential[i];
        }
    }
    fn norm_estimate(&self) -> f64 {
        let kin = self.kinetic.iter().fold(0.0f64, |a, &x| a.max(x));
        let pot = self.potential.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        kin + pot
    }
}

/// Deterministic unit-norm start vector.
fn start_vector(n: usize) -> Vec<C64> {
    // xorshift with a fixed seed: reproducible without a rand dependency
    let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ (n as u64);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut v: Vec<C64> = (0..n).map(|_| C64::new(next(), 0.0)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for b in basis {
            let proj: C64 = b.iter().zip(v.iter()).map(|(bi, vi)| bi.conj() * vi).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
    }
}

/// Lowest `k` eigenpairs of `op`. `tol` is an absolute residual target
/// in units of the operator norm estimate.
pub(crate) fn lanczos_lowest(
    op: &dyn ApplyHermitian,
    k: usize,
    tol: f64,
    max_steps: usize,
) -> Result<(Vec<f64>, Mat<C64>)> {
    let n = op.dim();
    let max_m = max_steps.min(n);
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} out of range for dim {n}")));
    }
    let scale = op.norm_estimate().max(f64::MIN_POSITIVE);
    let tol_abs = tol * scale;

    let mut vs: Vec<Vec<C64>> = Vec::with_capacity(64.min(max_m));
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    vs.push(start_vector(n));
    let mut w = vec![C64::new(0.0, 0.0); n];

    let mut checkpoint = (4 * k).max(48).min(max_m);
    loop {
        let j = alpha.len();
        op.apply(&vs[j], &mut w);
        let a: C64 = vs[j].iter().zip(w.iter()).map(|(v, wi)| v.conj() * wi).sum();
        alpha.push(a.re);
        for (wi, vi) in w.iter_mut().zip(&vs[j]) {
            *wi -= vi * a.re;
        }
        if j > 0 {
            let b = beta[j - 1];
            for (wi, vi) in w.iter_mut().zip(&vs[j - 1]) {
                *wi -= vi * b;
            }
        }
        orthogonalize(&mut w, &vs);
        let b = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

        let m = alpha.len();
        let done = m >= max_m || b < 1e-14 * scale;
        if m >= checkpoint || done {
            // Ritz values/vectors of the tridiagonal section
            let t = Mat::from_fn(m, m, |r, c| {
                if r == c {
                    alpha[r]
                } else if r + 1 == c || c + 1 == r {
                    beta[r.min(c)]
                } else {
                    0.0
                }
            });
            let eig = t
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| Error::Numeric(format!("tridiagonal eigensolve failed: {e:?}")))?;
            let vals = eig.S().column_vector();
            let sv = eig.U();
            if m >= k {
                // residual estimate |beta_m * s_{m, i}| for the lowest k
                let mut worst = 0.0f64;
                for i in 0..k {
                    worst = worst.max((b * sv[(m - 1, i)]).abs());
                }
                if worst <= tol_abs || done {
                    if worst > tol_abs {
                        return Err(Error::Numeric(format!(
                            "Lanczos stalled at {m} steps: worst residual estimate {worst:.3e} \
                             (target {tol_abs:.3e}, operator scale {scale:.3e})"
                        )));
                    }
                    let mut values = Vec::with_capacity(k);
                    let mut vectors = Mat::<C64>::zeros(n, k);
                    for i in 0..k {
                        values.push(vals[i]);
                        for (j_base, vb) in vs.iter().enumerate().take(m) {
                            let s = sv[(j_base, i)];
                            if s != 0.0 {
                                for r in 0..n {
                                    vectors[(r, i)] += vb[r] * s;
                                }
                            }
                        }
                    }
                    return Ok((values, vectors));
                }
            }
            checkpoint = (checkpoint + (checkpoint / 2).max(32)).min(max_m);
        }

        if b < 1e-14 * scale {
            // invariant subspace found but not converged: restart direction
            let mut fresh = start_vector(n + m);
            fresh.truncate(n);
            orthogonalize(&mut fresh, &vs);
            let norm = fresh.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-12 {
                return Err(Error::Numeric("Lanczos breakdown: no new direction".into()));
            }
            for z in &mut fresh {
                *z /= norm;
            }
            beta.push(0.0);
            vs.push(fresh);
        } else {
            for z in &mut w {
                *z /= b;
            }
            beta.push(b);
            vs.push(w.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisSpec, DiffScheme};

    #[test]
    fn lanczos_matches_dense_on_a_small_matrix() {
        let n = 120;
        let mut m = Mat::<C64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(i as f64 * 0.3, 0.0);
            if i + 1 < n {
                m[(i + 1, i)] = C64::new(0.4, 0.2);
                m[(i, i + 1)] = C64::new(0.4, -0.2);
            }
        }
        let basis = BasisSpec::PhaseGrid { phi_min: 0.0, phi_max: 1.0, n_points: n, scheme: DiffScheme::Spectral };
        let h = HamiltonianMatrix::new(MatrixData::Complex(m.clone()), basis, "t").unwrap();
        let (vals, vecs) = lanczos_lowest(&DenseApply(&h), 5, 1e-12, n).unwrap();
        let dense = m.self_adjoint_eigen(Side::Lower).unwrap();
        let dv = dense.S().column_vector();
        for i in 0..5 {
            assert!((vals[i] - dv[i].re).abs() < 1e-9, "{} vs {}", vals[i], dv[i].re);
        }
        // residuals
        for i in 0..5 {
            let x: Vec<C64> = (0..n).map(|r| vecs[(r, i)]).collect();
            let mut hx = vec![C64::new(0.0, 0.0); n];
            h.apply(&x, &mut hx);
            let res: f64 = hx
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b * vals[i]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-8 * h.max_abs(), "residual {res}");
        }
    }
}

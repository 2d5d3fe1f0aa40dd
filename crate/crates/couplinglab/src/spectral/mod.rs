//! Eigensolution of circuit Hamiltonians and qubit-state designation.
//!
//! Dense Hermitian factorization handles every matrix up to
//! [`DENSE_EIGEN_LIMIT`]; larger problems fall back to Lanczos iteration
//! behind the same interface. Eigenvectors are gauge fixed so that the
//! largest-magnitude component of each state is real and positive, which
//! makes matrix elements reproducible across runs and backends.

mod lanczos;

use crate::basis::BasisSpec;
use crate::circuits::{derive_energies, phase_potential, PhaseQubitParams};
use crate::error::{Error, Result};
use crate::matrix::{HamiltonianMatrix, MatrixData};
use faer::{Mat, Side};
use num_complex::Complex64 as C64;

pub(crate) use lanczos::{lanczos_lowest, ApplyHermitian, DenseApply, FourierGridApply};

/// Largest dimension solved by dense factorization. The doubled flux
/// lattice (cutoff 32, dimension 4225) still lands on the dense path;
/// anything larger goes to the iterative solver.
pub const DENSE_EIGEN_LIMIT: usize = 4600;

/// Lowest eigenpairs of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    /// Ascending eigenvalues, same units as the input matrix.
    pub energies: Vec<f64>,
    /// Orthonormal eigenvectors, one per column, gauge fixed.
    pub states: Mat<C64>,
    pub basis: BasisSpec,
    /// Which two states play the role of |0> and |1>.
    pub qubit_indices: (usize, usize),
    /// Transition frequency E(|1>) - E(|0>).
    pub omega_q: f64,
}

impl EigenSolution {
    /// Number of computed eigenpairs.
    pub fn k(&self) -> usize {
        self.energies.len()
    }

    /// Copy of the i-th eigenvector.
    pub fn state(&self, i: usize) -> Vec<C64> {
        (0..self.states.nrows()).map(|r| self.states[(r, i)]).collect()
    }

    /// Designated qubit states (|0>, |1>).
    pub fn qubit_states(&self) -> (Vec<C64>, Vec<C64>) {
        (self.state(self.qubit_indices.0), self.state(self.qubit_indices.1))
    }

    /// max |<i|j> - delta_ij| over all computed pairs.
    pub fn orthonormality_defect(&self) -> f64 {
        let k = self.k();
        let n = self.states.nrows();
        let mut worst = 0.0f64;
        for a in 0..k {
            for b in a..k {
                let mut dot = C64::new(0.0, 0.0);
                for r in 0..n {
                    dot += self.states[(r, a)].conj() * self.states[(r, b)];
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// ||H psi_i - E_i psi_i|| for each computed pair.
    pub fn residual_norms(&self, h: &HamiltonianMatrix) -> Vec<f64> {
        let n = self.states.nrows();
        let mut out = Vec::with_capacity(self.k());
        let mut hx = vec![C64::new(0.0, 0.0); n];
        for i in 0..self.k() {
            let x = self.state(i);
            h.apply(&x, &mut hx);
            let r = hx
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b * self.energies[i]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            out.push(r);
        }
        out
    }
}

/// Rotate a column so its largest-magnitude entry is real and positive.
/// Ties on the magnitude go to the lowest index. Idempotent.
fn gauge_fix_column(states: &mut Mat<C64>, col: usize) {
    let n = states.nrows();
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for r in 0..n {
        let m = states[(r, col)].norm_sqr();
        if m > best_mag {
            best_mag = m;
            best = r;
        }
    }
    if best_mag == 0.0 {
        return;
    }
    let z = states[(best, col)];
    let phase = z.conj() / z.norm();
    for r in 0..n {
        let v = states[(r, col)] * phase;
        states[(r, col)] = v;
    }
}

fn largest_entry_index(states: &Mat<C64>, col: usize) -> usize {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for r in 0..states.nrows() {
        let m = states[(r, col)].norm_sqr();
        if m > best_mag {
            best_mag = m;
            best = r;
        }
    }
    best
}

/// Order degenerate neighbours (|dE| < 1e-10 * span) by the index of
/// their largest-magnitude component. The choice is arbitrary; it exists
/// to make test output deterministic.
fn order_degenerate(energies: &mut [f64], states: &mut Mat<C64>) {
    let k = energies.len();
    if k < 2 {
        return;
    }
    let span = (energies[k - 1] - energies[0]).abs().max(f64::MIN_POSITIVE);
    let tol = 1e-10 * span;
    let mut i = 0;
    while i < k {
        let mut j = i + 1;
        while j < k && (energies[j] - energies[j - 1]).abs() < tol {
            j += 1;
        }
        if j - i > 1 {
            let mut order: Vec<usize> = (i..j).collect();
            order.sort_by_key(|&c| largest_entry_index(states, c));
            // apply the permutation by copying the block
            let n = states.nrows();
            let block_e: Vec<f64> = (i..j).map(|c| energies[c]).collect();
            let block_s: Vec<Vec<C64>> = (i..j).map(|c| (0..n).map(|r| states[(r, c)]).collect()).collect();
            for (slot, &src) in order.iter().enumerate() {
                energies[i + slot] = block_e[src - i];
                for r in 0..n {
                    states[(r, i + slot)] = block_s[src - i][r];
                }
            }
        }
        i = j;
    }
}

/// Lowest `k` eigenpairs of `h`, ascending, gauge fixed.
pub fn eigensolve(h: &HamiltonianMatrix, k: usize) -> Result<EigenSolution> {
    let dim = h.dim();
    if k == 0 || k > dim {
        return Err(Error::InvalidArgument(format!(
            "requested {k} eigenpairs of a dimension-{dim} matrix"
        )));
    }

    let (mut energies, mut states) = if dim <= DENSE_EIGEN_LIMIT {
        match &h.data {
            MatrixData::Diagonal(d) => {
                let mut order: Vec<usize> = (0..dim).collect();
                order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap().then(a.cmp(&b)));
                let mut states = Mat::<C64>::zeros(dim, k);
                let mut energies = Vec::with_capacity(k);
                for (col, &site) in order.iter().take(k).enumerate() {
                    energies.push(d[site]);
                    states[(site, col)] = C64::new(1.0, 0.0);
                }
                (energies, states)
            }
            MatrixData::Real(m) => {
                let eig = m
                    .self_adjoint_eigen(Side::Lower)
                    .map_err(|e| Error::Numeric(format!("dense eigensolve failed: {e:?}")))?;
                let vals = eig.S().column_vector();
                let vecs = eig.U();
                let energies: Vec<f64> = (0..k).map(|i| vals[i]).collect();
                let states = Mat::from_fn(dim, k, |r, c| C64::new(vecs[(r, c)], 0.0));
                (energies, states)
            }
            MatrixData::Complex(m) => {
                let eig = m
                    .self_adjoint_eigen(Side::Lower)
                    .map_err(|e| Error::Numeric(format!("dense eigensolve failed: {e:?}")))?;
                let vals = eig.S().column_vector();
                let vecs = eig.U();
                let energies: Vec<f64> = (0..k).map(|i| vals[i].re).collect();
                let states = Mat::from_fn(dim, k, |r, c| vecs[(r, c)]);
                (energies, states)
            }
        }
    } else if let Some(fft) = FourierGridApply::from_matrix(h) {
        lanczos_lowest(&fft, k, 1e-10, dim.min(2600))?
    } else {
        lanczos_lowest(&DenseApply(h), k, 1e-10, dim.min(2600))?
    };

    for c in 0..k {
        gauge_fix_column(&mut states, c);
    }
    order_degenerate(&mut energies, &mut states);
    let omega_q = if k > 1 { energies[1] - energies[0] } else { 0.0 };
    Ok(EigenSolution {
        energies,
        states,
        basis: h.basis.clone(),
        qubit_indices: (0, 1.min(k - 1)),
        omega_q,
    })
}

/// Phase interval bracketing the shallow well of the phase-qubit
/// potential: one local minimum inside, bounded by the adjacent local
/// maxima of U (or the grid edge where none exists).
#[derive(Debug, Clone, Copy)]
pub struct WellRegion {
    pub phi_lo: f64,
    pub phi_hi: f64,
    /// Grid indices corresponding to [phi_lo, phi_hi].
    pub index_lo: usize,
    pub index_hi: usize,
}

/// Locate the shallow well (the local minimum with the higher potential
/// value) on the basis grid.
pub fn shallow_well_region(p: &PhaseQubitParams, basis: &BasisSpec) -> Result<WellRegion> {
    if !basis.is_phase_grid() {
        return Err(Error::Incompatible("well analysis requires a PhaseGrid basis".into()));
    }
    let e = derive_energies(p)?;
    let grid = basis.grid_values();
    let n = grid.len();
    let u: Vec<f64> = grid.iter().map(|&phi| phase_potential(&e, p.bias, phi)).collect();
    let mut minima: Vec<usize> = Vec::new();
    let mut maxima: Vec<usize> = Vec::new();
    for i in 1..n - 1 {
        if u[i] < u[i - 1] && u[i] < u[i + 1] {
            minima.push(i);
        }
        if u[i] > u[i - 1] && u[i] > u[i + 1] {
            maxima.push(i);
        }
    }
    if minima.len() < 2 {
        return Err(Error::NoMetastableQubit(format!(
            "potential has {} local minimum(s) on the grid at bias {}; a metastable well needs two",
            minima.len(),
            p.bias
        )));
    }
    let u_min = minima.iter().map(|&i| u[i]).fold(f64::INFINITY, f64::min);
    let u_max_min = minima.iter().map(|&i| u[i]).fold(f64::NEG_INFINITY, f64::max);
    let depth_scale = maxima
        .iter()
        .map(|&i| u[i])
        .fold(f64::NEG_INFINITY, f64::max)
        .max(u_max_min)
        - u_min;
    if (u_max_min - u_min).abs() <= 1e-9 * depth_scale.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::AmbiguousWells(format!(
            "well depths agree to {:.2e} at bias {}: shallow well undefined at the symmetry point",
            u_max_min - u_min,
            p.bias
        )));
    }
    let shallow = *minima
        .iter()
        .max_by(|&&a, &&b| u[a].partial_cmp(&u[b]).unwrap())
        .unwrap();
    let index_lo = maxima.iter().copied().filter(|&m| m < shallow).max().unwrap_or(0);
    let index_hi = maxima.iter().copied().filter(|&m| m > shallow).min().unwrap_or(n - 1);
    Ok(WellRegion {
        phi_lo: grid[index_lo],
        phi_hi: grid[index_hi],
        index_lo,
        index_hi,
    })
}

/// Probability mass of state `col` inside `region`.
fn region_mass(sol: &EigenSolution, region: &WellRegion, col: usize) -> f64 {
    (region.index_lo..=region.index_hi)
        .map(|r| sol.states[(r, col)].norm_sqr())
        .sum()
}

/// Designate the metastable-well qubit of a phase-qubit solution: the
/// two lowest eigenstates with at least half their probability mass
/// inside the shallow well. Requires k >= 6 solved states. Fails near
/// the end of the bias range where the excited state delocalizes.
pub fn select_metastable_qubit(sol: &EigenSolution, p: &PhaseQubitParams) -> Result<EigenSolution> {
    if !sol.basis.is_phase_grid() {
        return Err(Error::Incompatible("metastable selection requires a phase-grid solution".into()));
    }
    if sol.k() < 6 {
        return Err(Error::InvalidArgument(format!(
            "metastable selection needs at least 6 solved states, got {}",
            sol.k()
        )));
    }
    let region = shallow_well_region(p, &sol.basis)?;
    let mut chosen = Vec::with_capacity(2);
    let mut best_masses = Vec::new();
    for i in 0..sol.k() {
        let mass = region_mass(sol, &region, i);
        if mass >= 0.5 {
            chosen.push(i);
            if chosen.len() == 2 {
                break;
            }
        } else if mass > 0.2 {
            best_masses.push((i, mass));
        }
    }
    if chosen.len() < 2 {
        return Err(Error::NoMetastableQubit(format!(
            "bias {}: {} state(s) reached the 0.5 localization threshold (near misses: {:?})",
            p.bias,
            chosen.len(),
            best_masses
        )));
    }
    let mut out = sol.clone();
    out.qubit_indices = (chosen[0], chosen[1]);
    out.omega_q = out.energies[chosen[1]] - out.energies[chosen[0]];
    Ok(out)
}

/// Expectation value of the total charge parity (-1)^(n_p + n_m) in
/// state `col` of a charge-lattice solution. The Hamiltonian conserves
/// this parity exactly, so the value is +-1 up to rounding.
pub fn charge_parity_expectation(sol: &EigenSolution, col: usize) -> Result<f64> {
    let sites = sol.basis.charge_sites();
    if sites.is_empty() {
        return Err(Error::Incompatible("charge parity requires a ChargeLattice basis".into()));
    }
    Ok(sites
        .iter()
        .enumerate()
        .map(|(r, &(np, nm))| {
            let sign = if (np + nm).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            sign * sol.states[(r, col)].norm_sqr()
        })
        .sum())
}

/// Indices of the computed states lying in the even total-parity sector.
pub fn even_parity_indices(sol: &EigenSolution) -> Result<Vec<usize>> {
    (0..sol.k())
        .filter_map(|i| match charge_parity_expectation(sol, i) {
            Ok(p) => {
                if p > 0.0 {
                    Some(Ok(i))
                } else {
                    None
                }
            }
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// Designate the flux-qubit doublet: the two lowest eigenstates in the
/// even total-charge-parity sector.
///
/// Two-pi periodicity in the junction phases (phi_1, phi_2) restricts
/// the physical lattice to even n_p + n_m; the tensor-product lattice
/// used for the matrices double-covers it, producing a second, decoupled
/// copy of the spectrum. All coupling operators preserve the parity, so
/// matrix elements between states of different sectors vanish
/// identically and the physical qubit must be designated inside one
/// sector. The even sector contains the charge ground state.
pub fn select_flux_qubit(sol: &EigenSolution) -> Result<EigenSolution> {
    let even = even_parity_indices(sol)?;
    if even.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "only {} even-parity state(s) among the {} solved: increase k",
            even.len(),
            sol.k()
        )));
    }
    let mut out = sol.clone();
    out.qubit_indices = (even[0], even[1]);
    out.omega_q = out.energies[even[1]] - out.energies[even[0]];
    Ok(out)
}

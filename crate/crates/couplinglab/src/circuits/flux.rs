//! Three-junction flux qubit in the two-coordinate charge basis.
//!
//! A superconducting loop is interrupted by two identical junctions
//! (Josephson energy E_J, charging energy E_c = e^2/2C) and one smaller
//! junction scaled by `alpha`. Flux quantization eliminates the third
//! phase, `phi_3 = 2 pi f + phi_1 - phi_2`, and in the sum/difference
//! coordinates `phi_p = (phi_1 + phi_2)/2`, `phi_m = (phi_1 - phi_2)/2`
//! the Hamiltonian reduces to
//!
//! ```text
//! H = E_p n_p^2 + E_m n_m^2 - 2 E_J cos(phi_p) cos(phi_m)
//!     - alpha E_J cos(2 pi f + 2 phi_m) + E_J (2 + alpha),
//! E_p = 2 E_c,   E_m = E_p / (1 + 2 alpha).
//! ```
//!
//! Matrices are expressed in units of E_J on the tensor-product integer
//! lattice for `(n_p, n_m)`. That lattice double-covers the physical
//! configuration space (2 pi periodicity in `phi_1`, `phi_2` constrains
//! `n_p + n_m` to be even), so the spectrum consists of two decoupled
//! total-parity sectors; see `spectral::select_flux_qubit` for the
//! designation of the physical qubit doublet.

use crate::basis::BasisSpec;
use crate::error::{Error, Result};
use crate::matrix::{HamiltonianMatrix, MatrixData};
use faer::Mat;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Dimensionless flux-qubit parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxQubitParams {
    /// Ratio E_J / E_c of the large junctions.
    pub ej_over_ec: f64,
    /// Size ratio of the third junction, 0.5 < alpha < 1 for a double
    /// well in phi_m.
    pub alpha: f64,
    /// External flux through the loop in units of phi_0; f = 0.5 is the
    /// degeneracy point.
    pub frustration: f64,
}

impl FluxQubitParams {
    pub fn new(ej_over_ec: f64, alpha: f64, frustration: f64) -> Result<Self> {
        let p = Self { ej_over_ec, alpha, frustration };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ej_over_ec > 0.0) || !self.ej_over_ec.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ej_over_ec must be positive, got {}",
                self.ej_over_ec
            )));
        }
        if !(self.alpha > 0.5 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0.5, 1) for a double-well phi_m potential, got {}",
                self.alpha
            )));
        }
        if !self.frustration.is_finite() {
            return Err(Error::InvalidParameter("frustration must be finite".into()));
        }
        Ok(())
    }

    pub fn with_frustration(mut self, f: f64) -> Self {
        self.frustration = f;
        self
    }

    /// Reference parameters used in the examples: E_J/E_c = 40, alpha = 0.68.
    pub fn reference(frustration: f64) -> Self {
        Self { ej_over_ec: 40.0, alpha: 0.68, frustration }
    }

    /// E_p / E_J = 2 E_c / E_J.
    pub fn e_p_over_ej(&self) -> f64 {
        2.0 / self.ej_over_ec
    }

    /// E_m / E_J = E_p / (E_J (1 + 2 alpha)).
    pub fn e_m_over_ej(&self) -> f64 {
        self.e_p_over_ej() / (1.0 + 2.0 * self.alpha)
    }
}

/// Charging (kinetic) part `E_p n_p^2 + E_m n_m^2` in units of E_J,
/// diagonal in the charge basis. Exposed separately because its spectrum
/// is known in closed form, which makes it a convenient oracle.
pub fn flux_charging_hamiltonian(p: &FluxQubitParams, basis: &BasisSpec) -> Result<HamiltonianMatrix> {
    p.validate()?;
    if !basis.is_charge_lattice() {
        return Err(Error::Incompatible("flux qubit requires a ChargeLattice basis".into()));
    }
    let (ep, em) = (p.e_p_over_ej(), p.e_m_over_ej());
    let diag: Vec<f64> = basis
        .charge_sites()
        .iter()
        .map(|&(np, nm)| ep * (np * np) as f64 + em * (nm * nm) as f64)
        .collect();
    HamiltonianMatrix::new(MatrixData::Diagonal(diag), basis.clone(), "flux-qubit charging term [E_J]")
}

/// Full flux-qubit Hamiltonian in units of E_J, including the constant
/// offset E_J (2 + alpha).
///
/// Nonzero couplings on the lattice:
/// * `cos(phi_p) cos(phi_m)` moves `(n_p, n_m) -> (n_p +- 1, n_m +- 1)`
///   with amplitude -1/2 (all four sign combinations);
/// * the third-junction term moves `n_m -> n_m +- 2` with amplitude
///   `-(alpha/2) exp(-+ i 2 pi f)`.
pub fn build_flux_qubit_hamiltonian(p: &FluxQubitParams, basis: &BasisSpec) -> Result<HamiltonianMatrix> {
    p.validate()?;
    let (cp, cm) = match *basis {
        BasisSpec::ChargeLattice { n_p_cutoff, n_m_cutoff } => (n_p_cutoff as i64, n_m_cutoff as i64),
        BasisSpec::PhaseGrid { .. } => {
            return Err(Error::Incompatible("flux qubit requires a ChargeLattice basis".into()))
        }
    };
    let dim = basis.dim();
    let (ep, em) = (p.e_p_over_ej(), p.e_m_over_ej());
    let offset = 2.0 + p.alpha;
    let j3_up = C64::from_polar(-p.alpha / 2.0, -2.0 * PI * p.frustration);
    let mut m = Mat::<C64>::zeros(dim, dim);
    let idx = |np: i64, nm: i64| ((np + cp) * (2 * cm + 1) + (nm + cm)) as usize;
    for np in -cp..=cp {
        for nm in -cm..=cm {
            let col = idx(np, nm);
            m[(col, col)] = C64::new(ep * (np * np) as f64 + em * (nm * nm) as f64 + offset, 0.0);
            for dp in [-1i64, 1] {
                for dm in [-1i64, 1] {
                    if (np + dp).abs() <= cp && (nm + dm).abs() <= cm {
                        m[(idx(np + dp, nm + dm), col)] += C64::new(-0.5, 0.0);
                    }
                }
            }
            if nm + 2 <= cm {
                m[(idx(np, nm + 2), col)] += j3_up;
            }
            if nm - 2 >= -cm {
                m[(idx(np, nm - 2), col)] += j3_up.conj();
            }
        }
    }
    HamiltonianMatrix::new(MatrixData::Complex(m), basis.clone(), "flux-qubit Hamiltonian [E_J]")
}

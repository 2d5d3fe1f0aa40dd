//! Basis descriptions for the two circuit types.
//!
//! The flux-biased phase qubit lives on a uniform one-dimensional phase
//! grid, the three-junction flux qubit on a truncated two-dimensional
//! integer charge lattice for the (n_p, n_m) pair. Every matrix in the
//! crate carries one of these descriptions so that mixing operators and
//! states from different discretizations is caught at run time.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Differentiation scheme used for kinetic terms on a phase grid.
///
/// `Spectral` is the default: periodic Fourier differentiation, which
/// converges exponentially in the number of grid points for states
/// confined well inside the grid. `CentralDifference` is a second-order
/// fallback used as an independent cross-check; both schemes must agree
/// within the slower scheme's own convergence tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffScheme {
    #[default]
    Spectral,
    CentralDifference,
}

/// Discretization of a circuit Hilbert space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BasisSpec {
    /// Uniform grid of `n_points` phase values from `phi_min` to
    /// `phi_max` inclusive (step `(phi_max - phi_min) / (n_points - 1)`).
    PhaseGrid {
        phi_min: f64,
        phi_max: f64,
        n_points: usize,
        scheme: DiffScheme,
    },
    /// Tensor-product integer charge lattice with
    /// `n_p in [-n_p_cutoff, n_p_cutoff]`, `n_m in [-n_m_cutoff, n_m_cutoff]`.
    /// Site `(n_p, n_m)` maps to index
    /// `(n_p + n_p_cutoff) * (2 n_m_cutoff + 1) + (n_m + n_m_cutoff)`.
    ChargeLattice {
        n_p_cutoff: usize,
        n_m_cutoff: usize,
    },
}

/// Default number of grid points for a standalone phase-qubit basis.
pub const DEFAULT_PHASE_GRID_POINTS: usize = 4096;

/// Default charge cutoff per axis for the flux qubit. With E_J/E_c = 40
/// the charge spread of the low states is about sqrt(E_J/E_c) ~ 6, so 16
/// leaves the lowest levels converged to well below 1e-9.
pub const DEFAULT_CHARGE_CUTOFF: usize = 16;

impl BasisSpec {
    /// Validated phase-grid constructor.
    pub fn phase_grid(phi_min: f64, phi_max: f64, n_points: usize, scheme: DiffScheme) -> Result<Self> {
        if !(phi_min.is_finite() && phi_max.is_finite()) {
            return Err(Error::InvalidParameter("phase grid bounds must be finite".into()));
        }
        if phi_max <= phi_min {
            return Err(Error::InvalidParameter(format!(
                "phase grid needs phi_max > phi_min, got [{phi_min}, {phi_max}]"
            )));
        }
        if n_points < 64 {
            return Err(Error::InvalidParameter(format!(
                "phase grid needs at least 64 points, got {n_points}"
            )));
        }
        Ok(BasisSpec::PhaseGrid { phi_min, phi_max, n_points, scheme })
    }

    /// Validated charge-lattice constructor.
    pub fn charge_lattice(n_p_cutoff: usize, n_m_cutoff: usize) -> Result<Self> {
        if n_p_cutoff < 4 || n_m_cutoff < 4 {
            return Err(Error::InvalidParameter(format!(
                "charge cutoffs must be at least 4, got ({n_p_cutoff}, {n_m_cutoff})"
            )));
        }
        Ok(BasisSpec::ChargeLattice { n_p_cutoff, n_m_cutoff })
    }

    /// Default grid for a phase qubit biased at `bias` (units of phi_0):
    /// `[2 pi bias - 2 pi, 2 pi bias + 2 pi]` with
    /// [`DEFAULT_PHASE_GRID_POINTS`] points. The window contains both
    /// potential wells at every bias studied here.
    pub fn default_phase_grid(bias: f64) -> Self {
        let center = 2.0 * std::f64::consts::PI * bias;
        BasisSpec::PhaseGrid {
            phi_min: center - 2.0 * std::f64::consts::PI,
            phi_max: center + 2.0 * std::f64::consts::PI,
            n_points: DEFAULT_PHASE_GRID_POINTS,
            scheme: DiffScheme::Spectral,
        }
    }

    /// Default flux-qubit lattice (cutoff 16 per axis, dimension 1089).
    pub fn default_charge_lattice() -> Self {
        BasisSpec::ChargeLattice {
            n_p_cutoff: DEFAULT_CHARGE_CUTOFF,
            n_m_cutoff: DEFAULT_CHARGE_CUTOFF,
        }
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        match *self {
            BasisSpec::PhaseGrid { n_points, .. } => n_points,
            BasisSpec::ChargeLattice { n_p_cutoff, n_m_cutoff } => {
                (2 * n_p_cutoff + 1) * (2 * n_m_cutoff + 1)
            }
        }
    }

    /// Grid step of a phase grid.
    pub fn grid_step(&self) -> Option<f64> {
        match *self {
            BasisSpec::PhaseGrid { phi_min, phi_max, n_points, .. } => {
                Some((phi_max - phi_min) / (n_points - 1) as f64)
            }
            BasisSpec::ChargeLattice { .. } => None,
        }
    }

    /// Phase values of a phase grid, empty for a charge lattice.
    pub fn grid_values(&self) -> Vec<f64> {
        match *self {
            BasisSpec::PhaseGrid { phi_min, n_points, .. } => {
                let h = self.grid_step().unwrap();
                (0..n_points).map(|i| phi_min + i as f64 * h).collect()
            }
            BasisSpec::ChargeLattice { .. } => Vec::new(),
        }
    }

    /// Charge-lattice sites `(n_p, n_m)` in index order, empty for a grid.
    pub fn charge_sites(&self) -> Vec<(i64, i64)> {
        match *self {
            BasisSpec::ChargeLattice { n_p_cutoff, n_m_cutoff } => {
                let (cp, cm) = (n_p_cutoff as i64, n_m_cutoff as i64);
                let mut sites = Vec::with_capacity(self.dim());
                for np in -cp..=cp {
                    for nm in -cm..=cm {
                        sites.push((np, nm));
                    }
                }
                sites
            }
            BasisSpec::PhaseGrid { .. } => Vec::new(),
        }
    }

    /// Index of charge site `(n_p, n_m)`, if inside the lattice.
    pub fn charge_index(&self, np: i64, nm: i64) -> Option<usize> {
        match *self {
            BasisSpec::ChargeLattice { n_p_cutoff, n_m_cutoff } => {
                let (cp, cm) = (n_p_cutoff as i64, n_m_cutoff as i64);
                if np.abs() > cp || nm.abs() > cm {
                    None
                } else {
                    Some(((np + cp) * (2 * cm + 1) + (nm + cm)) as usize)
                }
            }
            BasisSpec::PhaseGrid { .. } => None,
        }
    }

    pub fn is_phase_grid(&self) -> bool {
        matches!(self, BasisSpec::PhaseGrid { .. })
    }

    pub fn is_charge_lattice(&self) -> bool {
        matches!(self, BasisSpec::ChargeLattice { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let b = BasisSpec::charge_lattice(16, 16).unwrap();
        assert_eq!(b.dim(), 33 * 33);
        let g = BasisSpec::phase_grid(0.0, 1.0, 128, DiffScheme::Spectral).unwrap();
        assert_eq!(g.dim(), 128);
    }

    #[test]
    fn grid_is_inclusive_of_both_endpoints() {
        let g = BasisSpec::phase_grid(0.0, 2.0, 65, DiffScheme::Spectral).unwrap();
        let v = g.grid_values();
        assert_eq!(v.len(), 65);
        assert_eq!(v[0], 0.0);
        assert!((v[64] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn charge_indexing_round_trips() {
        let b = BasisSpec::charge_lattice(5, 7).unwrap();
        let sites = b.charge_sites();
        assert_eq!(sites.len(), b.dim());
        for (i, &(np, nm)) in sites.iter().enumerate() {
            assert_eq!(b.charge_index(np, nm), Some(i));
        }
        assert_eq!(b.charge_index(6, 0), None);
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        assert!(BasisSpec::phase_grid(0.0, 1.0, 63, DiffScheme::Spectral).is_err());
        assert!(BasisSpec::phase_grid(1.0, 0.0, 128, DiffScheme::Spectral).is_err());
        assert!(BasisSpec::charge_lattice(3, 16).is_err());
    }
}

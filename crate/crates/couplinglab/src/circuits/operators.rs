//! Coupling operators for both circuits.
//!
//! Each microscopic defect model couples to the circuit through one of
//! these operators; the dimensionless coupling factors are its matrix
//! elements between the designated qubit states.

use crate::basis::{BasisSpec, DiffScheme};
use crate::error::{Error, Result};
use crate::matrix::{HamiltonianMatrix, MatrixData};
use faer::Mat;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Operator selector. The first three act on a phase grid, the rest on
/// the charge lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// cos(phi): critical-current fluctuator coupling of the phase qubit.
    CosPhase,
    /// phi (multiplication by the grid value): flux-fluctuator coupling.
    Phase,
    /// q = -i d/dphi: charge-dipole coupling.
    Charge,
    /// cos(2 pi f + 2 phi_m): critical-current fluctuator in the third
    /// junction of the flux qubit.
    CosJ3,
    /// sin(2 pi f + 2 phi_m): flux fluctuator seen by the flux qubit.
    SinJ3,
    /// n_m: charge operator entering the flux-qubit dipole coupling.
    ChargeM,
    /// cos(phi_p + phi_m) = cos(phi_1): critical-current fluctuator
    /// located in one of the large junctions instead of the third one.
    CosJ1,
}

impl OperatorKind {
    pub fn compatible_with(&self, basis: &BasisSpec) -> bool {
        match self {
            OperatorKind::CosPhase | OperatorKind::Phase | OperatorKind::Charge => basis.is_phase_grid(),
            OperatorKind::CosJ3 | OperatorKind::SinJ3 | OperatorKind::ChargeM | OperatorKind::CosJ1 => {
                basis.is_charge_lattice()
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            OperatorKind::CosPhase => "cos(phi)",
            OperatorKind::Phase => "phi",
            OperatorKind::Charge => "q = -i d/dphi",
            OperatorKind::CosJ3 => "cos(2 pi f + 2 phi_m)",
            OperatorKind::SinJ3 => "sin(2 pi f + 2 phi_m)",
            OperatorKind::ChargeM => "n_m",
            OperatorKind::CosJ1 => "cos(phi_p + phi_m)",
        }
    }
}

/// Periodic spectral first-derivative matrix (n points, period `len`).
/// Zero diagonal; for even n the Nyquist mode is differentiated to zero,
/// which is the standard trigonometric-interpolation convention.
fn spectral_d1(n: usize, len: f64) -> Mat<f64> {
    let hp = 2.0 * PI / n as f64;
    let scale = 2.0 * PI / len;
    if n % 2 == 0 {
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else {
                let k = i as i64 - j as i64;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                scale * sign * 0.5 / (k as f64 * hp / 2.0).tan()
            }
        })
    } else {
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else {
                let k = i as i64 - j as i64;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                scale * sign * 0.5 / (k as f64 * hp / 2.0).sin()
            }
        })
    }
}

/// Build the requested operator in the given basis. `frustration` enters
/// only CosJ3 and SinJ3.
pub fn build_operator(kind: OperatorKind, basis: &BasisSpec, frustration: f64) -> Result<HamiltonianMatrix> {
    if !kind.compatible_with(basis) {
        return Err(Error::Incompatible(format!(
            "operator {:?} is not defined in basis {:?}",
            kind, basis
        )));
    }
    let mut built = build_operator_inner(kind, basis, frustration)?;
    built.operator_kind = Some(kind);
    Ok(built)
}

fn build_operator_inner(kind: OperatorKind, basis: &BasisSpec, frustration: f64) -> Result<HamiltonianMatrix> {
    match kind {
        OperatorKind::CosPhase => {
            let diag: Vec<f64> = basis.grid_values().iter().map(|p| p.cos()).collect();
            HamiltonianMatrix::new(MatrixData::Diagonal(diag), basis.clone(), kind.label())
        }
        OperatorKind::Phase => {
            HamiltonianMatrix::new(MatrixData::Diagonal(basis.grid_values()), basis.clone(), kind.label())
        }
        OperatorKind::Charge => {
            let (n, scheme) = match *basis {
                BasisSpec::PhaseGrid { n_points, scheme, .. } => (n_points, scheme),
                _ => unreachable!(),
            };
            let h = basis.grid_step().unwrap();
            let d1 = match scheme {
                DiffScheme::Spectral => spectral_d1(n, n as f64 * h),
                DiffScheme::CentralDifference => Mat::from_fn(n, n, |i, j| {
                    // antisymmetric central stencil; edge rows use the
                    // same stencil against an implicit zero outside
                    if j == i + 1 {
                        0.5 / h
                    } else if i == j + 1 {
                        -0.5 / h
                    } else {
                        0.0
                    }
                }),
            };
            let m = Mat::from_fn(n, n, |i, j| C64::new(0.0, -d1[(i, j)]));
            HamiltonianMatrix::new(MatrixData::Complex(m), basis.clone(), kind.label())
        }
        OperatorKind::ChargeM => {
            let diag: Vec<f64> = basis.charge_sites().iter().map(|&(_, nm)| nm as f64).collect();
            HamiltonianMatrix::new(MatrixData::Diagonal(diag), basis.clone(), kind.label())
        }
        OperatorKind::CosJ3 | OperatorKind::SinJ3 => {
            let (cp, cm) = match *basis {
                BasisSpec::ChargeLattice { n_p_cutoff, n_m_cutoff } => (n_p_cutoff as i64, n_m_cutoff as i64),
                _ => unreachable!(),
            };
            // cos: n_m -> n_m + 2 carries (1/2) e^{-i 2 pi f}
            // sin: n_m -> n_m + 2 carries (i/2) e^{-i 2 pi f}
            let up = match kind {
                OperatorKind::CosJ3 => C64::from_polar(0.5, -2.0 * PI * frustration),
                _ => C64::new(0.0, 0.5) * C64::from_polar(1.0, -2.0 * PI * frustration),
            };
            let dim = basis.dim();
            let mut m = Mat::<C64>::zeros(dim, dim);
            let idx = |np: i64, nm: i64| ((np + cp) * (2 * cm + 1) + (nm + cm)) as usize;
            for np in -cp..=cp {
                for nm in -cm..=cm {
                    let col = idx(np, nm);
                    if nm + 2 <= cm {
                        m[(idx(np, nm + 2), col)] += up;
                    }
                    if nm - 2 >= -cm {
                        m[(idx(np, nm - 2), col)] += up.conj();
                    }
                }
            }
            HamiltonianMatrix::new(MatrixData::Complex(m), basis.clone(), kind.label())
        }
        OperatorKind::CosJ1 => {
            let (cp, cm) = match *basis {
                BasisSpec::ChargeLattice { n_p_cutoff, n_m_cutoff } => (n_p_cutoff as i64, n_m_cutoff as i64),
                _ => unreachable!(),
            };
            let dim = basis.dim();
            let mut m = Mat::<f64>::zeros(dim, dim);
            let idx = |np: i64, nm: i64| ((np + cp) * (2 * cm + 1) + (nm + cm)) as usize;
            for np in -cp..=cp {
                for nm in -cm..=cm {
                    let col = idx(np, nm);
                    if np + 1 <= cp && nm + 1 <= cm {
                        m[(idx(np + 1, nm + 1), col)] += 0.5;
                    }
                    if np - 1 >= -cp && nm - 1 >= -cm {
                        m[(idx(np - 1, nm - 1), col)] += 0.5;
                    }
                }
            }
            HamiltonianMatrix::new(MatrixData::Real(m), basis.clone(), kind.label())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_basis_mismatch_is_an_error() {
        let grid = BasisSpec::phase_grid(0.0, 1.0, 64, DiffScheme::Spectral).unwrap();
        let lattice = BasisSpec::charge_lattice(4, 4).unwrap();
        assert!(build_operator(OperatorKind::CosJ3, &grid, 0.5).is_err());
        assert!(build_operator(OperatorKind::Charge, &lattice, 0.5).is_err());
    }

    #[test]
    fn charge_operator_has_zero_diagonal() {
        for scheme in [DiffScheme::Spectral, DiffScheme::CentralDifference] {
            let grid = BasisSpec::phase_grid(0.0, 3.0, 64, scheme).unwrap();
            let q = build_operator(OperatorKind::Charge, &grid, 0.0).unwrap();
            for i in 0..q.dim() {
                assert_eq!(q.entry(i, i), C64::new(0.0, 0.0));
            }
            assert!(q.hermiticity_defect() < 1e-12);
        }
    }

    #[test]
    fn phase_operator_multiplies_by_grid_values() {
        // 3-point grid on [0, 2 pi]: diag(0, pi, 2 pi)
        let grid = BasisSpec::PhaseGrid {
            phi_min: 0.0,
            phi_max: 2.0 * PI,
            n_points: 3,
            scheme: DiffScheme::Spectral,
        };
        let phi = build_operator(OperatorKind::Phase, &grid, 0.0).unwrap();
        assert_eq!(phi.entry(0, 0).re, 0.0);
        assert!((phi.entry(1, 1).re - PI).abs() < 1e-15);
        assert!((phi.entry(2, 2).re - 2.0 * PI).abs() < 1e-15);
        assert_eq!(phi.entry(0, 1), C64::new(0.0, 0.0));
    }

    #[test]
    fn sin_at_quarter_flux_equals_cos_at_zero() {
        // sin(2 pi 0.25 + 2 phi_m) = cos(2 phi_m)
        let basis = BasisSpec::charge_lattice(5, 5).unwrap();
        let s = build_operator(OperatorKind::SinJ3, &basis, 0.25).unwrap();
        let c = build_operator(OperatorKind::CosJ3, &basis, 0.0).unwrap();
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                assert!((s.entry(i, j) - c.entry(i, j)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn cos_squared_plus_sin_squared_is_identity_in_the_interior() {
        let basis = BasisSpec::charge_lattice(6, 8).unwrap();
        let sites = basis.charge_sites();
        for f in [0.0, 0.3] {
            let c = build_operator(OperatorKind::CosJ3, &basis, f).unwrap();
            let s = build_operator(OperatorKind::SinJ3, &basis, f).unwrap();
            let dim = basis.dim();
            // rows whose n_m is at least 2 away from the truncation edge
            for i in 0..dim {
                let (_, nm) = sites[i];
                if nm.abs() > 6 {
                    continue;
                }
                for j in 0..dim {
                    let mut acc = C64::new(0.0, 0.0);
                    for l in 0..dim {
                        acc += c.entry(i, l) * c.entry(l, j) + s.entry(i, l) * s.entry(l, j);
                    }
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (acc - C64::new(expect, 0.0)).norm() < 1e-10,
                        "(C^2+S^2)[{i},{j}] = {acc} at f = {f}"
                    );
                }
            }
        }
    }

    #[test]
    fn all_operators_are_hermitian() {
        let grid = BasisSpec::phase_grid(-1.0, 1.0, 65, DiffScheme::Spectral).unwrap();
        let lattice = BasisSpec::charge_lattice(4, 5).unwrap();
        for kind in [OperatorKind::CosPhase, OperatorKind::Phase, OperatorKind::Charge] {
            let o = build_operator(kind, &grid, 0.1).unwrap();
            assert!(o.hermiticity_defect() < 1e-12, "{kind:?}");
        }
        for kind in [OperatorKind::CosJ3, OperatorKind::SinJ3, OperatorKind::ChargeM, OperatorKind::CosJ1] {
            let o = build_operator(kind, &lattice, 0.37).unwrap();
            assert!(o.hermiticity_defect() < 1e-12, "{kind:?}");
        }
    }
}

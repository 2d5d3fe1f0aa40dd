//! Qubit-defect coupling factors and physical coupling strengths.
//!
//! A microscopic two-level defect couples to the circuit through an
//! operator O with interaction `upsilon * O (cos(theta) sx_T + sin(theta) sz_T)`.
//! Projected onto the designated qubit states and dropping the mixed
//! terms (which do not shift the spectrum), the interaction reduces to
//!
//! ```text
//! upsilon (o_x cos(theta) sx_q sx_T + o_z sin(theta) sz_q sz_T)
//! ```
//!
//! with the dimensionless factors
//!
//! ```text
//! o_x = |<1| O |0>|,    o_z = |<1| O |1> - <0| O |0>| / 2.
//! ```
//!
//! For states admitting a real representation (all cases handled here,
//! via time-reversal-type symmetries of both circuits) `|<1|O|0>|`
//! coincides with `|<1|O|0> + <0|O|1>| / 2` evaluated in the real gauge;
//! taking the modulus keeps both factors independent of eigenvector
//! phase conventions.

use crate::circuits::{build_operator, FluxQubitParams, OperatorKind, PhaseQubitParams};
use crate::constants::{E_CHARGE, FLUX_QUANTUM, H_PLANCK};
use crate::error::{Error, Result};
use crate::matrix::HamiltonianMatrix;
use crate::spectral::EigenSolution;
use std::f64::consts::PI;

/// Two-level defect parameters. `epsilon` is the asymmetry energy and
/// `delta` the tunneling matrix element, both over h in GHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TLSParams {
    pub epsilon: f64,
    pub delta: f64,
}

impl TLSParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !epsilon.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidParameter("TLS energies must be finite".into()));
        }
        if delta < 0.0 {
            return Err(Error::InvalidParameter(format!("delta must be non-negative, got {delta}")));
        }
        if epsilon == 0.0 && delta == 0.0 {
            return Err(Error::InvalidParameter("TLS splitting must be positive".into()));
        }
        Ok(Self { epsilon, delta })
    }

    /// Mixing angle, tan(theta) = epsilon / delta. With delta >= 0 the
    /// angle lies in (-pi/2, pi/2] and cos(theta) >= 0; the sign of
    /// epsilon carries the sign of the longitudinal term.
    pub fn theta(&self) -> f64 {
        self.epsilon.atan2(self.delta)
    }

    /// Level splitting sqrt(epsilon^2 + delta^2), GHz.
    pub fn omega_t(&self) -> f64 {
        self.epsilon.hypot(self.delta)
    }
}

/// Microscopic coupling model with its physical scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingModel {
    /// Defect toggles the junction critical current by `delta_i0` (A).
    CriticalCurrent { delta_i0: f64 },
    /// Charge dipole of length `d` (m) in a junction of thickness `x`
    /// (m), at angle `eta` to the junction field.
    Dipole { d: f64, x: f64, eta: f64 },
    /// Defect toggles the flux threading the loop. For the phase qubit
    /// `delta_phi_e` is a flux in webers; for the flux qubit it is a
    /// fraction of phi_0 (the two published prefactor formulas carry
    /// different conventions and are kept as printed).
    FluxFluctuator { delta_phi_e: f64 },
}

impl CouplingModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CouplingModel::CriticalCurrent { delta_i0 } => {
                if !delta_i0.is_finite() {
                    return Err(Error::InvalidParameter("delta_i0 must be finite".into()));
                }
            }
            CouplingModel::Dipole { d, x, eta } => {
                if !(x > 0.0) || !x.is_finite() {
                    return Err(Error::InvalidParameter(format!("junction thickness x must be positive, got {x}")));
                }
                if d < 0.0 || !d.is_finite() || !eta.is_finite() {
                    return Err(Error::InvalidParameter("dipole parameters must be finite, d >= 0".into()));
                }
            }
            CouplingModel::FluxFluctuator { delta_phi_e } => {
                if !delta_phi_e.is_finite() {
                    return Err(Error::InvalidParameter("delta_phi_e must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Coupling operator for this model on the given circuit type.
    pub fn operator_kind(&self, flux_circuit: bool) -> OperatorKind {
        match (self, flux_circuit) {
            (CouplingModel::CriticalCurrent { .. }, false) => OperatorKind::CosPhase,
            (CouplingModel::FluxFluctuator { .. }, false) => OperatorKind::Phase,
            (CouplingModel::Dipole { .. }, false) => OperatorKind::Charge,
            (CouplingModel::CriticalCurrent { .. }, true) => OperatorKind::CosJ3,
            (CouplingModel::FluxFluctuator { .. }, true) => OperatorKind::SinJ3,
            (CouplingModel::Dipole { .. }, true) => OperatorKind::ChargeM,
        }
    }
}

/// Dimensionless transverse / longitudinal coupling factors.
/// `operator_kind` is `None` when the factors were taken of a matrix
/// that is not one of the named coupling operators (e.g. H itself).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingFactors {
    pub o_x: f64,
    pub o_z: f64,
    pub operator_kind: Option<OperatorKind>,
}

/// Physical coupling strengths, GHz: `g_x sx_q sx_T + g_z sz_q sz_T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliCoupling {
    pub g_x: f64,
    pub g_z: f64,
}

/// Coupling factors of operator `o` between the designated qubit states
/// of `sol`. Gauge independent and non-negative.
pub fn coupling_factors(sol: &EigenSolution, o: &HamiltonianMatrix) -> Result<CouplingFactors> {
    if sol.basis != o.basis {
        return Err(Error::Incompatible(format!(
            "operator basis {:?} does not match solution basis {:?}",
            o.basis, sol.basis
        )));
    }
    let (s0, s1) = sol.qubit_states();
    let off = o.bilinear(&s1, &s0);
    let d1 = o.bilinear(&s1, &s1);
    let d0 = o.bilinear(&s0, &s0);
    Ok(CouplingFactors {
        o_x: off.norm(),
        o_z: (d1 - d0).norm() / 2.0,
        operator_kind: o.operator_kind,
    })
}

/// Circuit the prefactor refers to. The flux qubit carries its absolute
/// Josephson energy (GHz) because the dimensionless Hamiltonian alone
/// does not fix the coupling scale.
#[derive(Debug, Clone, Copy)]
pub enum CircuitRef<'a> {
    Phase(&'a PhaseQubitParams),
    Flux { params: &'a FluxQubitParams, ej_ghz: f64 },
}

/// Interaction prefactor upsilon over h, in GHz, sign included.
///
/// Phase qubit: `upsilon_i = -dI0 phi_0 / 2 pi`, `upsilon_q = 2 e^2 d / (C x)`,
/// `upsilon_phi = -(dphi_e / L)(phi_0 / 2 pi)` (dphi_e in webers).
/// Flux qubit: `upsilon_i = -alpha phi_0 dI0 / 2 pi`,
/// `upsilon_phi = 2 pi alpha E_J dphi_e` (dphi_e as a fraction of phi_0).
/// The flux-qubit dipole coupling is assembled by
/// [`dipole_coupling_flux`] instead.
pub fn model_prefactor(model: &CouplingModel, circuit: CircuitRef<'_>) -> Result<f64> {
    model.validate()?;
    let to_ghz = 1.0 / (H_PLANCK * 1e9);
    match (model, circuit) {
        (CouplingModel::CriticalCurrent { delta_i0 }, CircuitRef::Phase(_)) => {
            Ok(-delta_i0 * FLUX_QUANTUM / (2.0 * PI) * to_ghz)
        }
        (CouplingModel::Dipole { d, x, .. }, CircuitRef::Phase(p)) => {
            Ok(2.0 * E_CHARGE * E_CHARGE * d / (p.capacitance * x) * to_ghz)
        }
        (CouplingModel::FluxFluctuator { delta_phi_e }, CircuitRef::Phase(p)) => {
            Ok(-delta_phi_e / p.inductance * (FLUX_QUANTUM / (2.0 * PI)) * to_ghz)
        }
        (CouplingModel::CriticalCurrent { delta_i0 }, CircuitRef::Flux { params, .. }) => {
            Ok(-params.alpha * FLUX_QUANTUM * delta_i0 / (2.0 * PI) * to_ghz)
        }
        (CouplingModel::FluxFluctuator { delta_phi_e }, CircuitRef::Flux { params, ej_ghz }) => {
            Ok(2.0 * PI * params.alpha * ej_ghz * delta_phi_e)
        }
        (CouplingModel::Dipole { .. }, CircuitRef::Flux { .. }) => Err(Error::InvalidArgument(
            "flux-qubit dipole coupling is computed by dipole_coupling_flux, not a bare prefactor".into(),
        )),
    }
}

/// Assemble g_x, g_z from a prefactor, the factors of the matching
/// operator, and the defect mixing angle. The dipole model is purely
/// transverse: g_z is forced to zero exactly.
pub fn pauli_coupling(
    model: &CouplingModel,
    factors: &CouplingFactors,
    tls: &TLSParams,
    prefactor_ghz: f64,
) -> Result<PauliCoupling> {
    let expected_phase = model.operator_kind(false);
    let expected_flux = model.operator_kind(true);
    if factors.operator_kind != Some(expected_phase) && factors.operator_kind != Some(expected_flux) {
        return Err(Error::InvalidArgument(format!(
            "factors were computed with {:?}, but the model couples through {:?} or {:?}",
            factors.operator_kind, expected_phase, expected_flux
        )));
    }
    let theta = tls.theta();
    let g_x = prefactor_ghz * factors.o_x * theta.cos();
    let g_z = match model {
        CouplingModel::Dipole { .. } => 0.0,
        _ => prefactor_ghz * factors.o_z * theta.sin(),
    };
    Ok(PauliCoupling { g_x, g_z })
}

/// Flux-qubit charge-dipole coupling, exactly transverse.
///
/// The junction voltage seen by the dipole is proportional to the phase
/// velocity, and `d phi_m / dt = 2 E_m n_m / hbar` from the charging
/// term, so between eigenstates
/// `hbar omega_q |<0| phi_m |1>| = 2 E_m |<0| n_m |1>|` and
///
/// ```text
/// g_x = (d / x) cos(eta) cos(theta) * 2 (E_m/h) |<0| n_m |1>|   [GHz].
/// ```
pub fn dipole_coupling_flux(
    sol: &EigenSolution,
    p: &FluxQubitParams,
    model: &CouplingModel,
    tls: &TLSParams,
    ej_ghz: f64,
) -> Result<PauliCoupling> {
    let (d, x, eta) = match *model {
        CouplingModel::Dipole { d, x, eta } => (d, x, eta),
        _ => return Err(Error::InvalidArgument("dipole_coupling_flux needs a Dipole model".into())),
    };
    model.validate()?;
    if !sol.basis.is_charge_lattice() {
        return Err(Error::Incompatible("dipole_coupling_flux needs a charge-lattice solution".into()));
    }
    if !(ej_ghz > 0.0) {
        return Err(Error::InvalidParameter(format!("ej_ghz must be positive, got {ej_ghz}")));
    }
    let n_m = build_operator(OperatorKind::ChargeM, &sol.basis, p.frustration)?;
    let (s0, s1) = sol.qubit_states();
    let nm01 = n_m.bilinear(&s0, &s1).norm();
    let e_m_ghz = ej_ghz * p.e_m_over_ej();
    let g_x = (d / x) * eta.cos() * tls.theta().cos() * 2.0 * e_m_ghz * nm01;
    Ok(PauliCoupling { g_x, g_z: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisSpec;
    use crate::circuits::build_flux_qubit_hamiltonian;
    use crate::matrix::MatrixData;
    use crate::spectral::{eigensolve, select_flux_qubit};

    #[test]
    fn theta_convention() {
        let t = TLSParams::new(1.0, 1.0).unwrap();
        assert!((t.theta() - PI / 4.0).abs() < 1e-15);
        assert!((t.omega_t() - 2f64.sqrt()).abs() < 1e-15);
        let t = TLSParams::new(-1.0, 1.0).unwrap();
        assert!(t.theta() < 0.0);
        assert!(t.theta().cos() > 0.0);
        // pure asymmetry: theta = pi/2 exactly
        let t = TLSParams::new(1.0, 0.0).unwrap();
        assert!((t.theta() - PI / 2.0).abs() < 1e-15);
        assert!(TLSParams::new(f64::NAN, 1.0).is_err());
        assert!(TLSParams::new(1.0, -0.5).is_err());
        assert!(TLSParams::new(0.0, 0.0).is_err());
    }

    #[test]
    fn identity_operator_gives_zero_factors() {
        let basis = BasisSpec::charge_lattice(4, 4).unwrap();
        let h = build_flux_qubit_hamiltonian(&FluxQubitParams::reference(0.505), &basis).unwrap();
        let sol = eigensolve(&h, 4).unwrap();
        let eye = HamiltonianMatrix::new(
            MatrixData::Diagonal(vec![1.0; basis.dim()]),
            basis.clone(),
            "identity",
        )
        .unwrap();
        let f = coupling_factors(&sol, &eye).unwrap();
        assert!(f.o_x < 1e-12);
        assert!(f.o_z < 1e-12);
    }

    #[test]
    fn hamiltonian_as_operator_gives_half_splitting() {
        let basis = BasisSpec::charge_lattice(4, 4).unwrap();
        let h = build_flux_qubit_hamiltonian(&FluxQubitParams::reference(0.505), &basis).unwrap();
        let sol = eigensolve(&h, 4).unwrap();
        let f = coupling_factors(&sol, &h).unwrap();
        assert!(f.o_x < 1e-10, "o_x = {}", f.o_x);
        assert!((f.o_z - sol.omega_q / 2.0).abs() < 1e-10);
    }

    #[test]
    fn basis_mismatch_is_rejected() {
        let basis4 = BasisSpec::charge_lattice(4, 4).unwrap();
        let basis5 = BasisSpec::charge_lattice(5, 5).unwrap();
        let h = build_flux_qubit_hamiltonian(&FluxQubitParams::reference(0.5), &basis4).unwrap();
        let sol = eigensolve(&h, 3).unwrap();
        let o = crate::circuits::build_operator(OperatorKind::CosJ3, &basis5, 0.5).unwrap();
        assert!(matches!(coupling_factors(&sol, &o), Err(Error::Incompatible(_))));
    }

    #[test]
    fn degeneracy_point_zeros() {
        let basis = BasisSpec::charge_lattice(8, 8).unwrap();
        let h = build_flux_qubit_hamiltonian(&FluxQubitParams::reference(0.5), &basis).unwrap();
        let sol = select_flux_qubit(&eigensolve(&h, 8).unwrap()).unwrap();
        let cos = crate::circuits::build_operator(OperatorKind::CosJ3, &basis, 0.5).unwrap();
        let sin = crate::circuits::build_operator(OperatorKind::SinJ3, &basis, 0.5).unwrap();
        let fc = coupling_factors(&sol, &cos).unwrap();
        let fs = coupling_factors(&sol, &sin).unwrap();
        assert!(fc.o_x < 1e-8, "o_x^i = {}", fc.o_x);
        assert!(fs.o_z < 1e-8, "o_z^phi = {}", fs.o_z);
        // and the complementary factors are finite
        assert!(fc.o_z > 1e-3);
        assert!(fs.o_x > 1e-2);
    }

    #[test]
    fn prefactor_values() {
        let phase = PhaseQubitParams::reference(0.58);
        let v = model_prefactor(
            &CouplingModel::CriticalCurrent { delta_i0: 1e-9 },
            CircuitRef::Phase(&phase),
        )
        .unwrap();
        // hand calculation: -1e-9 * phi_0 / (2 pi h) = -0.4966835 GHz
        assert!((v - (-0.49668351077667555)).abs() < 1e-9, "{v}");

        let zero = model_prefactor(
            &CouplingModel::CriticalCurrent { delta_i0: 0.0 },
            CircuitRef::Phase(&phase),
        )
        .unwrap();
        assert_eq!(zero, 0.0);

        let flux = FluxQubitParams::reference(0.505);
        let v = model_prefactor(
            &CouplingModel::FluxFluctuator { delta_phi_e: 1e-6 },
            CircuitRef::Flux { params: &flux, ej_ghz: 100.0 },
        )
        .unwrap();
        // 2 pi * 0.68 * 100 GHz * 1e-6
        assert!((v - 4.2725660088821185e-4).abs() < 1e-12, "{v}");

        assert!(model_prefactor(
            &CouplingModel::Dipole { d: 1e-10, x: 2e-9, eta: 0.0 },
            CircuitRef::Flux { params: &flux, ej_ghz: 100.0 },
        )
        .is_err());
    }

    #[test]
    fn pauli_coupling_arithmetic() {
        let factors = CouplingFactors { o_x: 0.3, o_z: 0.1, operator_kind: Some(OperatorKind::CosPhase) };
        let model = CouplingModel::CriticalCurrent { delta_i0: 1e-9 };

        let tls = TLSParams::new(0.0, 5.0).unwrap(); // theta = 0
        let g = pauli_coupling(&model, &factors, &tls, 1.0).unwrap();
        assert_eq!(g.g_z, 0.0);

        let tls = TLSParams::new(5.0, 0.0).unwrap(); // theta = pi/2
        let g = pauli_coupling(&model, &factors, &tls, 1.0).unwrap();
        assert!(g.g_x.abs() < 1e-12);

        let tls = TLSParams::new(1.0, 1.0).unwrap(); // theta = pi/4
        let g = pauli_coupling(&model, &factors, &tls, 1.0).unwrap();
        assert!((g.g_x - 0.3 * 0.5f64.sqrt()).abs() < 1e-12);
        assert!((g.g_z - 0.1 * 0.5f64.sqrt()).abs() < 1e-12);
        assert!((g.g_x - 0.2121).abs() < 1e-4);
        assert!((g.g_z - 0.0707).abs() < 1e-4);

        // operator/model mismatch
        let wrong = CouplingFactors { o_x: 0.3, o_z: 0.1, operator_kind: Some(OperatorKind::Phase) };
        assert!(pauli_coupling(&model, &wrong, &tls, 1.0).is_err());
    }

    #[test]
    fn dipole_is_purely_transverse() {
        let basis = BasisSpec::charge_lattice(6, 6).unwrap();
        let p = FluxQubitParams::reference(0.505);
        let h = build_flux_qubit_hamiltonian(&p, &basis).unwrap();
        let sol = select_flux_qubit(&eigensolve(&h, 8).unwrap()).unwrap();
        let tls = TLSParams::new(1.0, 4.0).unwrap();

        let g = dipole_coupling_flux(
            &sol,
            &p,
            &CouplingModel::Dipole { d: 0.0, x: 2e-9, eta: 0.3 },
            &tls,
            100.0,
        )
        .unwrap();
        assert_eq!(g.g_x, 0.0);
        assert_eq!(g.g_z, 0.0);

        let g = dipole_coupling_flux(
            &sol,
            &p,
            &CouplingModel::Dipole { d: 1e-10, x: 2e-9, eta: PI / 2.0 },
            &tls,
            100.0,
        )
        .unwrap();
        assert!(g.g_x.abs() < 1e-12);

        let g = dipole_coupling_flux(
            &sol,
            &p,
            &CouplingModel::Dipole { d: 1e-10, x: 2e-9, eta: 0.0 },
            &tls,
            100.0,
        )
        .unwrap();
        assert!(g.g_x > 0.0);
        assert_eq!(g.g_z, 0.0);
    }
}

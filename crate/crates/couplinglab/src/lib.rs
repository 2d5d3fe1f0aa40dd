//! couplinglab: coupling analysis between superconducting qubits and
//! microscopic two-level defects.
//!
//! The crate quantizes two circuits — a flux-biased phase qubit on a
//! one-dimensional phase grid and a three-junction flux qubit on a
//! two-dimensional charge lattice — and evaluates, for three candidate
//! defect coupling models (critical-current fluctuator, charge dipole,
//! flux fluctuator), the dimensionless transverse and longitudinal
//! coupling factors
//!
//! ```text
//! o_x = |<1| O |0>|,    o_z = |<1| O |1> - <0| O |0>| / 2
//! ```
//!
//! between the designated qubit states, together with the physical
//! coupling strengths g_x, g_z and the two-photon spectroscopy
//! signature (asymmetry A = 4 g_z on resonance) that discriminates the
//! models experimentally.
//!
//! # Layout
//!
//! * [`circuits`] — Hamiltonian and operator matrices for both circuits
//! * [`spectral`] — eigensolver, gauge fixing, qubit-state designation
//! * [`coupling`] — coupling factors, model prefactors, g_x / g_z
//! * [`spectroscopy`] — 4-level composite spectra and anticrossing scans
//! * [`sweep`] — bias sweeps, convergence studies, CSV tables
//! * [`config`] / [`plot`] — JSON run configuration and SVG output
//!
//! The `examples/` directory holds one runnable example per capability;
//! the `couplinglab` binary exposes the same pipelines as subcommands.

pub mod basis;
pub mod circuits;
pub mod config;
pub mod constants;
pub mod coupling;
pub mod error;
pub mod matrix;
pub mod plot;
pub mod spectral;
pub mod spectroscopy;
pub mod sweep;
pub mod table;

pub use basis::{BasisSpec, DiffScheme};
pub use circuits::{
    build_flux_qubit_hamiltonian, build_operator, build_phase_qubit_hamiltonian, derive_energies,
    flux_charging_hamiltonian, phase_potential, FluxQubitParams, OperatorKind, PhaseEnergies,
    PhaseQubitParams,
};
pub use constants::PhysicalConstants;
pub use coupling::{
    coupling_factors, dipole_coupling_flux, model_prefactor, pauli_coupling, CircuitRef, CouplingFactors,
    CouplingModel, PauliCoupling, TLSParams,
};
pub use error::{Error, Result};
pub use matrix::{HamiltonianMatrix, MatrixData};
pub use spectral::{
    charge_parity_expectation, eigensolve, even_parity_indices, select_flux_qubit,
    select_metastable_qubit, shallow_well_region, EigenSolution, WellRegion,
};
pub use spectroscopy::{
    anticrossing_scan, composite_spectrum, two_photon_asymmetry, AnticrossingScan, CompositeSpectrum,
    TransitionSet,
};
pub use sweep::{
    convergence_study, coupling_along_sweep, flux_point, phase_point, sweep_flux_qubit,
    sweep_phase_qubit, BasisOverride, CircuitSpec, ConvergenceReport, FluxPoint, PhasePoint,
    SweepConfig, SweepRange,
};
pub use table::SweepTable;

/// Size the global rayon pool from `COUPLINGLAB_THREADS` if the variable
/// is set. Must run before any parallel work; later calls are ignored by
/// rayon. Returns the applied cap.
pub fn init_threads_from_env() -> Option<usize> {
    let n: usize = std::env::var("COUPLINGLAB_THREADS").ok()?.parse().ok()?;
    if n == 0 {
        return None;
    }
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    if n == 1 {
        faer::set_global_parallelism(faer::Par::Seq);
    }
    Some(n)
}

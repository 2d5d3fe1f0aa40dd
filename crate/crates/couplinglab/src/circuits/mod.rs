//! Circuit Hamiltonians and coupling operators.

mod flux;
mod operators;
mod phase;

pub use flux::{build_flux_qubit_hamiltonian, flux_charging_hamiltonian, FluxQubitParams};
pub use operators::{build_operator, OperatorKind};
pub use phase::{
    build_phase_qubit_hamiltonian, derive_energies, phase_potential, potential_minima, PhaseEnergies,
    PhaseQubitParams,
};

//! Bias sweeps, convergence studies, and the single-point pipelines they
//! are built from.
//!
//! Every sweep point is an independent pure computation; points are
//! evaluated in parallel with rayon and collected in bias order, so the
//! result does not depend on scheduling. Thread count is controlled by
//! the ambient rayon pool (the CLI sizes it from `COUPLINGLAB_THREADS`).

use crate::basis::{BasisSpec, DiffScheme};
use crate::circuits::{
    build_flux_qubit_hamiltonian, build_operator, build_phase_qubit_hamiltonian, FluxQubitParams,
    OperatorKind, PhaseQubitParams,
};
use crate::coupling::{
    coupling_factors, dipole_coupling_flux, model_prefactor, pauli_coupling, CircuitRef, CouplingModel,
    PauliCoupling, TLSParams,
};
use crate::error::{Error, Result};
use crate::spectral::{eigensolve, even_parity_indices, select_flux_qubit, select_metastable_qubit};
use crate::table::{unix_timestamp, SweepTable};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Phase-qubit sweeps solve on a reduced grid: the spectral kinetic term
/// is converged to machine precision well below the standalone default
/// of 4096 points, and the smaller dense factorization keeps a 51-point
/// sweep in the seconds range. Convergence tests double this and check
/// that energies move by less than 1e-8 relative.
pub const DEFAULT_PHASE_SWEEP_POINTS: usize = 1024;

/// Eigenpairs kept per phase-qubit point. The metastable doublet sits
/// above the deep-well manifold (index 50-80 across the studied biases).
pub const PHASE_PIPELINE_STATES: usize = 96;

/// Eigenpairs kept per flux-qubit point; the three lowest even-parity
/// states always fall inside this window.
pub const FLUX_PIPELINE_STATES: usize = 12;

/// Which circuit a sweep runs over, with the absolute Josephson energy
/// for the flux qubit (needed only to convert couplings to GHz).
#[derive(Debug, Clone, Copy)]
pub enum CircuitSpec {
    Phase(PhaseQubitParams),
    Flux { params: FluxQubitParams, ej_ghz: f64 },
}

/// Inclusive bias range sampled at `n_points` equally spaced values.
#[derive(Debug, Clone, Copy)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, n_points: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) || start >= stop {
            return Err(Error::InvalidParameter(format!(
                "sweep range needs finite start < stop, got [{start}, {stop}]"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidParameter(format!("sweep needs at least 2 points, got {n_points}")));
        }
        Ok(Self { start, stop, n_points })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.n_points - 1) as f64;
        (0..self.n_points).map(|i| self.start + i as f64 * step).collect()
    }
}

/// Basis override for a sweep. Phase grids always recenter on the bias
/// point, so only resolution and scheme can be overridden.
#[derive(Debug, Clone, Copy)]
pub enum BasisOverride {
    PhaseGrid { n_points: usize, scheme: DiffScheme },
    ChargeLattice { n_p_cutoff: usize, n_m_cutoff: usize },
}

/// Full sweep description.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub circuit: CircuitSpec,
    pub bias_range: SweepRange,
    pub basis: Option<BasisOverride>,
    /// Models evaluated by coupling pipelines built on the sweep; the
    /// factor tables always contain every factor column.
    pub models: Vec<CouplingModel>,
}

impl SweepConfig {
    /// Warn-level validity windows: phase biases in [0.4, 0.7], flux
    /// frustration in [0.45, 0.55]. Returns a message rather than an
    /// error; outside biases are physically meaningful but untested.
    pub fn bias_window_warning(&self) -> Option<String> {
        let (lo, hi, name) = match self.circuit {
            CircuitSpec::Phase(_) => (0.4, 0.7, "phase bias"),
            CircuitSpec::Flux { .. } => (0.45, 0.55, "frustration"),
        };
        if self.bias_range.start < lo || self.bias_range.stop > hi {
            Some(format!(
                "{name} range [{}, {}] extends outside the validated window [{lo}, {hi}]",
                self.bias_range.start, self.bias_range.stop
            ))
        } else {
            None
        }
    }
}

fn phase_basis(bias: f64, ov: Option<BasisOverride>) -> Result<BasisSpec> {
    let (n, scheme) = match ov {
        Some(BasisOverride::PhaseGrid { n_points, scheme }) => (n_points, scheme),
        Some(BasisOverride::ChargeLattice { .. }) => {
            return Err(Error::Incompatible("charge-lattice override on a phase-qubit sweep".into()))
        }
        None => (DEFAULT_PHASE_SWEEP_POINTS, DiffScheme::Spectral),
    };
    let center = 2.0 * PI * bias;
    BasisSpec::phase_grid(center - 2.0 * PI, center + 2.0 * PI, n, scheme)
}

fn flux_basis(ov: Option<BasisOverride>) -> Result<BasisSpec> {
    match ov {
        Some(BasisOverride::ChargeLattice { n_p_cutoff, n_m_cutoff }) => {
            BasisSpec::charge_lattice(n_p_cutoff, n_m_cutoff)
        }
        Some(BasisOverride::PhaseGrid { .. }) => {
            Err(Error::Incompatible("phase-grid override on a flux-qubit sweep".into()))
        }
        None => Ok(BasisSpec::default_charge_lattice()),
    }
}

/// All factor data for one phase-qubit bias point.
#[derive(Debug, Clone, Copy)]
pub struct PhasePoint {
    pub bias: f64,
    /// Metastable-doublet splitting, GHz.
    pub omega_q: f64,
    /// Lowest three absolute energies, GHz.
    pub lowest: [f64; 3],
    pub o_x_i: f64,
    pub o_z_i: f64,
    pub o_x_phi: f64,
    pub o_z_phi: f64,
    pub o_x_q: f64,
    pub o_z_q: f64,
}

/// Build, solve and select the metastable qubit at one bias point, then
/// take the factors of all three phase-qubit coupling operators.
pub fn phase_point(p: &PhaseQubitParams, basis: &BasisSpec) -> Result<PhasePoint> {
    let h = build_phase_qubit_hamiltonian(p, basis)?;
    let sol = eigensolve(&h, PHASE_PIPELINE_STATES.min(h.dim()))?;
    let sel = select_metastable_qubit(&sol, p)?;
    let cos = build_operator(OperatorKind::CosPhase, basis, 0.0)?;
    let phi = build_operator(OperatorKind::Phase, basis, 0.0)?;
    let q = build_operator(OperatorKind::Charge, basis, 0.0)?;
    let fi = coupling_factors(&sel, &cos)?;
    let fp = coupling_factors(&sel, &phi)?;
    let fq = coupling_factors(&sel, &q)?;
    Ok(PhasePoint {
        bias: p.bias,
        omega_q: sel.omega_q,
        lowest: [sel.energies[0], sel.energies[1], sel.energies[2]],
        o_x_i: fi.o_x,
        o_z_i: fi.o_z,
        o_x_phi: fp.o_x,
        o_z_phi: fp.o_z,
        o_x_q: fq.o_x,
        o_z_q: fq.o_z,
    })
}

/// All factor data for one flux-qubit frustration point. Energies are in
/// units of E_J and refer to the even-parity (physical) sector.
#[derive(Debug, Clone, Copy)]
pub struct FluxPoint {
    pub frustration: f64,
    /// Lowest three even-sector energies, E_J units.
    pub sector_energies: [f64; 3],
    /// Lowest three energies of the full doubled lattice, E_J units.
    pub lowest_raw: [f64; 3],
    /// Qubit splitting inside the sector, E_J units.
    pub omega_q: f64,
    pub o_x_i: f64,
    pub o_z_i: f64,
    pub o_x_phi: f64,
    pub o_z_phi: f64,
    /// |<0| n_m |1>|, the dipole matrix element.
    pub n_m_01: f64,
}

/// Build, solve and designate the flux qubit at one frustration point,
/// then take the factors of both junction operators.
pub fn flux_point(p: &FluxQubitParams, basis: &BasisSpec) -> Result<FluxPoint> {
    let h = build_flux_qubit_hamiltonian(p, basis)?;
    let sol = eigensolve(&h, FLUX_PIPELINE_STATES.min(h.dim()))?;
    let sel = select_flux_qubit(&sol)?;
    let even = even_parity_indices(&sel)?;
    if even.len() < 3 {
        return Err(Error::Numeric(format!(
            "only {} even-parity states among {}: raise FLUX_PIPELINE_STATES",
            even.len(),
            sel.k()
        )));
    }
    let cos = build_operator(OperatorKind::CosJ3, basis, p.frustration)?;
    let sin = build_operator(OperatorKind::SinJ3, basis, p.frustration)?;
    let nm = build_operator(OperatorKind::ChargeM, basis, p.frustration)?;
    let fi = coupling_factors(&sel, &cos)?;
    let fp = coupling_factors(&sel, &sin)?;
    let (s0, s1) = sel.qubit_states();
    let nm01 = nm.bilinear(&s0, &s1).norm();
    Ok(FluxPoint {
        frustration: p.frustration,
        sector_energies: [sel.energies[even[0]], sel.energies[even[1]], sel.energies[even[2]]],
        lowest_raw: [sel.energies[0], sel.energies[1], sel.energies[2]],
        omega_q: sel.omega_q,
        o_x_i: fi.o_x,
        o_z_i: fi.o_z,
        o_x_phi: fp.o_x,
        o_z_phi: fp.o_z,
        n_m_01: nm01,
    })
}

fn base_metadata(table: &mut SweepTable, kind: &str, cfg: &SweepConfig) {
    table.push_metadata("tool", format!("couplinglab v{}", env!("CARGO_PKG_VERSION")));
    table.push_metadata("kind", kind);
    table.push_metadata("generated_unix", unix_timestamp());
    match cfg.circuit {
        CircuitSpec::Phase(p) => {
            table.push_metadata("circuit", "phase");
            table.push_metadata("capacitance_F", format!("{:e}", p.capacitance));
            table.push_metadata("inductance_H", format!("{:e}", p.inductance));
            table.push_metadata("critical_current_A", format!("{:e}", p.critical_current));
        }
        CircuitSpec::Flux { params, ej_ghz } => {
            table.push_metadata("circuit", "flux");
            table.push_metadata("ej_over_ec", format!("{}", params.ej_over_ec));
            table.push_metadata("alpha", format!("{}", params.alpha));
            table.push_metadata("ej_GHz", format!("{ej_ghz}"));
        }
    }
    table.push_metadata(
        "bias_range",
        format!("{}..{} x{}", cfg.bias_range.start, cfg.bias_range.stop, cfg.bias_range.n_points),
    );
}

/// Factor sweep of the phase qubit. Bias points where metastable
/// selection fails (expected near the top of the bias window) are
/// emitted with `selection_ok = 0` and NaN factors.
pub fn sweep_phase_qubit(cfg: &SweepConfig) -> Result<SweepTable> {
    let params = match cfg.circuit {
        CircuitSpec::Phase(p) => p,
        CircuitSpec::Flux { .. } => {
            return Err(Error::InvalidArgument("sweep_phase_qubit needs a phase circuit".into()))
        }
    };
    params.validate()?;
    let biases = cfg.bias_range.points();
    let rows: Vec<Vec<f64>> = biases
        .par_iter()
        .map(|&bias| -> Result<Vec<f64>> {
            let p = params.with_bias(bias);
            let basis = phase_basis(bias, cfg.basis)?;
            match phase_point(&p, &basis) {
                Ok(pt) => Ok(vec![
                    bias, pt.omega_q, pt.o_x_i, pt.o_z_i, pt.o_x_phi, pt.o_z_phi, pt.o_x_q, 1.0,
                ]),
                Err(Error::NoMetastableQubit(_)) | Err(Error::AmbiguousWells(_)) => Ok(vec![
                    bias,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    0.0,
                ]),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    if rows.iter().all(|r| r[7] == 0.0) {
        return Err(Error::EmptyResult(
            "metastable selection failed at every bias point of the sweep".into(),
        ));
    }
    let mut table = SweepTable::new(
        ["phi_e_phi0", "omega_q_GHz", "o_x_i", "o_z_i", "o_x_phi", "o_z_phi", "o_x_q", "selection_ok"]
            .map(String::from)
            .to_vec(),
    );
    base_metadata(&mut table, "sweep-phase", cfg);
    table.push_metadata("factor_units", "dimensionless");
    for row in rows {
        table.push_row(row);
    }
    Ok(table)
}

/// Factor sweep of the flux qubit. Energies are reported in units of
/// E_J for the even-parity sector.
pub fn sweep_flux_qubit(cfg: &SweepConfig) -> Result<SweepTable> {
    let params = match cfg.circuit {
        CircuitSpec::Flux { params, .. } => params,
        CircuitSpec::Phase(_) => {
            return Err(Error::InvalidArgument("sweep_flux_qubit needs a flux circuit".into()))
        }
    };
    params.validate()?;
    let basis = flux_basis(cfg.basis)?;
    let points = cfg.bias_range.points();
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&f| -> Result<Vec<f64>> {
            let p = params.with_frustration(f);
            let pt = flux_point(&p, &basis)?;
            Ok(vec![
                f,
                pt.sector_energies[0],
                pt.sector_energies[1],
                pt.sector_energies[2],
                pt.omega_q,
                pt.o_x_i,
                pt.o_z_i,
                pt.o_x_phi,
                pt.o_z_phi,
                pt.n_m_01,
            ])
        })
        .collect::<Result<_>>()?;
    let mut table = SweepTable::new(
        ["f_phi0", "e0_EJ", "e1_EJ", "e2_EJ", "omega_q_EJ", "o_x_i", "o_z_i", "o_x_phi", "o_z_phi", "n_m_01_abs"]
            .map(String::from)
            .to_vec(),
    );
    base_metadata(&mut table, "sweep-flux", cfg);
    table.push_metadata("energy_units", "E_J");
    table.push_metadata("sector", "even total charge parity");
    for row in rows {
        table.push_row(row);
    }
    Ok(table)
}

/// Coupling strengths along a sweep, for anticrossing scans: per bias
/// point the qubit frequency in GHz and the (g_x, g_z) pair of the
/// model.
pub fn coupling_along_sweep(
    cfg: &SweepConfig,
    model: &CouplingModel,
    tls: &TLSParams,
) -> Result<Vec<(f64, f64, PauliCoupling)>> {
    model.validate()?;
    let points = cfg.bias_range.points();
    match cfg.circuit {
        CircuitSpec::Phase(params) => {
            params.validate()?;
            let kind = model.operator_kind(false);
            points
                .par_iter()
                .map(|&bias| {
                    let p = params.with_bias(bias);
                    let basis = phase_basis(bias, cfg.basis)?;
                    let pt = phase_point(&p, &basis)?;
                    let factors = crate::coupling::CouplingFactors {
                        o_x: match kind {
                            OperatorKind::CosPhase => pt.o_x_i,
                            OperatorKind::Phase => pt.o_x_phi,
                            _ => pt.o_x_q,
                        },
                        o_z: match kind {
                            OperatorKind::CosPhase => pt.o_z_i,
                            OperatorKind::Phase => pt.o_z_phi,
                            _ => pt.o_z_q,
                        },
                        operator_kind: Some(kind),
                    };
                    let pre = model_prefactor(model, CircuitRef::Phase(&p))?;
                    let g = pauli_coupling(model, &factors, tls, pre)?;
                    Ok((bias, pt.omega_q, g))
                })
                .collect()
        }
        CircuitSpec::Flux { params, ej_ghz } => {
            params.validate()?;
            let basis = flux_basis(cfg.basis)?;
            points
                .par_iter()
                .map(|&f| {
                    let p = params.with_frustration(f);
                    if let CouplingModel::Dipole { .. } = model {
                        let h = build_flux_qubit_hamiltonian(&p, &basis)?;
                        let sol = select_flux_qubit(&eigensolve(&h, FLUX_PIPELINE_STATES.min(h.dim()))?)?;
                        let g = dipole_coupling_flux(&sol, &p, model, tls, ej_ghz)?;
                        Ok((f, sol.omega_q * ej_ghz, g))
                    } else {
                        let pt = flux_point(&p, &basis)?;
                        let kind = model.operator_kind(true);
                        let factors = crate::coupling::CouplingFactors {
                            o_x: if kind == OperatorKind::CosJ3 { pt.o_x_i } else { pt.o_x_phi },
                            o_z: if kind == OperatorKind::CosJ3 { pt.o_z_i } else { pt.o_z_phi },
                            operator_kind: Some(kind),
                        };
                        let pre = model_prefactor(model, CircuitRef::Flux { params: &p, ej_ghz })?;
                        let g = pauli_coupling(model, &factors, tls, pre)?;
                        Ok((f, pt.omega_q * ej_ghz, g))
                    }
                })
                .collect()
        }
    }
}

/// One rung of a convergence ladder.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    /// n_points (phase) or charge cutoff per axis (flux).
    pub basis_size: usize,
    pub dim: usize,
    /// Lowest three energies of the full matrix.
    pub energies: [f64; 3],
    /// Max relative change of the three energies vs the previous rung
    /// (NaN on the first rung).
    pub energy_drift_rel: f64,
    /// Max absolute change of the coupling factors vs the previous rung.
    pub factor_drift_abs: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Final-rung drift below 1e-8 (energies, relative) and 1e-6
    /// (factors, absolute).
    pub pass: bool,
    /// False if the energy drift grew along the ladder.
    pub monotone: bool,
}

const CONVERGE_ENERGY_TOL: f64 = 1e-8;
const CONVERGE_FACTOR_TOL: f64 = 1e-6;

fn rel_drift(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn abs_drift(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Successive-refinement study over a basis ladder at the circuit's own
/// bias point. Needs at least three rungs.
pub fn convergence_study(circuit: &CircuitSpec, ladder: &[usize]) -> Result<ConvergenceReport> {
    if ladder.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "convergence ladder needs at least 3 rungs, got {}",
            ladder.len()
        )));
    }
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("convergence ladder must be strictly increasing".into()));
    }
    struct Rung {
        basis_size: usize,
        dim: usize,
        energies: [f64; 3],
        factors: Vec<f64>,
    }
    let rungs: Vec<Rung> = ladder
        .par_iter()
        .map(|&size| -> Result<Rung> {
            match circuit {
                CircuitSpec::Phase(p) => {
                    let basis = phase_basis(
                        p.bias,
                        Some(BasisOverride::PhaseGrid { n_points: size, scheme: DiffScheme::Spectral }),
                    )?;
                    let pt = phase_point(p, &basis)?;
                    Ok(Rung {
                        basis_size: size,
                        dim: size,
                        energies: pt.lowest,
                        factors: vec![pt.o_x_i, pt.o_z_i, pt.o_x_phi, pt.o_z_phi, pt.o_x_q],
                    })
                }
                CircuitSpec::Flux { params, .. } => {
                    let basis = BasisSpec::charge_lattice(size, size)?;
                    let pt = flux_point(params, &basis)?;
                    Ok(Rung {
                        basis_size: size,
                        dim: basis.dim(),
                        energies: pt.lowest_raw,
                        factors: vec![pt.o_x_i, pt.o_z_i, pt.o_x_phi, pt.o_z_phi, pt.n_m_01],
                    })
                }
            }
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(rungs.len());
    for (i, r) in rungs.iter().enumerate() {
        let (ed, fd) = if i == 0 {
            (f64::NAN, f64::NAN)
        } else {
            (
                rel_drift(&r.energies, &rungs[i - 1].energies),
                abs_drift(&r.factors, &rungs[i - 1].factors),
            )
        };
        rows.push(ConvergenceRow {
            basis_size: r.basis_size,
            dim: r.dim,
            energies: r.energies,
            energy_drift_rel: ed,
            factor_drift_abs: fd,
        });
    }
    let last = rows.last().unwrap();
    let pass = last.energy_drift_rel < CONVERGE_ENERGY_TOL && last.factor_drift_abs < CONVERGE_FACTOR_TOL;
    let mut monotone = true;
    for w in rows.windows(2) {
        if !w[0].energy_drift_rel.is_nan()
            && w[1].energy_drift_rel > w[0].energy_drift_rel
            && w[1].energy_drift_rel > 1e-12
        {
            monotone = false;
        }
    }
    Ok(ConvergenceReport { rows, pass, monotone })
}

/// Convergence report as a table.
pub fn convergence_table(circuit: &CircuitSpec, report: &ConvergenceReport) -> SweepTable {
    let mut table = SweepTable::new(
        ["basis_size", "dim", "e0", "e1", "e2", "energy_drift_rel", "factor_drift_abs"]
            .map(String::from)
            .to_vec(),
    );
    table.push_metadata("tool", format!("couplinglab v{}", env!("CARGO_PKG_VERSION")));
    table.push_metadata("kind", "converge");
    table.push_metadata("generated_unix", unix_timestamp());
    table.push_metadata(
        "circuit",
        match circuit {
            CircuitSpec::Phase(_) => "phase",
            CircuitSpec::Flux { .. } => "flux",
        },
    );
    table.push_metadata("pass", if report.pass { "true" } else { "false" });
    table.push_metadata("monotone", if report.monotone { "true" } else { "false" });
    for r in &report.rows {
        table.push_row(vec![
            r.basis_size as f64,
            r.dim as f64,
            r.energies[0],
            r.energies[1],
            r.energies[2],
            r.energy_drift_rel,
            r.factor_drift_abs,
        ]);
    }
    table
}

/// Anticrossing scan as a table.
pub fn anticrossing_table(
    scan: &crate::spectroscopy::AnticrossingScan,
    omega_t: f64,
) -> SweepTable {
    let mut table = SweepTable::new(
        ["bias", "omega_q_GHz", "omega_12_GHz", "omega_13_GHz", "omega_14_GHz", "asymmetry_GHz", "half_asymmetry_GHz"]
            .map(String::from)
            .to_vec(),
    );
    table.push_metadata("tool", format!("couplinglab v{}", env!("CARGO_PKG_VERSION")));
    table.push_metadata("kind", "anticross");
    table.push_metadata("generated_unix", unix_timestamp());
    table.push_metadata("omega_t_GHz", format!("{omega_t}"));
    table.push_metadata("crossed_resonance", if scan.crossed_resonance { "true" } else { "false" });
    table.push_metadata("min_gap_GHz", format!("{:e}", scan.min_gap));
    table.push_metadata("min_gap_bias", format!("{}", scan.min_gap_bias));
    for r in &scan.rows {
        table.push_row(vec![
            r.bias,
            r.omega_q,
            r.omega_12,
            r.omega_13,
            r.omega_14,
            r.asymmetry,
            r.asymmetry / 2.0,
        ]);
    }
    table
}

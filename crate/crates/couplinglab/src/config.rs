//! JSON run configuration for the command-line tool.
//!
//! Every physical quantity carries its unit in the key name
//! (`capacitance_fF`, `bias_phi0`, `epsilon_GHz`, ...), so a config file
//! documents itself. Unknown keys are rejected to catch typos.

use crate::basis::DiffScheme;
use crate::coupling::{CouplingModel, TLSParams};
use crate::error::{Error, Result};
use crate::sweep::{BasisOverride, CircuitSpec, SweepConfig, SweepRange};
use crate::{circuits::FluxQubitParams, circuits::PhaseQubitParams};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Assumed absolute Josephson energy of the flux qubit when the config
/// gives only the E_J/E_c ratio. Affects GHz conversions only, never the
/// dimensionless factors.
pub const DEFAULT_EJ_GHZ: f64 = 100.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CircuitConfig {
    Phase {
        #[serde(rename = "capacitance_fF")]
        capacitance_ff: f64,
        #[serde(rename = "inductance_pH")]
        inductance_ph: f64,
        #[serde(rename = "critical_current_nA")]
        critical_current_na: f64,
        bias_phi0: f64,
    },
    Flux {
        ej_over_ec: f64,
        alpha: f64,
        frustration_phi0: f64,
        /// Absolute E_J/h in GHz; defaults to [`DEFAULT_EJ_GHZ`].
        #[serde(rename = "ej_GHz", default)]
        ej_ghz: Option<f64>,
    },
}

impl CircuitConfig {
    pub fn to_spec(&self) -> Result<CircuitSpec> {
        match *self {
            CircuitConfig::Phase { capacitance_ff, inductance_ph, critical_current_na, bias_phi0 } => {
                Ok(CircuitSpec::Phase(PhaseQubitParams::new(
                    capacitance_ff * 1e-15,
                    inductance_ph * 1e-12,
                    critical_current_na * 1e-9,
                    bias_phi0,
                )?))
            }
            CircuitConfig::Flux { ej_over_ec, alpha, frustration_phi0, ej_ghz } => Ok(CircuitSpec::Flux {
                params: FluxQubitParams::new(ej_over_ec, alpha, frustration_phi0)?,
                ej_ghz: ej_ghz.unwrap_or(DEFAULT_EJ_GHZ),
            }),
        }
    }

    pub fn bias(&self) -> f64 {
        match *self {
            CircuitConfig::Phase { bias_phi0, .. } => bias_phi0,
            CircuitConfig::Flux { frustration_phi0, .. } => frustration_phi0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    /// Phase-grid points (phase qubit only).
    #[serde(default)]
    pub n_points: Option<usize>,
    /// Kinetic differentiation scheme (phase qubit only).
    #[serde(default)]
    pub scheme: Option<DiffScheme>,
    /// Charge cutoffs (flux qubit only).
    #[serde(default)]
    pub n_p_cutoff: Option<usize>,
    #[serde(default)]
    pub n_m_cutoff: Option<usize>,
}

impl BasisConfig {
    pub fn to_override(&self, circuit: &CircuitSpec) -> Result<Option<BasisOverride>> {
        match circuit {
            CircuitSpec::Phase(_) => {
                if self.n_p_cutoff.is_some() || self.n_m_cutoff.is_some() {
                    return Err(Error::Config("charge cutoffs given for a phase circuit".into()));
                }
                match (self.n_points, self.scheme) {
                    (None, None) => Ok(None),
                    (n, s) => Ok(Some(BasisOverride::PhaseGrid {
                        n_points: n.unwrap_or(crate::sweep::DEFAULT_PHASE_SWEEP_POINTS),
                        scheme: s.unwrap_or_default(),
                    })),
                }
            }
            CircuitSpec::Flux { .. } => {
                if self.n_points.is_some() || self.scheme.is_some() {
                    return Err(Error::Config("phase-grid settings given for a flux circuit".into()));
                }
                match (self.n_p_cutoff, self.n_m_cutoff) {
                    (None, None) => Ok(None),
                    (p, m) => {
                        let p = p.unwrap_or(crate::basis::DEFAULT_CHARGE_CUTOFF);
                        let m = m.unwrap_or(crate::basis::DEFAULT_CHARGE_CUTOFF);
                        Ok(Some(BasisOverride::ChargeLattice { n_p_cutoff: p, n_m_cutoff: m }))
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TlsSection {
    #[serde(rename = "epsilon_GHz")]
    pub epsilon_ghz: f64,
    #[serde(rename = "delta_GHz")]
    pub delta_ghz: f64,
}

impl TlsSection {
    pub fn to_params(&self) -> Result<TLSParams> {
        TLSParams::new(self.epsilon_ghz, self.delta_ghz)
    }
}

/// Model parameter block. `delta_phi_e_uphi0` is given in micro-phi_0
/// for both circuits and converted to the convention each prefactor
/// formula uses (webers for the phase qubit, fraction of phi_0 for the
/// flux qubit).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelsSection {
    #[serde(rename = "delta_i0_nA", default)]
    pub delta_i0_na: Option<f64>,
    #[serde(rename = "dipole_d_nm", default)]
    pub dipole_d_nm: Option<f64>,
    #[serde(rename = "junction_thickness_nm", default)]
    pub junction_thickness_nm: Option<f64>,
    #[serde(rename = "dipole_eta_rad", default)]
    pub dipole_eta_rad: Option<f64>,
    #[serde(rename = "delta_phi_e_uphi0", default)]
    pub delta_phi_e_uphi0: Option<f64>,
}

impl ModelsSection {
    /// Instantiate the requested models for the given circuit type.
    pub fn build(&self, names: &[String], flux: bool) -> Result<Vec<CouplingModel>> {
        names.iter().map(|n| self.one(n, flux)).collect()
    }

    pub fn one(&self, name: &str, flux: bool) -> Result<CouplingModel> {
        match name {
            "critical_current" => Ok(CouplingModel::CriticalCurrent {
                delta_i0: self.delta_i0_na.unwrap_or(1.0) * 1e-9,
            }),
            "dipole" => Ok(CouplingModel::Dipole {
                d: self.dipole_d_nm.unwrap_or(0.1) * 1e-9,
                x: self.junction_thickness_nm.unwrap_or(2.0) * 1e-9,
                eta: self.dipole_eta_rad.unwrap_or(0.0),
            }),
            "flux_fluctuator" => {
                let uphi0 = self.delta_phi_e_uphi0.unwrap_or(1.0);
                let delta_phi_e = if flux {
                    uphi0 * 1e-6
                } else {
                    uphi0 * 1e-6 * crate::constants::FLUX_QUANTUM
                };
                Ok(CouplingModel::FluxFluctuator { delta_phi_e })
            }
            other => Err(Error::Config(format!(
                "unknown model '{other}' (expected critical_current, dipole, flux_fluctuator)"
            ))),
        }
    }
}

impl Default for ModelsSection {
    fn default() -> Self {
        Self {
            delta_i0_na: None,
            dipole_d_nm: None,
            junction_thickness_nm: None,
            dipole_eta_rad: None,
            delta_phi_e_uphi0: None,
        }
    }
}

fn default_model_names() -> Vec<String> {
    vec!["critical_current".into(), "dipole".into(), "flux_fluctuator".into()]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    #[serde(rename = "omega_q_GHz")]
    pub omega_q_ghz: f64,
    #[serde(rename = "omega_t_GHz")]
    pub omega_t_ghz: f64,
    #[serde(rename = "g_x_GHz")]
    pub g_x_ghz: f64,
    #[serde(rename = "g_z_GHz")]
    pub g_z_ghz: f64,
}

/// Top-level run configuration. Which sections are required depends on
/// the subcommand; unused sections are allowed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub circuit: Option<CircuitConfig>,
    #[serde(default)]
    pub basis: Option<BasisConfig>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    /// Names of the models coupling pipelines should evaluate.
    #[serde(default = "default_model_names")]
    pub models: Vec<String>,
    #[serde(default)]
    pub model_params: Option<ModelsSection>,
    #[serde(default)]
    pub tls: Option<TlsSection>,
    #[serde(default)]
    pub spectrum: Option<SpectrumSection>,
    /// Convergence ladder (n_points for phase, cutoffs for flux).
    #[serde(default)]
    pub converge_ladder: Option<Vec<usize>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn circuit_spec(&self) -> Result<CircuitSpec> {
        self.circuit
            .as_ref()
            .ok_or_else(|| Error::Config("config needs a 'circuit' section".into()))?
            .to_spec()
    }

    /// Sweep config from the circuit, sweep and basis sections, with
    /// per-circuit default windows when the sweep section is omitted
    /// (phase: 0.55..0.60, flux: 0.50..0.51, 51 points each).
    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let circuit = self.circuit_spec()?;
        let range = match &self.sweep {
            Some(s) => SweepRange::new(s.start, s.stop, s.n_points)?,
            None => match circuit {
                CircuitSpec::Phase(_) => SweepRange::new(0.55, 0.60, 51)?,
                CircuitSpec::Flux { .. } => SweepRange::new(0.50, 0.51, 51)?,
            },
        };
        let basis = match &self.basis {
            Some(b) => b.to_override(&circuit)?,
            None => None,
        };
        let flux = matches!(circuit, CircuitSpec::Flux { .. });
        let models = self
            .model_params
            .clone()
            .unwrap_or_default()
            .build(&self.models, flux)?;
        Ok(SweepConfig { circuit, bias_range: range, basis, models })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_phase_config() {
        let text = r#"{
            "circuit": {"kind": "phase", "capacitance_fF": 850.0, "inductance_pH": 720.0,
                        "critical_current_nA": 984.0, "bias_phi0": 0.58},
            "sweep": {"start": 0.55, "stop": 0.60, "n_points": 11},
            "tls": {"epsilon_GHz": 0.5, "delta_GHz": 5.0}
        }"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        let sweep = cfg.sweep_config().unwrap();
        assert!(matches!(sweep.circuit, CircuitSpec::Phase(_)));
        assert_eq!(sweep.bias_range.n_points, 11);
        assert_eq!(sweep.models.len(), 3);
    }

    #[test]
    fn parses_a_flux_config_with_defaults() {
        let text = r#"{
            "circuit": {"kind": "flux", "ej_over_ec": 40.0, "alpha": 0.68, "frustration_phi0": 0.505}
        }"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        let sweep = cfg.sweep_config().unwrap();
        match sweep.circuit {
            CircuitSpec::Flux { ej_ghz, .. } => assert_eq!(ej_ghz, DEFAULT_EJ_GHZ),
            _ => panic!("expected flux circuit"),
        }
        assert_eq!(sweep.bias_range.n_points, 51);
        assert!((sweep.bias_range.start - 0.50).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"circuit": {"kind": "flux", "ej_over_ec": 40.0, "alpha": 0.68,
                        "frustration_phi0": 0.5, "typo_field": 1.0}}"#;
        assert!(serde_json::from_str::<RunConfig>(text).is_err());
    }

    #[test]
    fn flux_fluctuator_units_differ_per_circuit() {
        let section = ModelsSection { delta_phi_e_uphi0: Some(2.0), ..Default::default() };
        match section.one("flux_fluctuator", true).unwrap() {
            CouplingModel::FluxFluctuator { delta_phi_e } => {
                assert!((delta_phi_e - 2e-6).abs() < 1e-18)
            }
            _ => unreachable!(),
        }
        match section.one("flux_fluctuator", false).unwrap() {
            CouplingModel::FluxFluctuator { delta_phi_e } => {
                assert!((delta_phi_e - 2e-6 * crate::constants::FLUX_QUANTUM).abs() < 1e-30)
            }
            _ => unreachable!(),
        }
    }
}

//! Physical constants (CODATA 2018, exact SI values).

/// Elementary charge `e` in coulombs. Exact since the 2019 SI redefinition.
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Planck constant `h` in joule-seconds. Exact since the 2019 SI redefinition.
pub const H_PLANCK: f64 = 6.626_070_15e-34;

/// Superconducting flux quantum `phi_0 = h / 2e` in webers.
pub const FLUX_QUANTUM: f64 = H_PLANCK / (2.0 * E_CHARGE);

/// Bundle of the constants used by the circuit models.
///
/// Kept as a struct so that tests can assert internal consistency
/// (`flux_quantum == h / 2e`) instead of trusting three independent
/// literals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge (C).
    pub e_charge: f64,
    /// Planck constant (J s).
    pub h_planck: f64,
    /// Flux quantum h/2e (Wb).
    pub flux_quantum: f64,
}

impl PhysicalConstants {
    /// CODATA-2018 values.
    pub const fn codata2018() -> Self {
        Self {
            e_charge: E_CHARGE,
            h_planck: H_PLANCK,
            flux_quantum: FLUX_QUANTUM,
        }
    }

    /// Relative deviation of `flux_quantum` from `h / 2e`.
    pub fn flux_quantum_defect(&self) -> f64 {
        let derived = self.h_planck / (2.0 * self.e_charge);
        ((self.flux_quantum - derived) / derived).abs()
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_quantum_is_h_over_2e() {
        let c = PhysicalConstants::codata2018();
        assert!(c.flux_quantum_defect() < 1e-12);
        // published CODATA value, 10 significant digits
        assert!((c.flux_quantum - 2.067_833_848e-15).abs() / 2.067_833_848e-15 < 1e-9);
    }
}

//! Flux-biased phase qubit on a one-dimensional phase grid.
//!
//! The circuit is a Josephson junction (capacitance C, critical current
//! I_0) shunted by a loop inductance L and biased by an external flux
//! `phi_e` in units of the flux quantum. In the phase representation
//!
//! ```text
//! H = 4 E_c n^2 + (E_L / 2) (phi - 2 pi phi_e)^2 - E_J cos(phi),
//! n = -i d/dphi,
//! ```
//!
//! with `E_c = e^2/2C`, `E_J = I_0 phi_0 / 2 pi`, `E_L = (phi_0/2 pi)^2 / L`.
//! All matrices produced here are in GHz (energy divided by h). For a
//! screening parameter `beta = E_J/E_L > 1` the potential develops several
//! wells; the qubit lives in the two lowest states of the shallow well.

use crate::basis::{BasisSpec, DiffScheme};
use crate::constants::{E_CHARGE, FLUX_QUANTUM, H_PLANCK};
use crate::error::{Error, Result};
use crate::matrix::{FourierApply, HamiltonianMatrix, MatrixData};
use faer::Mat;
use std::f64::consts::PI;

/// Circuit parameters in SI units, with the bias in units of phi_0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseQubitParams {
    /// Junction capacitance (F).
    pub capacitance: f64,
    /// Loop inductance (H).
    pub inductance: f64,
    /// Junction critical current (A).
    pub critical_current: f64,
    /// External flux bias in units of phi_0.
    pub bias: f64,
}

/// Characteristic energies divided by h, in GHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEnergies {
    pub e_c: f64,
    pub e_j: f64,
    pub e_l: f64,
}

impl PhaseEnergies {
    /// Screening parameter beta = 2 pi L I_0 / phi_0 = E_J / E_L.
    pub fn beta(&self) -> f64 {
        self.e_j / self.e_l
    }

    /// Harmonic level spacing sqrt(8 E_c E_L) of the bare (E_J = 0)
    /// circuit, GHz.
    pub fn bare_plasma_frequency(&self) -> f64 {
        (8.0 * self.e_c * self.e_l).sqrt()
    }
}

impl PhaseQubitParams {
    /// Validating constructor: positive C, L, I_0 and beta > 1 so that a
    /// metastable well exists somewhere in the bias range.
    pub fn new(capacitance: f64, inductance: f64, critical_current: f64, bias: f64) -> Result<Self> {
        let p = Self { capacitance, inductance, critical_current, bias };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("capacitance", self.capacitance),
            ("inductance", self.inductance),
            ("critical_current", self.critical_current),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.bias.is_finite() {
            return Err(Error::InvalidParameter("bias must be finite".into()));
        }
        let beta = 2.0 * PI * self.inductance * self.critical_current / FLUX_QUANTUM;
        if beta <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "screening parameter beta = {beta:.4} <= 1: no metastable well for any bias"
            )));
        }
        Ok(())
    }

    /// Same circuit at a different flux bias.
    pub fn with_bias(mut self, bias: f64) -> Self {
        self.bias = bias;
        self
    }

    /// Example parameters used throughout the tests and examples
    /// (C = 850 fF, L = 720 pH, I_0 = 984 nA, beta about 2.15).
    pub fn reference(bias: f64) -> Self {
        Self {
            capacitance: 850e-15,
            inductance: 720e-12,
            critical_current: 984e-9,
            bias,
        }
    }
}

/// E_c, E_J, E_L for the circuit, in GHz.
pub fn derive_energies(p: &PhaseQubitParams) -> Result<PhaseEnergies> {
    for (name, v) in [
        ("capacitance", p.capacitance),
        ("inductance", p.inductance),
        ("critical_current", p.critical_current),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    let to_ghz = 1.0 / (H_PLANCK * 1e9);
    Ok(PhaseEnergies {
        e_c: E_CHARGE * E_CHARGE / (2.0 * p.capacitance) * to_ghz,
        e_j: p.critical_current * FLUX_QUANTUM / (2.0 * PI) * to_ghz,
        e_l: (FLUX_QUANTUM / (2.0 * PI)).powi(2) / p.inductance * to_ghz,
    })
}

/// Potential U(phi) in GHz at phase `phi` (radians).
pub fn phase_potential(e: &PhaseEnergies, bias: f64, phi: f64) -> f64 {
    let center = 2.0 * PI * bias;
    0.5 * e.e_l * (phi - center).powi(2) - e.e_j * phi.cos()
}

/// Local minima of U(phi) over `[lo, hi]`, returned as (phi, U) pairs in
/// ascending phi. Found by a fine scan refined with parabolic fits.
pub fn potential_minima(e: &PhaseEnergies, bias: f64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let n = 8192;
    let h = (hi - lo) / n as f64;
    let u = |phi: f64| phase_potential(e, bias, phi);
    let mut out = Vec::new();
    let mut prev = u(lo);
    let mut cur = u(lo + h);
    for i in 1..n {
        let next = u(lo + (i + 1) as f64 * h);
        if cur < prev && cur < next {
            // parabolic refinement through the three samples
            let denom = prev - 2.0 * cur + next;
            let delta = if denom.abs() > 0.0 { 0.5 * (prev - next) / denom } else { 0.0 };
            let phi = lo + (i as f64 + delta) * h;
            out.push((phi, u(phi)));
        }
        prev = cur;
        cur = next;
    }
    out
}

/// Periodic spectral second-derivative matrix: `n` points, period `len`.
/// Standard trigonometric-interpolation form for even or odd `n`; exact
/// for band-limited functions, exponentially accurate for smooth ones.
fn spectral_d2(n: usize, len: f64) -> Mat<f64> {
    let hp = 2.0 * PI / n as f64;
    let scale = (2.0 * PI / len).powi(2);
    if n % 2 == 0 {
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                scale * (-PI * PI / (3.0 * hp * hp) - 1.0 / 6.0)
            } else {
                let k = i as i64 - j as i64;
                let s = (k as f64 * hp / 2.0).sin();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                scale * (-sign / (2.0 * s * s))
            }
        })
    } else {
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                scale * (-PI * PI / (3.0 * hp * hp) + 1.0 / 12.0)
            } else {
                let k = i as i64 - j as i64;
                let s = (k as f64 * hp / 2.0).sin();
                let c = (k as f64 * hp / 2.0).cos();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                scale * (-sign * c / (2.0 * s * s))
            }
        })
    }
}

/// Fourier-mode kinetic factors 4 E_c k_j^2 for the periodic extension
/// (period `n * h`), in FFT output order.
fn fourier_kinetic(n: usize, period: f64, e_c: f64) -> Vec<f64> {
    let dk = 2.0 * PI / period;
    (0..n)
        .map(|j| {
            let m = if j <= n / 2 { j as i64 } else { j as i64 - n as i64 };
            let k = dk * m as f64;
            4.0 * e_c * k * k
        })
        .collect()
}

/// Build the phase-qubit Hamiltonian on a phase grid, in GHz.
///
/// The kinetic term uses the scheme recorded in the basis; the spectral
/// scheme treats the grid as one period of `n * h` so the confining
/// quadratic supplies the effective boundary condition. Errors if the
/// potential has two or more minima in the canonical window
/// `[2 pi phi_e - 2 pi, 2 pi phi_e + 2 pi]` and the grid misses any.
pub fn build_phase_qubit_hamiltonian(p: &PhaseQubitParams, basis: &BasisSpec) -> Result<HamiltonianMatrix> {
    let (phi_min, phi_max, n, scheme) = match *basis {
        BasisSpec::PhaseGrid { phi_min, phi_max, n_points, scheme } => (phi_min, phi_max, n_points, scheme),
        BasisSpec::ChargeLattice { .. } => {
            return Err(Error::Incompatible("phase qubit requires a PhaseGrid basis".into()))
        }
    };
    let e = derive_energies(p)?;
    let center = 2.0 * PI * p.bias;
    let minima = potential_minima(&e, p.bias, center - 2.0 * PI, center + 2.0 * PI);
    if minima.len() >= 2 {
        for &(phi, _) in &minima {
            if phi < phi_min || phi > phi_max {
                return Err(Error::Domain(format!(
                    "grid [{phi_min:.4}, {phi_max:.4}] misses the potential minimum at phi = {phi:.4}"
                )));
            }
        }
    }

    let grid = basis.grid_values();
    let h = basis.grid_step().unwrap();
    let potential: Vec<f64> = grid.iter().map(|&phi| phase_potential(&e, p.bias, phi)).collect();

    let mut m = match scheme {
        DiffScheme::Spectral => {
            let period = n as f64 * h;
            let d2 = spectral_d2(n, period);
            Mat::from_fn(n, n, |i, j| -4.0 * e.e_c * d2[(i, j)])
        }
        DiffScheme::CentralDifference => {
            // -psi'' ~ (2 psi_i - psi_{i-1} - psi_{i+1}) / h^2, hard-wall
            let kin = 4.0 * e.e_c / (h * h);
            Mat::from_fn(n, n, |i, j| {
                if i == j {
                    2.0 * kin
                } else if i.abs_diff(j) == 1 {
                    -kin
                } else {
                    0.0
                }
            })
        }
    };
    for i in 0..n {
        m[(i, i)] += potential[i];
    }

    let mut out = HamiltonianMatrix::new(MatrixData::Real(m), basis.clone(), "phase-qubit Hamiltonian [GHz]")?;
    if scheme == DiffScheme::Spectral {
        out.fourier_apply = Some(FourierApply {
            kinetic: fourier_kinetic(n, n as f64 * h, e.e_c),
            potential,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    // hand-recomputed from the CODATA constants:
    //   E_c = e^2 / (2 C h), E_J = I_0 phi_0 / (2 pi h), E_L = (phi_0/2pi)^2 / (L h)
    const E_C_REF: f64 = 2.2788505088e-2; // GHz at C = 850 fF
    const E_J_REF: f64 = 4.8873657460e2; // GHz at I_0 = 984 nA
    const E_L_REF: f64 = 2.2702987890e2; // GHz at L = 720 pH
    const BETA_REF: f64 = 2.1527412029;

    #[test]
    fn derived_energies_match_hand_calculation() {
        let e = derive_energies(&PhaseQubitParams::reference(0.58)).unwrap();
        assert!((e.e_c - E_C_REF).abs() / E_C_REF < 1e-9, "E_c = {}", e.e_c);
        assert!((e.e_j - E_J_REF).abs() / E_J_REF < 1e-9, "E_J = {}", e.e_j);
        assert!((e.e_l - E_L_REF).abs() / E_L_REF < 1e-9, "E_L = {}", e.e_l);
        assert!((e.beta() - BETA_REF).abs() / BETA_REF < 1e-9, "beta = {}", e.beta());
        // coarse magnitudes
        assert!((e.e_c - 0.0228).abs() < 5e-4);
        assert!((e.e_j - 489.0).abs() < 1.0);
        assert!((e.e_l - 227.0).abs() < 1.0);
        assert!((e.beta() - 2.15).abs() < 0.01);
    }

    #[test]
    fn non_positive_parameters_are_rejected() {
        let mut p = PhaseQubitParams::reference(0.5);
        p.capacitance = 0.0;
        assert!(derive_energies(&p).is_err());
        assert!(PhaseQubitParams::new(850e-15, 720e-12, -1.0, 0.5).is_err());
        // beta <= 1 rejected by the full validator
        assert!(PhaseQubitParams::new(850e-15, 72e-12, 984e-9, 0.5).is_err());
    }

    #[test]
    fn potential_is_symmetric_at_half_flux_quantum() {
        let e = derive_energies(&PhaseQubitParams::reference(0.5)).unwrap();
        for x in [0.1, 0.5, 1.0, 2.0, 3.0] {
            let a = phase_potential(&e, 0.5, PI + x);
            let b = phase_potential(&e, 0.5, PI - x);
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "U asymmetric at x = {x}");
        }
    }

    #[test]
    fn two_minima_in_window_at_reference_bias() {
        let e = derive_energies(&PhaseQubitParams::reference(0.58)).unwrap();
        let c = 2.0 * PI * 0.58;
        let minima = potential_minima(&e, 0.58, c - 2.0 * PI, c + 2.0 * PI);
        assert_eq!(minima.len(), 2, "minima: {minima:?}");
        // left well is the shallow one for bias > 0.5
        assert!(minima[0].1 > minima[1].1);
    }

    #[test]
    fn grid_missing_a_minimum_is_a_domain_error() {
        let p = PhaseQubitParams::reference(0.58);
        let c = 2.0 * PI * 0.58;
        // window that cuts off the deep well near phi = 5.36
        let basis = BasisSpec::phase_grid(c - 2.0 * PI, 4.0, 512, DiffScheme::Spectral).unwrap();
        match build_phase_qubit_hamiltonian(&p, &basis) {
            Err(Error::Domain(_)) => {}
            other => panic!("expected Domain error, got {other:?}"),
        }
    }

    #[test]
    fn hamiltonian_is_hermitian_and_fast_apply_matches_dense() {
        let p = PhaseQubitParams::reference(0.58);
        let basis = BasisSpec::phase_grid(
            2.0 * PI * 0.58 - 2.0 * PI,
            2.0 * PI * 0.58 + 2.0 * PI,
            256,
            DiffScheme::Spectral,
        )
        .unwrap();
        let h = build_phase_qubit_hamiltonian(&p, &basis).unwrap();
        assert!(h.hermiticity_defect() < 1e-12);

        // FFT application must represent the same matrix
        let fa = h.fourier_apply.as_ref().unwrap();
        let n = h.dim();
        let mut planner = rustfft::FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let x: Vec<num_complex::Complex64> = (0..n)
            .map(|i| num_complex::Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut buf = x.clone();
        fwd.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&fa.kinetic) {
            *b *= *k / n as f64;
        }
        inv.process(&mut buf);
        for (b, (xi, u)) in buf.iter_mut().zip(x.iter().zip(&fa.potential)) {
            *b += xi * *u;
        }
        let mut dense = vec![num_complex::Complex64::new(0.0, 0.0); n];
        h.apply(&x, &mut dense);
        let scale = h.max_abs();
        for i in 0..n {
            assert!(
                (dense[i] - buf[i]).norm() < 1e-11 * scale,
                "fast apply deviates at {i}: {} vs {}",
                dense[i],
                buf[i]
            );
        }
    }
}

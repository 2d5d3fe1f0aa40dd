//! Four-level spectrum of a qubit coupled to a resonant two-level
//! defect, and the two-photon asymmetry that separates transverse from
//! longitudinal coupling.
//!
//! The composite system is
//!
//! ```text
//! H = (omega_q / 2) sz_q + (omega_T / 2) sz_T + g_x sx_q sx_T + g_z sz_q sz_T
//! ```
//!
//! (traceless convention, sigma^z = +1 for the excited state). With
//! states 1..4 labeled by ascending energy, a longitudinal component
//! displaces the two-photon line `omega_14 / 2` from the midpoint of the
//! one-photon lines `omega_12`, `omega_13`: the asymmetry
//! `A = omega_14 - omega_12 - omega_13` equals `4 g_z` exactly on
//! resonance, independent of g_x, and vanishes without longitudinal
//! coupling.

use crate::coupling::PauliCoupling;
use faer::{Mat, Side};

/// Energies of the coupled qubit-defect system, ascending, in GHz.
#[derive(Debug, Clone, Copy)]
pub struct CompositeSpectrum {
    pub energies: [f64; 4],
    pub omega_q: f64,
    pub omega_t: f64,
    pub g_x: f64,
    pub g_z: f64,
}

/// One- and two-photon transition frequencies from the ground state.
#[derive(Debug, Clone, Copy)]
pub struct TransitionSet {
    pub omega_12: f64,
    pub omega_13: f64,
    pub omega_14: f64,
    /// omega_14 - omega_12 - omega_13; the two-photon drive frequency is
    /// displaced from the one-photon midpoint by half of this.
    pub asymmetry: f64,
}

impl TransitionSet {
    /// Displacement of the two-photon resonance omega_14 / 2 from the
    /// midpoint of the one-photon lines (A / 2 per photon pair).
    pub fn half_asymmetry(&self) -> f64 {
        self.asymmetry / 2.0
    }
}

/// Diagonalize the 4x4 composite Hamiltonian numerically.
pub fn composite_spectrum(omega_q: f64, omega_t: f64, g: &PauliCoupling) -> CompositeSpectrum {
    // product basis |q T> in the order |ee>, |eg>, |ge>, |gg>
    let (wq, wt, gx, gz) = (omega_q, omega_t, g.g_x, g.g_z);
    let rows: [[f64; 4]; 4] = [
        [(wq + wt) / 2.0 + gz, 0.0, 0.0, gx],
        [0.0, (wq - wt) / 2.0 - gz, gx, 0.0],
        [0.0, gx, (wt - wq) / 2.0 - gz, 0.0],
        [gx, 0.0, 0.0, -(wq + wt) / 2.0 + gz],
    ];
    let m = Mat::from_fn(4, 4, |i, j| rows[i][j]);
    let eig = m
        .self_adjoint_eigen(Side::Lower)
        .expect("4x4 symmetric eigensolve cannot fail");
    let v = eig.S().column_vector();
    CompositeSpectrum {
        energies: [v[0], v[1], v[2], v[3]],
        omega_q,
        omega_t,
        g_x: gx,
        g_z: gz,
    }
}

/// Transition frequencies and two-photon asymmetry of a spectrum.
pub fn two_photon_asymmetry(s: &CompositeSpectrum) -> TransitionSet {
    let [e1, e2, e3, e4] = s.energies;
    let omega_12 = e2 - e1;
    let omega_13 = e3 - e1;
    let omega_14 = e4 - e1;
    TransitionSet {
        omega_12,
        omega_13,
        omega_14,
        asymmetry: omega_14 - omega_12 - omega_13,
    }
}

/// One row of an anticrossing scan.
#[derive(Debug, Clone, Copy)]
pub struct AnticrossingRow {
    pub bias: f64,
    pub omega_q: f64,
    pub omega_12: f64,
    pub omega_13: f64,
    pub omega_14: f64,
    pub asymmetry: f64,
}

/// Composite transition frequencies along a bias sweep.
#[derive(Debug, Clone)]
pub struct AnticrossingScan {
    pub rows: Vec<AnticrossingRow>,
    /// Whether omega_q crossed omega_T inside the sweep.
    pub crossed_resonance: bool,
    /// Smallest gap omega_13 - omega_12 between the middle branches; at
    /// the resonant bias it equals 2 g_x up to grid resolution.
    pub min_gap: f64,
    pub min_gap_bias: f64,
}

/// Scan the composite spectrum over `(bias, omega_q, coupling)` points
/// against a fixed defect frequency. The table is produced even when
/// the sweep never crosses resonance; `crossed_resonance` reports it.
pub fn anticrossing_scan(sweep: &[(f64, f64, PauliCoupling)], omega_t: f64) -> AnticrossingScan {
    let mut rows = Vec::with_capacity(sweep.len());
    let mut min_gap = f64::INFINITY;
    let mut min_gap_bias = f64::NAN;
    let mut prev_detuning: Option<f64> = None;
    let mut crossed = false;
    for &(bias, omega_q, g) in sweep {
        let s = composite_spectrum(omega_q, omega_t, &g);
        let t = two_photon_asymmetry(&s);
        let gap = t.omega_13 - t.omega_12;
        if gap < min_gap {
            min_gap = gap;
            min_gap_bias = bias;
        }
        let detuning = omega_q - omega_t;
        if let Some(p) = prev_detuning {
            if p == 0.0 || detuning == 0.0 || (p < 0.0) != (detuning < 0.0) {
                crossed = true;
            }
        }
        prev_detuning = Some(detuning);
        rows.push(AnticrossingRow {
            bias,
            omega_q,
            omega_12: t.omega_12,
            omega_13: t.omega_13,
            omega_14: t.omega_14,
            asymmetry: t.asymmetry,
        });
    }
    AnticrossingScan { rows, crossed_resonance: crossed, min_gap, min_gap_bias }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(gx: f64, gz: f64) -> PauliCoupling {
        PauliCoupling { g_x: gx, g_z: gz }
    }

    /// Closed-form eigenvalues: the 4x4 splits into the {|ee>, |gg>} and
    /// {|eg>, |ge>} blocks. Used as an independent oracle.
    fn closed_form(wq: f64, wt: f64, gx: f64, gz: f64) -> [f64; 4] {
        let outer = ((wq + wt) / 2.0).hypot(gx);
        let inner = ((wq - wt) / 2.0).hypot(gx);
        let mut e = [gz - outer, gz + outer, -gz - inner, -gz + inner];
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    #[test]
    fn uncoupled_degenerate_spectrum() {
        let s = composite_spectrum(5.0, 5.0, &g(0.0, 0.0));
        let expect = [-5.0, 0.0, 0.0, 5.0];
        for (a, b) in s.energies.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn transverse_only_resonant_spectrum() {
        // analytic: (-sqrt(w^2 + gx^2), -gx, gx, sqrt(w^2 + gx^2))
        let (w, gx) = (5.0, 0.02);
        let s = composite_spectrum(w, w, &g(gx, 0.0));
        let r = (w * w + gx * gx).sqrt();
        let expect = [-r, -gx, gx, r];
        for (a, b) in s.energies.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
        let t = two_photon_asymmetry(&s);
        assert!((t.omega_13 - t.omega_12 - 2.0 * gx).abs() < 1e-13);
        assert!(t.asymmetry.abs() < 1e-12);
    }

    #[test]
    fn middle_branch_splitting_is_two_gx() {
        let s = composite_spectrum(5.0, 5.0, &g(0.02, 0.005));
        let t = two_photon_asymmetry(&s);
        assert!((t.omega_13 - t.omega_12 - 0.04).abs() < 1e-12);
    }

    #[test]
    fn asymmetry_is_four_gz_at_resonance_and_flips_sign() {
        let s = composite_spectrum(5.0, 5.0, &g(0.03, 0.005));
        let t = two_photon_asymmetry(&s);
        assert!((t.asymmetry - 0.02).abs() < 1e-12);
        assert!((t.half_asymmetry() - 0.01).abs() < 1e-12);
        let s = composite_spectrum(5.0, 5.0, &g(0.03, -0.005));
        let t = two_photon_asymmetry(&s);
        assert!((t.asymmetry + 0.02).abs() < 1e-12);
    }

    #[test]
    fn numerical_matches_closed_form_blocks() {
        let cases = [
            (5.0, 5.0, 0.02, 0.005),
            (7.3, 4.1, 0.2, -0.07),
            (1.0, 9.0, 0.0, 0.0),
            (3.0, 3.0, 0.5, 0.5),
        ];
        for (wq, wt, gx, gz) in cases {
            let s = composite_spectrum(wq, wt, &g(gx, gz));
            let e = closed_form(wq, wt, gx, gz);
            for (a, b) in s.energies.iter().zip(&e) {
                assert!((a - b).abs() < 1e-12, "({wq},{wt},{gx},{gz}): {a} vs {b}");
            }
            let trace: f64 = s.energies.iter().sum();
            assert!(trace.abs() < 1e-12);
        }
    }

    #[test]
    fn transitions_are_ordered() {
        let s = composite_spectrum(6.0, 5.0, &g(0.1, 0.02));
        let t = two_photon_asymmetry(&s);
        assert!(t.omega_12 <= t.omega_13 && t.omega_13 <= t.omega_14);
    }

    #[test]
    fn scan_finds_the_anticrossing() {
        let wt = 5.0;
        let sweep: Vec<(f64, f64, PauliCoupling)> = (0..41)
            .map(|i| {
                let bias = i as f64 / 40.0;
                let wq = 4.5 + bias; // crosses 5.0 at bias 0.5
                (bias, wq, g(0.01, 0.0))
            })
            .collect();
        let scan = anticrossing_scan(&sweep, wt);
        assert!(scan.crossed_resonance);
        assert!((scan.min_gap - 0.02).abs() < 1e-4, "min gap {}", scan.min_gap);
        assert!((scan.min_gap_bias - 0.5).abs() < 0.026);

        // g_x = 0: branches cross, zero gap
        let sweep0: Vec<(f64, f64, PauliCoupling)> =
            sweep.iter().map(|&(b, w, _)| (b, w, g(0.0, 0.0))).collect();
        let scan0 = anticrossing_scan(&sweep0, wt);
        assert!(scan0.min_gap < 1e-6);

        // sweep that stays below resonance
        let low: Vec<(f64, f64, PauliCoupling)> =
            (0..11).map(|i| (i as f64, 3.0 + 0.01 * i as f64, g(0.01, 0.0))).collect();
        let scan_low = anticrossing_scan(&low, wt);
        assert!(!scan_low.crossed_resonance);
        assert_eq!(scan_low.rows.len(), 11);
    }

    #[test]
    fn offset_of_two_photon_line_from_midpoint_is_half_asymmetry() {
        let s = composite_spectrum(5.0, 5.0, &g(0.02, 0.004));
        let t = two_photon_asymmetry(&s);
        let midpoint = (t.omega_12 + t.omega_13) / 2.0;
        let two_photon = t.omega_14 / 2.0;
        assert!((two_photon - midpoint - t.half_asymmetry()).abs() < 1e-13);
        assert!((t.asymmetry - 4.0 * 0.004).abs() < 1e-12);
    }
}

mod common;

use common::*;
use sfwm::analysis::{jsi_pulsed, pair_photons, schmidt_purity, JsaGrid};
use sfwm::pump::{PulseGrid, PumpSource};

fn pulse(energy_j: f64, tau_s: f64) -> PumpSource {
    PumpSource::pulse_with_grid(PUMP_NM * 1e-3, energy_j, tau_s, 129, 8.0).unwrap()
}

#[test]
fn long_pulse_approaches_cw() {
    // A pulse much longer than the coherence set by phase matching behaves
    // like a CW pump. The pair sum runs over ordered pump pairs, each
    // non-degenerate one with twice the degenerate prefactor, so the
    // equivalent power is 2ΣP_k − P_0.
    let medium = fibre_medium();
    let profile = fibre_profile(PERIOD_M, 50, 100);
    let p = pulse(1e-12, 200e-12);
    let g = PulseGrid::new(&p).unwrap();
    let total = 2.0 * g.powers_w.iter().sum::<f64>() - g.powers_w[g.len() / 2];
    let cw = PumpSource::cw(PUMP_NM * 1e-3, total).unwrap();
    for nm in [749.9, 750.0, 750.1] {
        let a = pair_photons(&medium, &profile, &p, nm).unwrap();
        let b = pair_photons(&medium, &profile, &cw, nm).unwrap();
        assert!((a / b - 1.0).abs() < 0.02, "{nm} nm: pulsed {a:e} vs cw {b:e}");
    }
}

#[test]
fn jsi_centred_on_design_pair_and_transposes() {
    let medium = fibre_medium();
    let profile = fibre_profile(PERIOD_M, 50, 100);
    let p = pulse(1e-9, 2.47e-12);
    let grid = PulseGrid::new(&p).unwrap();
    let axes = JsaGrid::around(&grid, SIGNAL_NM, 21, 4).unwrap();
    let jsa = jsi_pulsed(&medium, &profile, &p, &axes).unwrap();
    let (s, i) = jsa.peak();
    assert!((s - 750.0).abs() < 0.5 && (i - 812.5).abs() < 0.6, "peak at ({s}, {i})");

    let swapped = jsi_pulsed(&medium, &profile, &p, &axes.transposed()).unwrap();
    for r in 0..jsa.rows() {
        for c in 0..jsa.cols() {
            let (a, b) = (jsa.get(r, c).norm_sqr(), swapped.get(c, r).norm_sqr());
            assert!((a - b).abs() <= 1e-12 * a.max(b).max(1e-300), "({r}, {c}): {a:e} vs {b:e}");
        }
    }
    let pa = schmidt_purity(&jsa).unwrap().purity;
    let pb = schmidt_purity(&swapped).unwrap().purity;
    assert!((pa - pb).abs() < 1e-10);
}

#[test]
fn narrow_pump_line_gives_a_nearly_separable_state_off_diagonal() {
    // Cells off the energy-conserving diagonal must vanish once the pump
    // spectrum is much narrower than the JSA step.
    let medium = fibre_medium();
    let profile = fibre_profile(PERIOD_M, 10, 50);
    let p = pulse(1e-12, 20e-12);
    let grid = PulseGrid::new(&p).unwrap();
    let axes = JsaGrid::around(&grid, SIGNAL_NM, 5, 64).unwrap();
    let jsa = jsi_pulsed(&medium, &profile, &p, &axes).unwrap();
    let diag: f64 = (0..5).map(|k| jsa.get(k, 4 - k).norm_sqr()).sum();
    assert!(diag > 0.999 * jsa.total_photons());
}

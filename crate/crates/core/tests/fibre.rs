mod common;

use common::*;
use sfwm::analysis::{fwhm, idler_wavelength_nm, linear_axis, spectrum_cw};
use sfwm::dispersion::{group_index, propagation_constant};
use sfwm::units::omega_from_wavelength_nm;

#[test]
fn group_index_decreases_across_the_band() {
    let m = fibre_medium();
    let ng: Vec<f64> = (0..=40)
        .map(|k| group_index(&*m.index, 0.6 + 0.01 * k as f64, 1.0).unwrap())
        .collect();
    assert!(ng.windows(2).all(|w| w[1] < w[0]), "{ng:?}");
}

#[test]
fn linear_mismatch_sets_a_centimetre_scale_period() {
    // Quasi-phase matching needs one taper period per 2π of linear
    // mismatch between the pump pair and the design signal/idler.
    let m = fibre_medium();
    let idler = idler_wavelength_nm(PUMP_NM, SIGNAL_NM);
    assert!((idler - 812.5).abs() < 0.05);
    let slots = fibre_profile(PERIOD_M, 1, 400).slot_geometries();
    let dk = slots
        .iter()
        .map(|&g| {
            let k = |nm: f64| propagation_constant(&*m.index, omega_from_wavelength_nm(nm), g).unwrap();
            2.0 * k(PUMP_NM) - k(SIGNAL_NM) - k(idler)
        })
        .sum::<f64>()
        / slots.len() as f64;
    let period = 2.0 * std::f64::consts::PI / dk.abs();
    assert!((0.04..0.05).contains(&period), "Λ_T = {period} m");
}

#[test]
fn bandwidth_halves_when_the_structure_doubles() {
    let m = fibre_medium();
    let pump = cw_pump();
    let axis = linear_axis(748.5, 751.5, 601).unwrap();
    let width = |periods| {
        let s = spectrum_cw(&m, &fibre_profile(PERIOD_M, periods, 100), &pump, &axis, false).unwrap();
        let (peak_nm, _) = s.peak().unwrap();
        assert!((peak_nm - SIGNAL_NM).abs() < 0.1, "peak at {peak_nm}");
        fwhm(&s.wavelength_nm, &s.photons).unwrap()
    };
    let ratio = width(25) / width(50);
    assert!((ratio - 2.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn unmodulated_fibre_stays_dark() {
    let m = fibre_medium();
    let pump = cw_pump();
    let axis = linear_axis(745.0, 755.0, 41).unwrap();
    let profile = fibre_profile(PERIOD_M, 50, 100);
    let tapered = spectrum_cw(&m, &profile, &pump, &axis, true).unwrap();
    let reference = tapered.reference.clone().unwrap();
    let (_, peak) = tapered.peak().unwrap();
    let max_ref = reference.iter().cloned().fold(0.0, f64::max);
    assert!(max_ref < 1e-2 * peak, "{max_ref:e} vs {peak:e}");
}

//! Acceptance gate: one PASS/FAIL line per criterion. Exits nonzero when a
//! binding criterion fails; the enhancement magnitude is indicative only.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfwm::analysis::{
    growth_trace, jsi_pulsed, linear_axis, maxima_per_period, mi_sidebands,
    nonlinear_parameter, pair_photons, schmidt_purity, spectrum_cw, to_db, JointSpectralAmplitude, JsaGrid,
};
use sfwm::cli::{run, Command};
use sfwm::dispersion::beta2;
use sfwm::modes::{mode_area, overlap_fwm, overlap_xpm, self_overlap};
use sfwm::propagation::{ode_oracle, propagate, CwCoupling, LinearCoupling, OracleOptions};
use sfwm::pump::{PulseGrid, PumpSource};
use sfwm::units::omega_from_wavelength_nm;
use sfwm::waveguide::TaperProfile;

struct Gate {
    failed: Vec<String>,
}

impl Gate {
    fn report(&mut self, id: &str, binding: bool, pass: bool, detail: String) {
        let verdict = match (pass, binding) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "MISS",
        };
        let tag = if binding { "" } else { " (indicative)" };
        println!("[{verdict}] {id}{tag}: {detail}");
        if binding && !pass {
            self.failed.push(id.to_string());
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn bogoliubov(gate: &mut Gate) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5f3a);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let model = LinearCoupling {
            gamma: rng.gen_range(0.0..1.5),
            gamma_slope: rng.gen_range(-3.0..3.0),
            delta_kappa: rng.gen_range(-300.0..300.0),
            delta_kappa_slope: rng.gen_range(-3000.0..3000.0),
            reference_um: 1.0,
        };
        let profile = TaperProfile::new(
            1.0,
            rng.gen_range(0.0..0.2),
            rng.gen_range(0.02..0.3),
            rng.gen_range(1..6),
            20,
        )
        .unwrap();
        let r = ode_oracle(&profile, &model, OracleOptions::default()).unwrap();
        worst = worst.max(r.matrix.bogoliubov_defect().abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    gate.report(
        "1a oracle |T11|²−|T12|²=1",
        true,
        worst < 1e-8 && elapsed < 60.0,
        format!("max defect {worst:.2e} over 1000 configs (< 1e-8), {elapsed:.1} s (< 60 s)"),
    );

    let model = LinearCoupling {
        gamma: 0.5,
        gamma_slope: 0.3,
        delta_kappa: 40.0,
        delta_kappa_slope: 300.0,
        reference_um: 1.0,
    };
    let base = TaperProfile::new(1.0, 0.1, 0.15, 5, 20).unwrap();
    let exact = ode_oracle(&base, &model, OracleOptions::default()).unwrap().matrix;
    let steps = [25usize, 50, 100, 200, 400];
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .map(|&n| {
            let p = TaperProfile { steps_per_period: n, ..base };
            let m = propagate(&p, &model).unwrap().matrix;
            ((n as f64).ln(), m.max_abs_diff(&exact).ln())
        })
        .collect();
    let (mx, my) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (mx / pts.len() as f64, my / pts.len() as f64);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let order = -slope;
    gate.report(
        "1b element-product convergence order",
        true,
        (0.9..=2.5).contains(&order),
        format!("order {order:.3} over steps/period {steps:?} (in [0.9, 2.5])"),
    );
}

fn analytic_limit(gate: &mut Gate) {
    let mut worst: f64 = 0.0;
    for gl in [0.05, 0.1, 0.2, 0.3] {
        let profile = TaperProfile::new(1.0, 0.0, 0.1, 10, 200).unwrap();
        let gamma = gl / profile.length_m();
        let model = LinearCoupling::uniform(gamma, 0.0);
        let expected = gl.sinh().powi(2);
        let engine = propagate(&profile, &model).unwrap().photons();
        let oracle = ode_oracle(&profile, &model, OracleOptions::default()).unwrap().photons();
        worst = worst.max(rel(engine, expected)).max(rel(oracle, expected));
    }
    gate.report(
        "2 phase-matched ⟨N⟩ = sinh²(γL)",
        true,
        worst < 0.01,
        format!("max relative deviation {worst:.2e} for γL ∈ {{0.05, 0.1, 0.2, 0.3}} (< 1e-2)"),
    );
}

fn oracle_equivalence(gate: &mut Gate) {
    let medium = fibre_medium();
    let profile = fibre_profile(PERIOD_M, 50, 200);
    let pump = cw_pump();
    let axis = linear_axis(749.0, 751.0, 201).unwrap();
    let s = spectrum_cw(&medium, &profile, &pump, &axis, false).unwrap();
    let (peak_nm, engine) = s.peak().unwrap();
    let model = CwCoupling::new(medium.clone(), &pump, omega_from_wavelength_nm(peak_nm)).unwrap();
    let oracle = ode_oracle(&profile, &model, OracleOptions::default()).unwrap().photons();
    let d = rel(engine, oracle);
    gate.report(
        "3 engine vs oracle at the spectral peak",
        true,
        d <= 5e-3,
        format!("peak {peak_nm:.2} nm: engine {engine:.6e}, oracle {oracle:.6e}, deviation {d:.2e} (≤ 5e-3)"),
    );
}

fn quasi_phase_matching(gate: &mut Gate) -> f64 {
    let medium = fibre_medium();
    let pump = cw_pump();
    let (first, _) = brightest_period(&medium, 50, 0.035, 0.06);
    let per_m2: Vec<f64> = [10usize, 20, 40]
        .iter()
        .map(|&m| pair_photons(&medium, &fibre_profile(first, m, 200), &pump, SIGNAL_NM).unwrap() / (m * m) as f64)
        .collect();
    let mean = per_m2.iter().sum::<f64>() / 3.0;
    let spread = per_m2.iter().map(|v| (v / mean - 1.0).abs()).fold(0.0, f64::max);
    gate.report(
        "4a ⟨N⟩/M² constant at the 1st-order period",
        true,
        spread <= 0.2,
        format!(
            "Λ_T {:.2} cm, ⟨N⟩/M² = {:.3e}, {:.3e}, {:.3e} for M = 10, 20, 40; max spread {:.1}% (≤ 20%)",
            first * 100.0,
            per_m2[0],
            per_m2[1],
            per_m2[2],
            spread * 100.0
        ),
    );

    let (second, _) = brightest_period(&medium, 50, 1.7 * first, 2.3 * first);
    let profile = fibre_profile(second, 10, 200);
    let trace = growth_trace(&medium, &profile, &pump, SIGNAL_NM, 1).unwrap();
    let counts = maxima_per_period(&trace, &profile);
    let doubles = counts.iter().filter(|&&c| c == 2).count();
    gate.report(
        "4b two maxima per cycle at the 2nd-order period",
        true,
        doubles == counts.len(),
        format!(
            "Λ_T {:.2} cm ({:.2}× 1st order), maxima per cycle {counts:?}",
            second * 100.0,
            second / first
        ),
    );
    first
}

fn enhancement(gate: &mut Gate, period: f64) {
    let medium = fibre_medium();
    let pump = cw_pump();
    let profile = fibre_profile(period, 50, 200);
    let n = pair_photons(&medium, &profile, &pump, SIGNAL_NM).unwrap();
    let n0 = pair_photons(&medium, &profile.uniform(), &pump, SIGNAL_NM).unwrap();
    let db = to_db(n / n0);
    gate.report(
        "5 enhancement at Δ = 0.1, M = 50",
        false,
        (db - 35.0).abs() <= 5.0,
        format!("{db:.2} dB at the brightest Λ_T = {:.2} cm (35 ± 5 dB)", period * 100.0),
    );
}

fn modulation_instability(gate: &mut Gate) {
    let medium = fibre_medium();
    let b2 = beta2(&*medium.index, PUMP_NM * 1e-3, 1.0).unwrap();
    let g = nonlinear_parameter(&medium, PUMP_NM, 1.0).unwrap();
    let bands = mi_sidebands(b2, g, 1.0, PERIOD_M, PUMP_NM, &[1, 2]).unwrap();
    let axis = linear_axis(700.0, 775.0, 751).unwrap();
    let s = spectrum_cw(&medium, &fibre_profile(PERIOD_M, 50, 200), &cw_pump(), &axis, false).unwrap();
    for b in bands {
        let predicted = b.signal_nm.unwrap();
        let (nm, _) = s
            .wavelength_nm
            .iter()
            .zip(&s.photons)
            .filter(|(x, _)| (**x - predicted).abs() <= 10.0)
            .fold((f64::NAN, f64::NEG_INFINITY), |a, (x, n)| if *n > a.1 { (*x, *n) } else { a });
        let d = (nm - predicted).abs();
        gate.report(
            &format!("6 MI sideband order {}", b.order),
            true,
            d <= 5.0,
            format!("predicted {predicted:.2} nm, spectrum peak {nm:.2} nm, |Δ| = {d:.2} nm (≤ 5)"),
        );
    }
}

fn schmidt(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let u = DVector::<f64>::from_fn(30, |_, _| rng.gen_range(-1.0..1.0));
    let v = DVector::<f64>::from_fn(25, |_, _| rng.gen_range(-1.0..1.0));
    let phase = Complex64::from_polar(1.0, 0.7);
    let (u, v) = (&u, &v);
    let rank1: Vec<Complex64> = (0..30).flat_map(|r| (0..25).map(move |c| phase * u[r] * v[c])).collect();
    let jsa = JointSpectralAmplitude::new((0..30).map(|k| k as f64).collect(), (0..25).map(|k| k as f64).collect(), rank1)
        .unwrap();
    let p1 = schmidt_purity(&jsa).unwrap().purity;

    // two orthonormal pairs with equal weight
    let e = |n: usize, k: usize, f: f64| ((k as f64 + 0.5) * f * std::f64::consts::PI / n as f64).cos();
    let norm = |n: usize, f: f64| (0..n).map(|k| e(n, k, f).powi(2)).sum::<f64>().sqrt();
    let two: Vec<Complex64> = (0..30)
        .flat_map(|r| {
            (0..25).map(move |c| {
                let a = e(30, r, 1.0) / norm(30, 1.0) * e(25, c, 1.0) / norm(25, 1.0);
                let b = e(30, r, 3.0) / norm(30, 3.0) * e(25, c, 2.0) / norm(25, 2.0);
                Complex64::new(a + b, 0.0)
            })
        })
        .collect();
    let jsa = JointSpectralAmplitude::new((0..30).map(|k| k as f64).collect(), (0..25).map(|k| k as f64).collect(), two)
        .unwrap();
    let p2 = schmidt_purity(&jsa).unwrap().purity;
    gate.report(
        "7a Schmidt purity of rank-1 and two-mode states",
        true,
        (p1 - 1.0).abs() <= 1e-10 && (p2 - 0.5).abs() <= 1e-12,
        format!("rank-1 {p1:.15} (±1e-10), two equal modes {p2:.15} (±1e-12)"),
    );

    let medium = fibre_medium();
    let profile = fibre_profile(PERIOD_M, 50, 200);
    let purity = |tau_ps: f64| {
        let p = PumpSource::pulse_with_grid(PUMP_NM * 1e-3, 1e-9, tau_ps * 1e-12, 129, 8.0).unwrap();
        let axes = JsaGrid::around(&PulseGrid::new(&p).unwrap(), SIGNAL_NM, 121, 2).unwrap();
        schmidt_purity(&jsi_pulsed(&medium, &profile, &p, &axes).unwrap()).unwrap().purity
    };
    let long = purity(2.47);
    let short = purity(1.0 / (2.0 * 2f64.ln().sqrt()));
    gate.report(
        "7b purity rises as the pulse shortens",
        true,
        short > long,
        format!("1 nJ: τ = 2.47 ps (4 ps FWHM) → {long:.4}; τ = 0.60 ps (1 ps FWHM) → {short:.4}"),
    );
    let scan: Vec<(f64, f64)> = [2.47, 1.5, 1.0, 0.6].iter().map(|&t| (t, purity(t))).collect();
    let monotone = scan.windows(2).all(|w| w[1].1 >= w[0].1);
    println!(
        "[INFO] 7c purity over τ (ps) {}: {}",
        scan.iter().map(|(t, p)| format!("{t}→{p:.4}")).collect::<Vec<_>>().join(", "),
        if monotone { "monotone" } else { "not monotone between the endpoints" }
    );
}

fn symmetry(gate: &mut Gate) {
    let medium = fibre_medium();
    let pump = cw_pump();
    let profile = fibre_profile(PERIOD_M, 50, 200);
    let mut bitwise = true;
    let mut worst: f64 = 0.0;
    for nm in [740.0, 748.3, 750.0, 755.5, 770.0] {
        let model = CwCoupling::new(medium.clone(), &pump, omega_from_wavelength_nm(nm)).unwrap();
        let a = propagate(&profile, &model).unwrap().photons();
        let b = propagate(&profile, &model.swapped()).unwrap().photons();
        bitwise &= a.to_bits() == b.to_bits();
        // the idler frequency evaluated as a signal in its own right
        let wi = 2.0 * pump.center_omega() - omega_from_wavelength_nm(nm);
        let idler = propagate(&profile, &CwCoupling::new(medium.clone(), &pump, wi).unwrap()).unwrap().photons();
        worst = worst.max(rel(a, idler));
    }
    gate.report(
        "8 signal/idler symmetry",
        true,
        bitwise && worst <= 1e-12,
        format!("swapped labels bitwise equal: {bitwise}; N(ω_i) vs N(ω_s) max deviation {worst:.2e} (≤ 1e-12)"),
    );
}

fn overlaps(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let w: Vec<f64> = (0..4).map(|_| rng.gen_range(0.7..2.0)).collect();
        let m: Vec<_> = w.iter().map(|&r| gaussian(r)).collect();
        let w_max = w.iter().cloned().fold(0.0, f64::max);
        let checks = [
            (
                overlap_fwm(&m[0], &m[1], &m[2], &m[3]),
                quadrature_2d(w_max, |x, y| m[0].field(x, y) * m[1].field(x, y) * m[2].field(x, y) * m[3].field(x, y)),
            ),
            (overlap_xpm(&m[0], &m[2]), quadrature_2d(w_max, |x, y| (m[0].field(x, y) * m[2].field(x, y)).powi(2))),
            (self_overlap(&m[1]), quadrature_2d(w_max, |x, y| m[1].field(x, y).powi(4))),
            (mode_area(&m[3]), quadrature_2d(w_max, |x, y| m[3].field(x, y).powi(2))),
        ];
        for (closed, quad) in checks {
            worst = worst.max(rel(closed, quad));
        }
    }
    gate.report(
        "9 overlaps vs 2D quadrature",
        true,
        worst <= 1e-9,
        format!("max relative deviation {worst:.2e} over 20 random radius sets (≤ 1e-9)"),
    );
}

fn determinism(gate: &mut Gate) {
    let config = configs_dir().join("fibre_cw.json");
    let dir = tempfile::tempdir().unwrap();
    let outputs: Vec<Vec<u8>> = [1, 4, 8]
        .iter()
        .map(|t| {
            let out = dir.path().join(format!("t{t}"));
            run(Command::Spectrum, &config, &[format!("threads={t}")], Some(&out)).unwrap();
            std::fs::read(out.join("spectrum.csv")).unwrap()
        })
        .collect();
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    gate.report(
        "10 byte-identical spectrum.csv for 1/4/8 threads",
        true,
        same,
        format!("{} bytes each, identical: {same}", outputs[0].len()),
    );
}

fn main() -> ExitCode {
    let mut gate = Gate { failed: Vec::new() };
    let start = Instant::now();
    bogoliubov(&mut gate);
    analytic_limit(&mut gate);
    oracle_equivalence(&mut gate);
    let period = quasi_phase_matching(&mut gate);
    enhancement(&mut gate, period);
    modulation_instability(&mut gate);
    schmidt(&mut gate);
    symmetry(&mut gate);
    overlaps(&mut gate);
    determinism(&mut gate);
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if gate.failed.is_empty() {
        println!("all binding criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("binding criteria failed: {}", gate.failed.join(", "));
        ExitCode::FAILURE
    }
}

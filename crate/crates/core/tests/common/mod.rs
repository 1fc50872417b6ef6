#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use sfwm::analysis::pair_photons;
use sfwm::dispersion::{EmpiricalFibre, FibreCoefficients, SellmeierModel};
use sfwm::medium::NonlinearMedium;
use sfwm::modes::GaussianMode;
use sfwm::pump::PumpSource;
use sfwm::waveguide::TaperProfile;

pub const PUMP_NM: f64 = 780.0;
pub const SIGNAL_NM: f64 = 750.0;
pub const N2: f64 = 2.25e-20;
pub const PERIOD_M: f64 = 0.04548;

pub fn fibre_medium() -> Arc<NonlinearMedium> {
    let fibre = EmpiricalFibre::new(
        FibreCoefficients::bundled(),
        SellmeierModel::fused_silica(),
        0.5,
        [0.5, 1.5],
    )
    .unwrap();
    Arc::new(NonlinearMedium::fibre(fibre, N2).unwrap())
}

pub fn fibre_profile(period_m: f64, periods: usize, steps: usize) -> TaperProfile {
    TaperProfile::new(1.0, 0.1, period_m, periods, steps).unwrap()
}

pub fn cw_pump() -> PumpSource {
    PumpSource::cw(PUMP_NM * 1e-3, 1.0).unwrap()
}

pub fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/configs")
}

/// Period in `[lo, hi]` maximising the photon number at 750 nm: coarse scan
/// followed by golden-section refinement.
pub fn brightest_period(medium: &Arc<NonlinearMedium>, periods: usize, lo: f64, hi: f64) -> (f64, f64) {
    let pump = cw_pump();
    let n = |p: f64| pair_photons(medium, &fibre_profile(p, periods, 100), &pump, SIGNAL_NM).unwrap();
    let k = 60;
    let grid: Vec<f64> = (0..=k).map(|j| lo + (hi - lo) * j as f64 / k as f64).collect();
    let best = (0..=k).max_by(|&a, &b| n(grid[a]).total_cmp(&n(grid[b]))).unwrap();
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(k)]);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..40 {
        let (c, d) = (b - r * (b - a), a + r * (b - a));
        if n(c) > n(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let p = 0.5 * (a + b);
    (p, n(p))
}

/// `∬ f(x, y)` by the trapezoid rule on a square wide enough for Gaussians of
/// radius up to `w_max`; spectrally accurate for smooth decaying integrands.
pub fn quadrature_2d(w_max: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
    let half = 9.0 * w_max;
    let n = 600;
    let h = 2.0 * half / n as f64;
    let mut sum = 0.0;
    for a in 0..=n {
        let x = -half + a as f64 * h;
        for b in 0..=n {
            let y = -half + b as f64 * h;
            sum += f(x, y);
        }
    }
    sum * h * h
}

pub fn gaussian(radius_um: f64) -> GaussianMode {
    GaussianMode::new(radius_um, 0.78, 1.45).unwrap()
}

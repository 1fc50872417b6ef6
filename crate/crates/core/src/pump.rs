//! Continuous-wave and Gaussian-pulse pump sources.
//!
//! A pulse `A(t) = A₀ exp(−t²/2τ²) exp(−jω₀t)` is decomposed on a symmetric
//! frequency grid of spacing Δω. Component `p` carries amplitude
//! `A_p = (A₀ τ Δω / √(2π)) exp(−τ²(ω_p − ω₀)²/2)` and intensity
//! `I_p = E τ Δω² / (2π√π S_p) · exp(−τ²(ω_p − ω₀)²)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{omega_from_wavelength_um, UM2_TO_M2};

/// Default spectral window, in units of 1/τ.
pub const DEFAULT_SPAN_OVER_TAU: f64 = 8.0;
/// Default component count (odd, so ω₀ is itself a component).
pub const DEFAULT_COMPONENTS: usize = 129;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PumpSource {
    Cw {
        wavelength_um: f64,
        power_w: f64,
    },
    Pulse {
        wavelength_um: f64,
        energy_j: f64,
        /// Characteristic width τ (s); intensity FWHM is `2τ√ln2`.
        tau_s: f64,
        components: usize,
        span_over_tau: f64,
    },
}

/// One monochromatic slice of the pump.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PumpComponent {
    pub omega: f64,
    /// W/m² for the pump area the decomposition was evaluated at.
    pub intensity: f64,
    /// `A_p / A₀`.
    pub amplitude_weight: f64,
}

impl PumpSource {
    pub fn cw(wavelength_um: f64, power_w: f64) -> Result<Self> {
        let p = PumpSource::Cw {
            wavelength_um,
            power_w,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn pulse(wavelength_um: f64, energy_j: f64, tau_s: f64) -> Result<Self> {
        Self::pulse_with_grid(
            wavelength_um,
            energy_j,
            tau_s,
            DEFAULT_COMPONENTS,
            DEFAULT_SPAN_OVER_TAU,
        )
    }

    pub fn pulse_with_grid(
        wavelength_um: f64,
        energy_j: f64,
        tau_s: f64,
        components: usize,
        span_over_tau: f64,
    ) -> Result<Self> {
        let p = PumpSource::Pulse {
            wavelength_um,
            energy_j,
            tau_s,
            components,
            span_over_tau,
        };
        p.validate()?;
        Ok(p)
    }

    /// τ from an intensity FWHM.
    pub fn tau_from_fwhm(fwhm_s: f64) -> f64 {
        fwhm_s / (2.0 * 2f64.ln().sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PumpSource::Cw {
                wavelength_um,
                power_w,
            } => {
                if !(wavelength_um > 0.0) {
                    return Err(Error::invalid("pump wavelength must be positive"));
                }
                if !(power_w > 0.0 && power_w.is_finite()) {
                    return Err(Error::invalid(format!("pump power must be positive, got {power_w} W")));
                }
            }
            PumpSource::Pulse {
                wavelength_um,
                energy_j,
                tau_s,
                components,
                span_over_tau,
            } => {
                if !(wavelength_um > 0.0) {
                    return Err(Error::invalid("pump wavelength must be positive"));
                }
                if !(energy_j > 0.0 && energy_j.is_finite()) {
                    return Err(Error::invalid(format!("pulse energy must be positive, got {energy_j} J")));
                }
                if !(tau_s > 0.0 && tau_s.is_finite()) {
                    return Err(Error::invalid(format!("pulse width must be positive, got {tau_s} s")));
                }
                if components == 0 || components % 2 == 0 {
                    return Err(Error::invalid(format!(
                        "pump component count must be odd and ≥ 1, got {components}"
                    )));
                }
                if !(span_over_tau > 0.0 && span_over_tau.is_finite()) {
                    return Err(Error::invalid("pump spectral span must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn wavelength_um(&self) -> f64 {
        match *self {
            PumpSource::Cw { wavelength_um, .. } | PumpSource::Pulse { wavelength_um, .. } => {
                wavelength_um
            }
        }
    }

    pub fn center_omega(&self) -> f64 {
        omega_from_wavelength_um(self.wavelength_um())
    }
}

/// The pulse's frequency grid with the per-component power `I_p S_p` (W), so
/// intensities can be formed against any local mode area.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseGrid {
    pub center_omega: f64,
    pub spacing: f64,
    pub omegas: Vec<f64>,
    pub powers_w: Vec<f64>,
    pub amplitude_weights: Vec<f64>,
    pub tau_s: f64,
    pub energy_j: f64,
}

impl PulseGrid {
    pub fn new(pulse: &PumpSource) -> Result<Self> {
        pulse.validate()?;
        let PumpSource::Pulse {
            energy_j,
            tau_s,
            components,
            span_over_tau,
            ..
        } = *pulse
        else {
            return Err(Error::invalid("pulse grid requested for a CW pump"));
        };
        let center = pulse.center_omega();
        let span = span_over_tau / tau_s;
        let spacing = if components > 1 {
            span / (components - 1) as f64
        } else {
            span
        };
        let half = (components / 2) as i64;
        let offsets: Vec<f64> = (-half..=half).map(|k| k as f64 * spacing).collect();
        let omegas = offsets.iter().map(|d| center + d).collect();
        let norm = energy_j * tau_s * spacing * spacing / (2.0 * PI * PI.sqrt());
        let powers_w = offsets
            .iter()
            .map(|d| norm * (-(tau_s * d).powi(2)).exp())
            .collect();
        let amplitude_weights = offsets
            .iter()
            .map(|d| tau_s * spacing / (2.0 * PI).sqrt() * (-(tau_s * d).powi(2) / 2.0).exp())
            .collect();
        Ok(Self {
            center_omega: center,
            spacing,
            omegas,
            powers_w,
            amplitude_weights,
            tau_s,
            energy_j,
        })
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Index offset of the grid's first component from ω₀ (−N/2).
    pub fn half_width(&self) -> i64 {
        (self.omegas.len() / 2) as i64
    }

    /// Pulse energy recovered from the discrete components, `Σ P_p 2π/Δω`.
    pub fn discrete_energy(&self) -> f64 {
        self.powers_w.iter().sum::<f64>() * 2.0 * PI / self.spacing
    }
}

/// Component list with intensities evaluated for pump area `area_um2`.
pub fn decompose_pulse(pulse: &PumpSource, area_um2: f64) -> Result<Vec<PumpComponent>> {
    if !(area_um2 > 0.0) {
        return Err(Error::domain(format!("pump area must be positive, got {area_um2} µm²")));
    }
    let grid = PulseGrid::new(pulse)?;
    let area_m2 = area_um2 * UM2_TO_M2;
    Ok(grid
        .omegas
        .iter()
        .zip(&grid.powers_w)
        .zip(&grid.amplitude_weights)
        .map(|((&omega, &p), &a)| PumpComponent {
            omega,
            intensity: p / area_m2,
            amplitude_weight: a,
        })
        .collect())
}

/// SPM-corrected pump propagation constant
/// `κ_p = k_p [1 + n₂ I_p ∬|F_p|⁴ / (n_p² S_p)]`.
///
/// `area` and `self_overlap` must share units.
pub fn pump_kappa_cw(
    k_p: f64,
    n_p: f64,
    n2: f64,
    intensity: f64,
    area: f64,
    self_overlap: f64,
) -> f64 {
    k_p * (1.0 + n2 * intensity * self_overlap / (n_p * n_p * area))
}

/// Pump constant of component `u` in the presence of a partner component `v`:
/// self term `I_u ∬|F_u|⁴` plus cross term `2 I_v ∬|F_v|²|F_u|²`.
#[allow(clippy::too_many_arguments)]
pub fn pump_kappa_two(
    k_pu: f64,
    n_pu: f64,
    n2: f64,
    intensity_u: f64,
    intensity_v: f64,
    area_u: f64,
    self_overlap_u: f64,
    cross_overlap_uv: f64,
) -> f64 {
    k_pu
        * (1.0
            + n2 * (intensity_u * self_overlap_u + 2.0 * intensity_v * cross_overlap_uv)
                / (n_pu * n_pu * area_u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn pulse(components: usize) -> PumpSource {
        PumpSource::pulse_with_grid(0.78, 1e-9, 2.47e-12, components, 8.0).unwrap()
    }

    #[test]
    fn center_component_intensity() {
        let p = pulse(65);
        let grid = PulseGrid::new(&p).unwrap();
        let comps = decompose_pulse(&p, 0.8).unwrap();
        let mid = comps.len() / 2;
        let (e, tau, dw, s) = (1e-9, 2.47e-12, grid.spacing, 0.8e-12);
        let expected = e * tau * dw * dw / (2.0 * PI * PI.sqrt() * s);
        assert!((comps[mid].intensity / expected - 1.0).abs() < 1e-13);
        assert_eq!(comps[mid].omega, p.center_omega());
    }

    #[test]
    fn grid_is_symmetric() {
        let comps = decompose_pulse(&pulse(65), 1.0).unwrap();
        let n = comps.len();
        let c = comps[n / 2].omega;
        for k in 0..n / 2 {
            let (a, b) = (comps[k], comps[n - 1 - k]);
            assert_eq!(a.intensity, b.intensity);
            assert!(((c - a.omega) - (b.omega - c)).abs() <= 1e-6 * (b.omega - c).abs());
        }
    }

    #[test]
    fn discrete_energy_matches_pulse_energy() {
        for n in [65, 129, 257] {
            let g = PulseGrid::new(&pulse(n)).unwrap();
            assert!((g.discrete_energy() / 1e-9 - 1.0).abs() < 5e-3, "N = {n}");
        }
    }

    #[test]
    fn reconstructed_pulse_has_expected_fwhm() {
        let tau = 2.47e-12;
        let g = PulseGrid::new(&pulse(129)).unwrap();
        let intensity = |t: f64| {
            let a: Complex64 = g
                .omegas
                .iter()
                .zip(&g.amplitude_weights)
                .map(|(&w, &a)| a * Complex64::from_polar(1.0, -(w - g.center_omega) * t))
                .sum();
            a.norm_sqr()
        };
        let peak = intensity(0.0);
        // bisection for the half-maximum crossing on t > 0
        let (mut lo, mut hi) = (0.0, 5.0 * tau);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if intensity(mid) > 0.5 * peak {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let fwhm = 2.0 * lo;
        let expected = 2.0 * tau * 2f64.ln().sqrt();
        assert!((fwhm / expected - 1.0).abs() < 0.01, "{fwhm} vs {expected}");
    }

    #[test]
    fn kappa_limits() {
        let (k, n, i, s, o) = (1.15e7, 1.42, 1.3e12, 0.8, 0.4);
        assert_eq!(pump_kappa_cw(k, n, 0.0, i, s, o), k);
        let d1 = pump_kappa_cw(k, n, 2.25e-20, i, s, o) - k;
        let d2 = pump_kappa_cw(k, n, 2.25e-20, 2.0 * i, s, o) - k;
        assert!((d2 / d1 - 2.0).abs() < 1e-6);
        assert!(d1 > 0.0);
    }

    #[test]
    fn two_pump_kappa_limits() {
        let (k, n, n2, s, o) = (1.15e7, 1.42, 2.25e-20, 0.8, 0.4);
        let i = 1e13;
        assert_eq!(
            pump_kappa_two(k, n, n2, i, 0.0, s, o, o),
            pump_kappa_cw(k, n, n2, i, s, o)
        );
        let cross = pump_kappa_two(k, n, n2, 0.0, i, s, o, o) - k;
        let lone = pump_kappa_cw(k, n, n2, i, s, o) - k;
        assert!((cross / lone - 2.0).abs() < 1e-6);
        let u = pump_kappa_two(k, n, n2, i, i, s, o, o);
        let v = pump_kappa_two(k, n, n2, i, i, s, o, o);
        assert_eq!(u, v);
    }

    #[test]
    fn validation() {
        assert!(PumpSource::cw(0.78, 0.0).is_err());
        assert!(PumpSource::pulse_with_grid(0.78, 1e-9, 1e-12, 64, 8.0).is_err());
        assert!(PumpSource::pulse_with_grid(0.78, 1e-9, 0.0, 65, 8.0).is_err());
        assert!(decompose_pulse(&pulse(65), 0.0).is_err());
        assert!((PumpSource::tau_from_fwhm(1e-12) - 0.6005612e-12).abs() < 1e-18);
    }
}

//! Observables built on the propagation engine: spectra, growth traces,
//! enhancement maps, joint spectra with their Schmidt purity, and the
//! modulation-instability sideband estimate.
//!
//! Grid points are independent, so they are evaluated in parallel with rayon
//! and assembled by index; results do not depend on the thread count.

mod jsa;
mod mi;

pub use jsa::{
    default_step_multiple, jsi_pulsed, schmidt_purity, JointSpectralAmplitude, JsaGrid, SchmidtResult,
    DEFAULT_JSA_HALF_SPAN, DEFAULT_JSA_POINTS,
};
pub use mi::{mi_sidebands, nonlinear_parameter, Sideband};

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::medium::NonlinearMedium;
use crate::propagation::{propagate, propagate_trace, CwCoupling, ModeTable, PulseSlotCache, PulsedCoupling};
use crate::pump::PumpSource;
use crate::units::{omega_from_wavelength_nm, wavelength_nm_from_omega};
use crate::waveguide::TaperProfile;

/// Runs `f` on a dedicated pool of `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// 10·log₁₀ of a photon-number ratio.
pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// `points` evenly spaced wavelengths from `start_nm` to `end_nm` inclusive.
pub fn linear_axis(start_nm: f64, end_nm: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(end_nm > start_nm) {
        return Err(Error::invalid(format!(
            "axis needs ≥ 2 points and end > start (got {points} points, {start_nm}..{end_nm} nm)"
        )));
    }
    let step = (end_nm - start_nm) / (points - 1) as f64;
    Ok((0..points).map(|k| start_nm + k as f64 * step).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    pub wavelength_nm: Vec<f64>,
    /// ⟨N⟩ per signal mode.
    pub photons: Vec<f64>,
    /// ⟨N⟩ of the unmodulated guide on the same grid, when requested.
    pub reference: Option<Vec<f64>>,
}

impl SpectrumResult {
    pub fn enhancement_db(&self) -> Option<Vec<f64>> {
        self.reference
            .as_ref()
            .map(|r| self.photons.iter().zip(r).map(|(n, n0)| to_db(n / n0)).collect())
    }

    /// `(wavelength_nm, ⟨N⟩)` of the largest value.
    pub fn peak(&self) -> Option<(f64, f64)> {
        let k = argmax(&self.photons)?;
        Some((self.wavelength_nm[k], self.photons[k]))
    }

    /// Local maxima `(wavelength_nm, ⟨N⟩)` above `min_fraction` of the global
    /// maximum, in axis order.
    pub fn local_maxima(&self, min_fraction: f64) -> Vec<(f64, f64)> {
        local_maxima(&self.photons, min_fraction)
            .into_iter()
            .map(|k| (self.wavelength_nm[k], self.photons[k]))
            .collect()
    }
}

fn argmax(v: &[f64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| x.is_finite())
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
}

/// Indices of interior local maxima above `min_fraction · max(v)`.
pub fn local_maxima(v: &[f64], min_fraction: f64) -> Vec<usize> {
    let Some(top) = argmax(v).map(|k| v[k]) else {
        return Vec::new();
    };
    (1..v.len().saturating_sub(1))
        .filter(|&k| v[k] > v[k - 1] && v[k] >= v[k + 1] && v[k] >= min_fraction * top)
        .collect()
}

/// Full width at half maximum of the lobe containing the global maximum,
/// with linear interpolation between samples. `None` if the lobe reaches an
/// edge of the axis.
pub fn fwhm(axis: &[f64], values: &[f64]) -> Option<f64> {
    let k = argmax(values)?;
    let half = values[k] / 2.0;
    let crossing = |a: usize, b: usize| {
        let t = (half - values[a]) / (values[b] - values[a]);
        axis[a] + t * (axis[b] - axis[a])
    };
    let left = (0..k).rev().find(|&j| values[j] < half).map(|j| crossing(j, j + 1))?;
    let right = (k + 1..values.len()).find(|&j| values[j] < half).map(|j| crossing(j - 1, j))?;
    Some((right - left).abs())
}

fn check_axis(axis_nm: &[f64], pump_nm: f64) -> Result<()> {
    if axis_nm.is_empty() {
        return Err(Error::invalid("empty wavelength axis"));
    }
    if axis_nm.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::invalid("wavelength axis values must be positive and finite"));
    }
    if axis_nm.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("wavelength axis must be strictly increasing"));
    }
    if let Some(x) = axis_nm.iter().find(|x| (*x - pump_nm).abs() <= 1e-9 * pump_nm) {
        return Err(Error::invalid(format!(
            "signal grid contains the pump wavelength {x} nm; the degenerate point is excluded"
        )));
    }
    Ok(())
}

fn cw_parts(pump: &PumpSource) -> Result<(f64, f64)> {
    match *pump {
        PumpSource::Cw { power_w, .. } => {
            pump.validate()?;
            Ok((pump.center_omega(), power_w))
        }
        PumpSource::Pulse { .. } => Err(Error::invalid("a CW pump is required here")),
    }
}

/// ⟨N⟩ for each signal wavelength; the idler is `ω_i = 2ω_p − ω_s`.
fn cw_photons(
    medium: &Arc<NonlinearMedium>,
    profile: &TaperProfile,
    pump: &PumpSource,
    signal_nm: &[f64],
) -> Result<Vec<f64>> {
    let (omega_p, _) = cw_parts(pump)?;
    let table = Arc::new(ModeTable::build(medium, omega_p, &profile.slot_geometries())?);
    signal_nm
        .par_iter()
        .map(|&nm| {
            let model = CwCoupling::new(medium.clone(), pump, omega_from_wavelength_nm(nm))?
                .with_pump_table(table.clone());
            Ok(propagate(profile, &model)?.photons())
        })
        .collect::<Vec<Result<f64>>>()
        .into_iter()
        .collect()
}

/// Signal spectrum under a CW pump, optionally with the unmodulated reference.
pub fn spectrum_cw(
    medium: &Arc<NonlinearMedium>,
    profile: &TaperProfile,
    pump: &PumpSource,
    signal_nm: &[f64],
    normalize: bool,
) -> Result<SpectrumResult> {
    check_axis(signal_nm, pump.wavelength_um() * 1e3)?;
    let photons = cw_photons(medium, profile, pump, signal_nm)?;
    let reference = if normalize {
        Some(cw_photons(medium, &profile.uniform(), pump, signal_nm)?)
    } else {
        None
    };
    Ok(SpectrumResult {
        wavelength_nm: signal_nm.to_vec(),
        photons,
        reference,
    })
}

/// ⟨N⟩ of the energy-matched pair `(ω_s, 2ω₀ − ω_s)` under a pulsed pump, for
/// each signal wavelength.
fn pulsed_diagonal(
    medium: &Arc<NonlinearMedium>,
    profile: &TaperProfile,
    pulse: &PumpSource,
    signal_nm: &[f64],
) -> Result<Vec<f64>> {
    let cache = Arc::new(PulseSlotCache::new(medium, pulse, &profile.slot_geometries())?);
    let w0 = cache.grid.center_omega;
    signal_nm
        .par_iter()
        .map(|&nm| {
            let ws = omega_from_wavelength_nm(nm);
            let model = PulsedCoupling::new(medium.clone(), cache.clone(), ws, 2.0 * w0 - ws)?;
            Ok(propagate(profile, &model)?.photons())
        })
        .collect::<Vec<Result<f64>>>()
        .into_iter()
        .collect()
}

/// Signal spectrum of the energy-matched pairs `ω_s + ω_i = 2ω₀` under a
/// pulsed pump (the anti-diagonal of the joint spectrum).
pub fn spectrum_pulsed(
    medium: &Arc<NonlinearMedium>,
    profile: &TaperProfile,
    pulse: &PumpSource,
    signal_nm: &[f64],
    normalize: bool,
) -> Result<SpectrumResult> {
    check_axis(signal_nm, pulse.wavelength_um() * 1e3)?;
    let photons = pulsed_diagonal(medium, profile, pulse, signal_nm)?;
    let reference = if normalize {
        Some(pulsed_diagonal(medium, &profile.uniform(), pulse, signal_nm)?)
    } else {
        None
    };
    Ok(SpectrumResult {
        wavelength_nm: signal_nm.to_vec(),
        photons,
        reference,
    })
}

/// Either spectrum, depending on the pump.
pub fn spectrum(
    medium: &Arc<NonlinearMedium>,
    profile: &TaperProfile,
    pump: &PumpSource,
    signal_nm: &[f64],
    normalize: bool,
) -> Result<SpectrumResult> {
    match pump {
        PumpSource::Cw { .. } => spectrum_cw(medium, profile, pump, signal_nm, normalize),
        PumpSource::Pulse { .. } => spectrum_pulsed(medium, profile, pump, signal_nm, normalize),
    }
}

/// ⟨N⟩ of a single signal mode paired with `2ω₀ − ω_s`, for either pump.
pub fn pair_photons(
    medium: &Arc<NonlinearMedium>,
    profile: &TaperProfile,
    pump: &PumpSource,
    signal_nm: f64,
) -> Result<f64> {
    check_axis(&[signal_nm], pump.wavelength_um() * 1e3)?;
    match pump {
        PumpSource::Cw { .. } => {
            let model = CwCoupling::new(medium.clone(), pump, omega_from_wavelength_nm(signal_nm))?;
            Ok(propagate(profile, &model)?.photons())
        }
        PumpSource::Pulse { .. } => Ok(pulsed_diagonal(medium, profile, pump, &[signal_nm])?[0]),
    }
}

/// Idler wavelength paired with `signal_nm` under a CW pump at `pump_nm`.
pub fn idler_wavelength_nm(pump_nm: f64, signal_nm: f64) -> f64 {
    wavelength_nm_from_omega(2.0 * omega_from_wavelength_nm(pump_nm) - omega_from_wavelength_nm(signal_nm))
}

/// ⟨N⟩(z) along the structure for one CW signal mode, sampled every
/// `every` elements; starts at `(0, 0)`.
pub fn growth_trace(
    medium: &Arc<NonlinearMedium>,
    profile: &TaperProfile,
    pump: &PumpSource,
    signal_nm: f64,
    every: usize,
) -> Result<Vec<(f64, f64)>> {
    let model = CwCoupling::new(medium.clone(), pump, omega_from_wavelength_nm(signal_nm))?;
    Ok(propagate_trace(profile, &model, every)?.1)
}

/// Number of local maxima of a growth trace inside each full tapering
/// period. The trace must be sampled at every element.
pub fn maxima_per_period(trace: &[(f64, f64)], profile: &TaperProfile) -> Vec<usize> {
    let steps = profile.steps_per_period;
    let n: Vec<f64> = trace.iter().map(|t| t.1).collect();
    let mut counts = vec![0; profile.periods];
    for k in 1..n.len().saturating_sub(1) {
        if n[k] > n[k - 1] && n[k] >= n[k + 1] {
            let period = (k - 1) / steps;
            if period < counts.len() {
                counts[period] += 1;
            }
        }
    }
    counts
}

/// Photon numbers over a (Δ, Λ_T) grid at fixed M and signal wavelength,
/// each normalised to the unmodulated guide of the same period.
#[derive(Clone, Debug, PartialEq)]
pub struct EnhancementMap {
    pub modulations: Vec<f64>,
    pub periods_m: Vec<f64>,
    /// `[modulation][period]`.
    pub photons: Vec<Vec<f64>>,
    /// Per period, Δ = 0.
    pub reference: Vec<f64>,
}

impl EnhancementMap {
    pub fn enhancement_db(&self) -> Vec<Vec<f64>> {
        self.photons
            .iter()
            .map(|row| row.iter().zip(&self.reference).map(|(n, n0)| to_db(n / n0)).collect())
            .collect()
    }

    /// `(Δ, Λ_T, dB)` of the strongest enhancement.
    pub fn best(&self) -> Option<(f64, f64, f64)> {
        let db = self.enhancement_db();
        let mut best: Option<(f64, f64, f64)> = None;
        for (a, row) in db.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                if v.is_finite() && best.is_none_or(|x| v > x.2) {
                    best = Some((self.modulations[a], self.periods_m[b], v));
                }
            }
        }
        best
    }

    /// `(Δ, Λ_T, ⟨N⟩)` of the largest photon number.
    pub fn brightest(&self) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for (a, row) in self.photons.iter().enumerate() {
            for (b, &n) in row.iter().enumerate() {
                if n.is_finite() && best.is_none_or(|x| n > x.2) {
                    best = Some((self.modulations[a], self.periods_m[b], n));
                }
            }
        }
        best
    }

    /// Enhancement (dB) at the period giving the most photons for modulation
    /// row `row`, with that period.
    pub fn enhancement_at_brightest(&self, row: usize) -> Option<(f64, f64)> {
        let r = self.photons.get(row)?;
        let b = argmax(r)?;
        Some((self.periods_m[b], to_db(r[b] / self.reference[b])))
    }
}

pub fn enhancement_map(
    medium: &Arc<NonlinearMedium>,
    template: &TaperProfile,
    pump: &PumpSource,
    modulations: &[f64],
    periods_m: &[f64],
    signal_nm: f64,
) -> Result<EnhancementMap> {
    check_axis(&[signal_nm], pump.wavelength_um() * 1e3)?;
    let omega_s = omega_from_wavelength_nm(signal_nm);
    let run = |delta: f64, period: f64| -> Result<f64> {
        let profile = TaperProfile {
            modulation: delta,
            period_m: period,
            ..*template
        };
        profile.validate()?;
        let model = CwCoupling::new(medium.clone(), pump, omega_s)?;
        Ok(propagate(&profile, &model)?.photons())
    };
    let reference = periods_m
        .par_iter()
        .map(|&p| run(0.0, p))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let cells: Vec<(f64, f64)> = modulations
        .iter()
        .flat_map(|&d| periods_m.iter().map(move |&p| (d, p)))
        .collect();
    let flat = cells
        .par_iter()
        .map(|&(d, p)| run(d, p))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let photons = flat.chunks(periods_m.len().max(1)).map(|c| c.to_vec()).collect();
    Ok(EnhancementMap {
        modulations: modulations.to_vec(),
        periods_m: periods_m.to_vec(),
        photons,
        reference,
    })
}

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::NonlinearMedium;
use crate::propagation::{propagate, ModeTable, PulseSlotCache, PulsedCoupling};
use crate::pump::{PulseGrid, PumpSource};
use crate::units::{omega_from_wavelength_nm, wavelength_nm_from_omega};
use crate::waveguide::TaperProfile;

/// Default points per JSA axis.
pub const DEFAULT_JSA_POINTS: usize = 101;
/// Default half-width of each JSA axis, in pump bandwidths (1/τ).
pub const DEFAULT_JSA_HALF_SPAN: f64 = 3.0;

/// Signal and idler frequency axes whose steps are whole multiples of the
/// pump-grid spacing and whose centres satisfy `ω_s0 + ω_i0 = 2ω₀`, so every
/// point pairs exactly with pump components.
#[derive(Clone, Debug, PartialEq)]
pub struct JsaGrid {
    /// Decreasing in ω, i.e. increasing in wavelength.
    pub signal_omegas: Vec<f64>,
    pub idler_omegas: Vec<f64>,
}

impl JsaGrid {
    /// `points` per axis, spaced by `step_multiple` pump spacings, centred on
    /// `signal_nm` and its CW idler partner.
    pub fn around(grid: &PulseGrid, signal_nm: f64, points: usize, step_multiple: usize) -> Result<Self> {
        if points == 0 || step_multiple == 0 {
            return Err(Error::invalid("JSA grid needs at least one point and a positive step"));
        }
        let ws0 = omega_from_wavelength_nm(signal_nm);
        let wi0 = 2.0 * grid.center_omega - ws0;
        if !(wi0 > 0.0) {
            return Err(Error::domain(format!("no idler partner for signal {signal_nm} nm")));
        }
        let step = step_multiple as f64 * grid.spacing;
        let half = (points / 2) as i64;
        let axis = |c: f64| -> Vec<f64> {
            (0..points as i64).map(|k| c + (half - k) as f64 * step).collect()
        };
        let (s, i) = (axis(ws0), axis(wi0));
        if s.iter().chain(&i).any(|w| !(*w > 0.0)) {
            return Err(Error::domain("JSA grid extends to non-positive frequencies"));
        }
        Ok(Self {
            signal_omegas: s,
            idler_omegas: i,
        })
    }

    /// Default resolution: about ±3 pump bandwidths over 101 points. For long
    /// pulses the phase-matching lobes can be wider than that; widen the
    /// window through `around` when they are clipped.
    pub fn default_for(grid: &PulseGrid, signal_nm: f64) -> Result<Self> {
        Self::around(grid, signal_nm, DEFAULT_JSA_POINTS, default_step_multiple(grid, DEFAULT_JSA_POINTS))
    }

    pub fn transposed(&self) -> Self {
        Self {
            signal_omegas: self.idler_omegas.clone(),
            idler_omegas: self.signal_omegas.clone(),
        }
    }
}

/// Step (in pump spacings) that makes `points` samples cover ±3/τ.
pub fn default_step_multiple(grid: &PulseGrid, points: usize) -> usize {
    let span = 2.0 * DEFAULT_JSA_HALF_SPAN / grid.tau_s;
    let step = span / (points.max(2) - 1) as f64;
    ((step / grid.spacing).round() as usize).max(1)
}

/// `J(s, i) = T_{s,i}(1,2)`, row-major with signal as the row index.
#[derive(Clone, Debug, PartialEq)]
pub struct JointSpectralAmplitude {
    pub signal_nm: Vec<f64>,
    pub idler_nm: Vec<f64>,
    pub values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct JsaFile {
    signal_nm: Vec<f64>,
    idler_nm: Vec<f64>,
    /// `[signal][idler] → [re, im]`.
    values: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<serde_json::Value>,
}

impl JointSpectralAmplitude {
    pub fn new(signal_nm: Vec<f64>, idler_nm: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != signal_nm.len() * idler_nm.len() || values.is_empty() {
            return Err(Error::invalid(format!(
                "JSA of {} values does not fit a {}×{} grid",
                values.len(),
                signal_nm.len(),
                idler_nm.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Numerical("JSA contains non-finite entries".into()));
        }
        Ok(Self {
            signal_nm,
            idler_nm,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.signal_nm.len()
    }

    pub fn cols(&self) -> usize {
        self.idler_nm.len()
    }

    pub fn get(&self, s: usize, i: usize) -> Complex64 {
        self.values[s * self.cols() + i]
    }

    /// Joint spectral intensity `|J|²`, row-major.
    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Total ⟨N⟩ summed over the grid.
    pub fn total_photons(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `(signal_nm, idler_nm)` of the brightest cell.
    pub fn peak(&self) -> (f64, f64) {
        let (k, _) = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("JSA is never empty");
        (self.signal_nm[k / self.cols()], self.idler_nm[k % self.cols()])
    }

    /// JSON with the complex matrix as `[re, im]` pairs; `meta` is embedded
    /// verbatim when given.
    pub fn to_json(&self, meta: Option<serde_json::Value>) -> Result<String> {
        let file = JsaFile {
            signal_nm: self.signal_nm.clone(),
            idler_nm: self.idler_nm.clone(),
            values: self
                .values
                .chunks(self.cols())
                .map(|row| row.iter().map(|v| [v.re, v.im]).collect())
                .collect(),
            meta,
        };
        serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: JsaFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("JSA file: {e}")))?;
        if file.values.len() != file.signal_nm.len()
            || file.values.iter().any(|r| r.len() != file.idler_nm.len())
        {
            return Err(Error::invalid("JSA matrix shape does not match its axes"));
        }
        let values = file
            .values
            .iter()
            .flatten()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        Self::new(file.signal_nm, file.idler_nm, values)
    }
}

/// Joint spectral amplitude under a pulsed pump.
pub fn jsi_pulsed(
    medium: &Arc<NonlinearMedium>,
    profile: &TaperProfile,
    pulse: &PumpSource,
    grid: &JsaGrid,
) -> Result<JointSpectralAmplitude> {
    let slots = profile.slot_geometries();
    let cache = Arc::new(PulseSlotCache::new(medium, pulse, &slots)?);
    let tables = |omegas: &[f64]| -> Result<Vec<Arc<ModeTable>>> {
        omegas
            .par_iter()
            .map(|&w| ModeTable::build(medium, w, &slots).map(Arc::new))
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    };
    let signal = tables(&grid.signal_omegas)?;
    let idler = tables(&grid.idler_omegas)?;
    let cols = idler.len();
    let values = (0..signal.len() * cols)
        .into_par_iter()
        .map(|k| {
            let (s, i) = (k / cols, k % cols);
            let model = PulsedCoupling::new(
                medium.clone(),
                cache.clone(),
                grid.signal_omegas[s],
                grid.idler_omegas[i],
            )?
            .with_tables(signal[s].clone(), idler[i].clone());
            Ok(propagate(profile, &model)?.matrix.get(0, 1))
        })
        .collect::<Vec<Result<Complex64>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    JointSpectralAmplitude::new(
        grid.signal_omegas.iter().map(|&w| wavelength_nm_from_omega(w)).collect(),
        grid.idler_omegas.iter().map(|&w| wavelength_nm_from_omega(w)).collect(),
        values,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtResult {
    /// Normalised λ_k, descending.
    pub coefficients: Vec<f64>,
    pub purity: f64,
    pub schmidt_number: f64,
}

/// Schmidt decomposition by SVD: `λ_k = σ_k² / Σσ²`, purity `Σλ_k²`.
pub fn schmidt_purity(jsa: &JointSpectralAmplitude) -> Result<SchmidtResult> {
    let m = DMatrix::from_row_slice(jsa.rows(), jsa.cols(), &jsa.values);
    let mut sigma: Vec<f64> = m.singular_values().iter().copied().collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = sigma.iter().map(|s| s * s).sum();
    if !(total > 0.0) {
        return Err(Error::domain("Schmidt decomposition of an all-zero JSA"));
    }
    let coefficients: Vec<f64> = sigma.iter().map(|s| s * s / total).collect();
    let purity: f64 = coefficients.iter().map(|l| l * l).sum();
    Ok(SchmidtResult {
        coefficients,
        purity,
        schmidt_number: 1.0 / purity,
    })
}

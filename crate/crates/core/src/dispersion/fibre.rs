//! Empirical effective-index model for index-guiding photonic-crystal fibres
//! with a hexagonal hole lattice.
//!
//! The normalised frequency `V` and transverse parameter `W` are fitted
//! functions of `λ/Λ` (Λ = pitch) and of the hole ratio `d/Λ`:
//!
//! ```text
//! V = A1 + A2 / (1 + A3 exp(A4 λ/Λ)),   A_i = a_i0 + Σ_k a_ik (d/Λ)^b_ik
//! W = B1 + B2 / (1 + B3 exp(B4 λ/Λ)),   B_i = c_i0 + Σ_k c_ik (d/Λ)^d_ik
//! ```
//!
//! With `a_eff = Λ/√3`, the fundamental space-filling mode index follows from
//! `V = k a_eff √(n_co² − n_fsm²)` and the guided mode from
//! `W = k a_eff √(n_eff² − n_fsm²)`. The core index `n_co` comes from a bulk
//! Sellmeier model. The fit coefficients are data, loaded from JSON.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sellmeier::SellmeierModel;
use crate::error::{Error, Result};

/// Fit coefficients for one of the two parameters (V or W).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterFit {
    /// Rows i = 1..4: `[x_i0, x_i1, x_i2, x_i3]`.
    pub coefficients: [[f64; 4]; 4],
    /// Rows i = 1..4: exponents `[e_i1, e_i2, e_i3]` applied to `d/Λ`.
    pub exponents: [[f64; 3]; 4],
}

impl ParameterFit {
    fn evaluate(&self, lambda_over_pitch: f64, hole_ratio: f64) -> f64 {
        let mut c = [0.0; 4];
        for (ci, (row, exps)) in c.iter_mut().zip(self.coefficients.iter().zip(&self.exponents)) {
            *ci = row[0]
                + row[1] * hole_ratio.powf(exps[0])
                + row[2] * hole_ratio.powf(exps[1])
                + row[3] * hole_ratio.powf(exps[2]);
        }
        c[0] + c[1] / (1.0 + c[2] * (c[3] * lambda_over_pitch).exp())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibreCoefficients {
    pub v: ParameterFit,
    pub w: ParameterFit,
    /// Validity window of the fit in `λ/Λ`.
    pub lambda_over_pitch_range: [f64; 2],
    /// Validity window of the fit in `d/Λ`.
    pub hole_ratio_range: [f64; 2],
}

impl FibreCoefficients {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("fibre coefficients: {e}")))
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    /// The published hexagonal-lattice fit bundled with the crate.
    pub fn bundled() -> Self {
        Self::from_json_str(include_str!("../../data/pcf_empirical_coefficients.json"))
            .expect("bundled coefficient file parses")
    }
}

/// Microstructured fibre whose pitch is the geometry parameter; the hole
/// diameter scales with the pitch at a fixed ratio `d/Λ`.
#[derive(Clone, Debug)]
pub struct EmpiricalFibre {
    coefficients: FibreCoefficients,
    material: SellmeierModel,
    hole_ratio: f64,
    pitch_range_um: [f64; 2],
}

/// Guided-mode quantities at one (wavelength, pitch) point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FibreMode {
    pub v: f64,
    pub w: f64,
    pub n_core: f64,
    pub n_fsm: f64,
    pub n_eff: f64,
    /// Effective core radius `Λ/√3` (µm).
    pub core_radius_um: f64,
}

impl EmpiricalFibre {
    pub fn new(
        coefficients: FibreCoefficients,
        material: SellmeierModel,
        hole_ratio: f64,
        pitch_range_um: [f64; 2],
    ) -> Result<Self> {
        let [h0, h1] = coefficients.hole_ratio_range;
        if !(hole_ratio >= h0 && hole_ratio <= h1) {
            return Err(Error::domain(format!(
                "hole ratio d/Λ = {hole_ratio} outside fitted range [{h0}, {h1}]"
            )));
        }
        let [p0, p1] = pitch_range_um;
        if !(p0 > 0.0 && p1 > p0) {
            return Err(Error::invalid(format!("invalid pitch range [{p0}, {p1}] µm")));
        }
        Ok(Self {
            coefficients,
            material,
            hole_ratio,
            pitch_range_um,
        })
    }

    pub fn hole_ratio(&self) -> f64 {
        self.hole_ratio
    }

    pub fn pitch_range_um(&self) -> [f64; 2] {
        self.pitch_range_um
    }

    pub fn material(&self) -> &SellmeierModel {
        &self.material
    }

    pub fn mode(&self, wavelength_um: f64, pitch_um: f64) -> Result<FibreMode> {
        let [p0, p1] = self.pitch_range_um;
        if !(pitch_um >= p0 && pitch_um <= p1) {
            return Err(Error::domain(format!(
                "pitch {pitch_um} µm outside model range [{p0}, {p1}] µm"
            )));
        }
        let x = wavelength_um / pitch_um;
        let [x0, x1] = self.coefficients.lambda_over_pitch_range;
        if !(x >= x0 && x <= x1) {
            return Err(Error::domain(format!(
                "λ/Λ = {x} outside fitted range [{x0}, {x1}]"
            )));
        }
        let n_core = self.material.material_index(wavelength_um)?;
        let v = self.coefficients.v.evaluate(x, self.hole_ratio);
        let w = self.coefficients.w.evaluate(x, self.hole_ratio);
        let core_radius_um = pitch_um / 3f64.sqrt();
        let scale = wavelength_um / (2.0 * std::f64::consts::PI * core_radius_um);
        let n_fsm2 = n_core * n_core - (v * scale).powi(2);
        let n_eff2 = n_fsm2 + (w * scale).powi(2);
        if !(n_fsm2 > 0.0 && n_eff2 >= 1.0 && v > w && w > 0.0) {
            return Err(Error::domain(format!(
                "fibre fit gives unphysical mode at λ = {wavelength_um} µm, Λ = {pitch_um} µm"
            )));
        }
        Ok(FibreMode {
            v,
            w,
            n_core,
            n_fsm: n_fsm2.sqrt(),
            n_eff: n_eff2.sqrt(),
            core_radius_um,
        })
    }

    pub fn effective_index(&self, wavelength_um: f64, pitch_um: f64) -> Result<f64> {
        Ok(self.mode(wavelength_um, pitch_um)?.n_eff)
    }

    /// Gaussian field radius (µm) from the Marcuse fit
    /// `w/a = 0.65 + 1.619 V^-3/2 + 2.879 V^-6` with `a = Λ/√3`.
    pub fn mode_radius_um(&self, wavelength_um: f64, pitch_um: f64) -> Result<f64> {
        let m = self.mode(wavelength_um, pitch_um)?;
        Ok(m.core_radius_um * (0.65 + 1.619 * m.v.powf(-1.5) + 2.879 * m.v.powi(-6)))
    }
}

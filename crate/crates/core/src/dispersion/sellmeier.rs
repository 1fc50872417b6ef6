//! Bulk material index from a Sellmeier expansion.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n² = 1 + Σ B_k λ² / (λ² − C_k)` with λ in micrometres.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SellmeierModel {
    pub material: String,
    #[serde(rename = "B")]
    b: Vec<f64>,
    #[serde(rename = "C_um2")]
    c_um2: Vec<f64>,
    range_um: [f64; 2],
}

impl SellmeierModel {
    pub fn new(
        material: impl Into<String>,
        b: Vec<f64>,
        c_um2: Vec<f64>,
        range_um: [f64; 2],
    ) -> Result<Self> {
        let model = Self {
            material: material.into(),
            b,
            c_um2,
            range_um,
        };
        model.validate()?;
        Ok(model)
    }

    /// Fused silica, three-term fit valid from 0.21 to 3.71 µm.
    pub fn fused_silica() -> Self {
        Self {
            material: "fused silica".into(),
            b: vec![0.696_166_3, 0.407_942_6, 0.897_479_4],
            c_um2: vec![
                0.068_404_3 * 0.068_404_3,
                0.116_241_4 * 0.116_241_4,
                9.896_161 * 9.896_161,
            ],
            range_um: [0.21, 3.71],
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("sellmeier coefficients: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.b.len() != self.c_um2.len() {
            return Err(Error::invalid(format!(
                "sellmeier: {} B terms but {} C terms",
                self.b.len(),
                self.c_um2.len()
            )));
        }
        if self.b.iter().any(|b| !b.is_finite()) {
            return Err(Error::invalid("sellmeier: B coefficients must be finite"));
        }
        if self.c_um2.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::invalid("sellmeier: every C coefficient must be positive"));
        }
        let [lo, hi] = self.range_um;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::invalid(format!(
                "sellmeier: invalid wavelength range [{lo}, {hi}] µm"
            )));
        }
        Ok(())
    }

    pub fn range_um(&self) -> [f64; 2] {
        self.range_um
    }

    pub fn coefficients(&self) -> (&[f64], &[f64]) {
        (&self.b, &self.c_um2)
    }

    /// Refractive index at `wavelength_um`.
    pub fn material_index(&self, wavelength_um: f64) -> Result<f64> {
        let [lo, hi] = self.range_um;
        if !(wavelength_um >= lo && wavelength_um <= hi) {
            return Err(Error::domain(format!(
                "{}: wavelength {wavelength_um} µm outside [{lo}, {hi}] µm",
                self.material
            )));
        }
        let l2 = wavelength_um * wavelength_um;
        let mut sum = 0.0;
        for (&b, &c) in self.b.iter().zip(&self.c_um2) {
            let denom = l2 - c;
            if denom.abs() <= 1e-12 * c.max(l2) {
                return Err(Error::domain(format!(
                    "{}: wavelength {wavelength_um} µm sits on a Sellmeier pole",
                    self.material
                )));
            }
            sum += b * l2 / denom;
        }
        let n2 = 1.0 + sum;
        if !(n2 > 0.0) {
            return Err(Error::domain(format!(
                "{}: n² = {n2} at {wavelength_um} µm",
                self.material
            )));
        }
        Ok(n2.sqrt())
    }
}

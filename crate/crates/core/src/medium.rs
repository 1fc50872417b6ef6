//! A waveguide material description: dispersion, mode sizes and the
//! nonlinear index, bundled for the propagation engine.

use std::sync::Arc;

use crate::dispersion::{EffectiveIndex, EmpiricalFibre};
use crate::error::{Error, Result};
use crate::modes::{mode_area, GaussianMode, ModeModel, ModeSize};
use crate::units::{wavelength_um_from_omega, SPEED_OF_LIGHT};

#[derive(Clone)]
pub struct NonlinearMedium {
    pub index: Arc<dyn EffectiveIndex>,
    pub modes: Arc<dyn ModeSize>,
    /// Nonlinear refractive index n₂ (m²/W).
    pub n2: f64,
}

impl std::fmt::Debug for NonlinearMedium {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NonlinearMedium").field("n2", &self.n2).finish_non_exhaustive()
    }
}

/// Everything the coupling formulas need about one frequency at one geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeData {
    pub omega: f64,
    pub mode: GaussianMode,
    /// Propagation constant `n ω / c` (1/m).
    pub k: f64,
    /// Mode area (µm²).
    pub area_um2: f64,
}

impl NonlinearMedium {
    pub fn new(
        index: Arc<dyn EffectiveIndex>,
        modes: Arc<dyn ModeSize>,
        n2: f64,
    ) -> Result<Self> {
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::invalid(format!("n₂ must be positive, got {n2} m²/W")));
        }
        Ok(Self { index, modes, n2 })
    }

    /// Microstructured fibre: index and Gaussian radius both from the
    /// empirical fibre model.
    pub fn fibre(fibre: EmpiricalFibre, n2: f64) -> Result<Self> {
        let fibre = Arc::new(fibre);
        Self::new(fibre.clone(), Arc::new(ModeModel::Fibre(fibre)), n2)
    }

    /// Same medium with a different n₂; zero is allowed here for linear checks.
    pub fn with_n2(&self, n2: f64) -> Self {
        Self {
            n2,
            ..self.clone()
        }
    }

    pub fn mode_data(&self, omega: f64, geometry_um: f64) -> Result<ModeData> {
        let wavelength_um = wavelength_um_from_omega(omega);
        let n = self.index.effective_index(wavelength_um, geometry_um)?;
        let w = self.modes.mode_radius_um(wavelength_um, geometry_um)?;
        let mode = GaussianMode::new(w, wavelength_um, n)?;
        Ok(ModeData {
            omega,
            mode,
            k: n * omega / SPEED_OF_LIGHT,
            area_um2: mode_area(&mode),
        })
    }
}

//! Material and guided-mode dispersion.
//!
//! Every provider maps (wavelength in µm, local geometry parameter in µm) to an
//! effective index. Derived quantities (group index, β₂) are finite
//! differences on top of that single primitive, so any provider gets them.

mod fibre;
mod sellmeier;
mod table;

pub use fibre::{EmpiricalFibre, FibreCoefficients, FibreMode, ParameterFit};
pub use sellmeier::SellmeierModel;
pub use table::{DispersionTable, Interpolation};

use crate::error::{Error, Result};
use crate::units::{wavelength_um_from_omega, SPEED_OF_LIGHT};

/// Wavelength step for the group-index stencil (µm), i.e. 0.1 nm.
pub const GROUP_INDEX_STEP_UM: f64 = 1e-4;
/// Relative frequency step `δω/ω` for the β₂ stencil.
pub const BETA2_RELATIVE_STEP: f64 = 1e-4;

/// Anything that yields an effective index as a function of wavelength and
/// local geometry. Implementations must be pure and thread-safe.
pub trait EffectiveIndex: Send + Sync {
    fn effective_index(&self, wavelength_um: f64, geometry_um: f64) -> Result<f64>;
}

/// The dispersion back-ends shipped with the crate.
#[derive(Clone, Debug)]
pub enum DispersionProvider {
    /// Microstructured fibre; geometry is the pitch.
    Fibre(EmpiricalFibre),
    /// Tabulated data; geometry is whatever the table's first axis encodes.
    Table(DispersionTable),
    /// Bulk material; geometry is ignored.
    Bulk(SellmeierModel),
}

impl EffectiveIndex for DispersionProvider {
    fn effective_index(&self, wavelength_um: f64, geometry_um: f64) -> Result<f64> {
        let n = match self {
            DispersionProvider::Fibre(f) => f.effective_index(wavelength_um, geometry_um)?,
            DispersionProvider::Table(t) => t.n_eff(wavelength_um, geometry_um)?,
            DispersionProvider::Bulk(s) => s.material_index(wavelength_um)?,
        };
        if n < 1.0 {
            return Err(Error::domain(format!(
                "effective index {n} < 1 at λ = {wavelength_um} µm"
            )));
        }
        Ok(n)
    }
}

impl EffectiveIndex for SellmeierModel {
    fn effective_index(&self, wavelength_um: f64, _geometry_um: f64) -> Result<f64> {
        self.material_index(wavelength_um)
    }
}

impl EffectiveIndex for DispersionTable {
    fn effective_index(&self, wavelength_um: f64, geometry_um: f64) -> Result<f64> {
        self.n_eff(wavelength_um, geometry_um)
    }
}

impl EffectiveIndex for EmpiricalFibre {
    fn effective_index(&self, wavelength_um: f64, geometry_um: f64) -> Result<f64> {
        EmpiricalFibre::effective_index(self, wavelength_um, geometry_um)
    }
}

pub fn material_index(model: &SellmeierModel, wavelength_um: f64) -> Result<f64> {
    model.material_index(wavelength_um)
}

pub fn effective_index(
    provider: &(impl EffectiveIndex + ?Sized),
    wavelength_um: f64,
    geometry_um: f64,
) -> Result<f64> {
    provider.effective_index(wavelength_um, geometry_um)
}

/// Propagation constant `k = n_eff ω / c` (1/m).
pub fn propagation_constant(
    provider: &(impl EffectiveIndex + ?Sized),
    omega: f64,
    geometry_um: f64,
) -> Result<f64> {
    let n = provider.effective_index(wavelength_um_from_omega(omega), geometry_um)?;
    Ok(n * omega / SPEED_OF_LIGHT)
}

fn stencil_error(what: &str, wavelength_um: f64, e: Error) -> Error {
    match e {
        Error::Domain(msg) => Error::Domain(format!(
            "{what} stencil at λ = {wavelength_um} µm leaves the provider domain ({msg})"
        )),
        other => other,
    }
}

/// Group index `n_g = n − λ dn/dλ` with the default 0.1 nm central difference.
pub fn group_index(
    provider: &(impl EffectiveIndex + ?Sized),
    wavelength_um: f64,
    geometry_um: f64,
) -> Result<f64> {
    group_index_with_step(provider, wavelength_um, geometry_um, GROUP_INDEX_STEP_UM)
}

pub fn group_index_with_step(
    provider: &(impl EffectiveIndex + ?Sized),
    wavelength_um: f64,
    geometry_um: f64,
    step_um: f64,
) -> Result<f64> {
    let at = |l: f64| {
        provider
            .effective_index(l, geometry_um)
            .map_err(|e| stencil_error("group-index", wavelength_um, e))
    };
    // Two steps of margin, so a query right at the edge is rejected.
    at(wavelength_um - 2.0 * step_um)?;
    at(wavelength_um + 2.0 * step_um)?;
    let n = at(wavelength_um)?;
    let slope = (at(wavelength_um + step_um)? - at(wavelength_um - step_um)?) / (2.0 * step_um);
    Ok(n - wavelength_um * slope)
}

/// Group-velocity dispersion `β₂ = d²k/dω²` in s²/m, five-point stencil in ω
/// with `δω/ω = 1e-4`.
pub fn beta2(
    provider: &(impl EffectiveIndex + ?Sized),
    wavelength_um: f64,
    geometry_um: f64,
) -> Result<f64> {
    beta2_with_step(provider, wavelength_um, geometry_um, BETA2_RELATIVE_STEP)
}

pub fn beta2_with_step(
    provider: &(impl EffectiveIndex + ?Sized),
    wavelength_um: f64,
    geometry_um: f64,
    relative_step: f64,
) -> Result<f64> {
    let omega = crate::units::omega_from_wavelength_um(wavelength_um);
    let h = omega * relative_step;
    let k = |w: f64| {
        propagation_constant(provider, w, geometry_um)
            .map_err(|e| stencil_error("β₂", wavelength_um, e))
    };
    let (km2, km1, k0, kp1, kp2) = (
        k(omega - 2.0 * h)?,
        k(omega - h)?,
        k(omega)?,
        k(omega + h)?,
        k(omega + 2.0 * h)?,
    );
    Ok((-kp2 + 16.0 * kp1 - 30.0 * k0 + 16.0 * km1 - km2) / (12.0 * h * h))
}

/// Three-point variant used to check the stencil's convergence order.
pub fn beta2_three_point(
    provider: &(impl EffectiveIndex + ?Sized),
    wavelength_um: f64,
    geometry_um: f64,
    relative_step: f64,
) -> Result<f64> {
    let omega = crate::units::omega_from_wavelength_um(wavelength_um);
    let h = omega * relative_step;
    let k = |w: f64| propagation_constant(provider, w, geometry_um);
    Ok((k(omega + h)? - 2.0 * k(omega)? + k(omega - h)?) / (h * h))
}

//! Physical constants and the handful of unit conversions used throughout.
//!
//! Internally frequencies are angular (rad/s), lengths along the waveguide are
//! metres, and wavelengths passed to dispersion models are micrometres.

use std::f64::consts::PI;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn omega_from_wavelength_um(wavelength_um: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / (wavelength_um * 1e-6)
}

pub fn wavelength_um_from_omega(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / omega * 1e6
}

pub fn omega_from_wavelength_nm(wavelength_nm: f64) -> f64 {
    omega_from_wavelength_um(wavelength_nm * 1e-3)
}

pub fn wavelength_nm_from_omega(omega: f64) -> f64 {
    wavelength_um_from_omega(omega) * 1e3
}

/// Square micrometres to square metres.
pub const UM2_TO_M2: f64 = 1e-12;

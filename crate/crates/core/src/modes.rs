//! Gaussian transverse-mode approximation: mode areas and the overlap
//! integrals entering the nonlinear coefficients.
//!
//! Fields are `F(x, y) = a · exp(−(x² + y²)/w²)` with peak amplitude `a`
//! (unity unless rescaled). All integrals are closed forms; lengths in µm,
//! areas in µm².

use std::f64::consts::PI;
use std::sync::Arc;

use crate::dispersion::{DispersionTable, EmpiricalFibre};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianMode {
    pub radius_um: f64,
    pub wavelength_um: f64,
    pub index: f64,
    pub amplitude: f64,
}

impl GaussianMode {
    pub fn new(radius_um: f64, wavelength_um: f64, index: f64) -> Result<Self> {
        if !(radius_um > 0.0 && radius_um.is_finite()) {
            return Err(Error::invalid(format!("mode radius must be positive, got {radius_um} µm")));
        }
        if !(index >= 1.0) {
            return Err(Error::invalid(format!("mode index must be ≥ 1, got {index}")));
        }
        Ok(Self {
            radius_um,
            wavelength_um,
            index,
            amplitude: 1.0,
        })
    }

    /// Same mode with the field multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            amplitude: self.amplitude * factor,
            ..self
        }
    }

    pub fn field(&self, x_um: f64, y_um: f64) -> f64 {
        let w2 = self.radius_um * self.radius_um;
        self.amplitude * (-(x_um * x_um + y_um * y_um) / w2).exp()
    }

    fn inv_w2(&self) -> f64 {
        1.0 / (self.radius_um * self.radius_um)
    }
}

/// `S = ∬|F|² = a² π w² / 2`.
pub fn mode_area(mode: &GaussianMode) -> f64 {
    mode.amplitude * mode.amplitude * PI * mode.radius_um * mode.radius_um / 2.0
}

/// `∬ F_p1 F_p2 F_s F_i` for real Gaussians. Symmetric in (p1, p2) and in (s, i).
pub fn overlap_fwm(
    p1: &GaussianMode,
    p2: &GaussianMode,
    s: &GaussianMode,
    i: &GaussianMode,
) -> f64 {
    let amp = (p1.amplitude * p2.amplitude) * (s.amplitude * i.amplitude);
    amp * PI / ((p1.inv_w2() + p2.inv_w2()) + (s.inv_w2() + i.inv_w2()))
}

/// `∬ |F_p|² |F_q|²`; with `p == q` this is the self-overlap `∬|F_p|⁴`.
pub fn overlap_xpm(p: &GaussianMode, q: &GaussianMode) -> f64 {
    let amp = (p.amplitude * p.amplitude) * (q.amplitude * q.amplitude);
    amp * PI / (2.0 * p.inv_w2() + 2.0 * q.inv_w2())
}

pub fn self_overlap(p: &GaussianMode) -> f64 {
    overlap_xpm(p, p)
}

/// Gaussian field radius as a function of wavelength and local geometry.
pub trait ModeSize: Send + Sync {
    fn mode_radius_um(&self, wavelength_um: f64, geometry_um: f64) -> Result<f64>;
}

#[derive(Clone, Debug)]
pub enum ModeModel {
    /// Same radius everywhere.
    Constant(f64),
    /// Radius from the table's area column, `w = √(2S/π)`.
    TableArea(Arc<DispersionTable>),
    /// Marcuse-type fit on the fibre's V parameter.
    Fibre(Arc<EmpiricalFibre>),
}

impl ModeSize for ModeModel {
    fn mode_radius_um(&self, wavelength_um: f64, geometry_um: f64) -> Result<f64> {
        match self {
            ModeModel::Constant(w) => Ok(*w),
            ModeModel::TableArea(t) => {
                let s = t.area(wavelength_um, geometry_um)?;
                Ok((2.0 * s / PI).sqrt())
            }
            ModeModel::Fibre(f) => f.mode_radius_um(wavelength_um, geometry_um),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mode(w: f64) -> GaussianMode {
        GaussianMode::new(w, 0.8, 1.45).unwrap()
    }

    #[test]
    fn areas() {
        assert!((mode_area(&mode(1.0)) - PI / 2.0).abs() < 1e-15);
        assert!((mode_area(&mode(2.0)) - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn fwm_closed_forms() {
        let w = 1.7;
        let m = mode(w);
        assert!((overlap_fwm(&m, &m, &m, &m) - PI * w * w / 4.0).abs() < 1e-14);
        let (a, b) = (mode(1.0), mode(2.0));
        assert!((overlap_fwm(&a, &a, &b, &b) - PI / 2.5).abs() < 1e-15);
    }

    #[test]
    fn xpm_closed_forms() {
        let w = 1.3;
        assert!((overlap_xpm(&mode(w), &mode(w)) - PI * w * w / 4.0).abs() < 1e-14);
        assert!((self_overlap(&mode(1.0)) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_modes() {
        assert!(GaussianMode::new(0.0, 0.8, 1.45).is_err());
        assert!(GaussianMode::new(1.0, 0.8, 0.9).is_err());
    }

    proptest! {
        #[test]
        fn fwm_overlap_obeys_cauchy_schwarz(
            w1 in 0.3f64..5.0, w2 in 0.3f64..5.0, ws in 0.3f64..5.0, wi in 0.3f64..5.0
        ) {
            let (p1, p2, s, i) = (mode(w1), mode(w2), mode(ws), mode(wi));
            let o = overlap_fwm(&p1, &p2, &s, &i);
            prop_assert!(o * o <= overlap_xpm(&p1, &p2) * overlap_xpm(&s, &i) * (1.0 + 1e-12));
        }

        #[test]
        fn overlaps_scale_as_area(
            w1 in 0.3f64..5.0, w2 in 0.3f64..5.0, ws in 0.3f64..5.0, wi in 0.3f64..5.0,
            k in 0.1f64..10.0
        ) {
            let o = overlap_fwm(&mode(w1), &mode(w2), &mode(ws), &mode(wi));
            let ok = overlap_fwm(&mode(k * w1), &mode(k * w2), &mode(k * ws), &mode(k * wi));
            prop_assert!((ok / (k * k * o) - 1.0).abs() < 1e-12);
            let x = overlap_xpm(&mode(w1), &mode(ws));
            let xk = overlap_xpm(&mode(k * w1), &mode(k * ws));
            prop_assert!((xk / (k * k * x) - 1.0).abs() < 1e-12);
        }
    }
}

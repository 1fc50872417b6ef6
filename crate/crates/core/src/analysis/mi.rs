use serde::Serialize;

use crate::error::{Error, Result};
use crate::medium::NonlinearMedium;
use crate::propagation::cw_coupling_from_modes;
use crate::units::{omega_from_wavelength_nm, wavelength_nm_from_omega};

/// One resonance order of `β₂Ω² + 2γP = 2πl/Λ_T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sideband {
    pub order: i32,
    /// Ω (rad/s); `None` when the order has no real solution.
    pub shift: Option<f64>,
    /// Anti-Stokes (blue) sideband.
    pub signal_nm: Option<f64>,
    /// Stokes (red) sideband.
    pub idler_nm: Option<f64>,
}

/// Sideband shifts for each requested order. `beta2` in s²/m, `gamma` in
/// 1/(W·m).
pub fn mi_sidebands(
    beta2: f64,
    gamma: f64,
    power_w: f64,
    period_m: f64,
    pump_nm: f64,
    orders: &[i32],
) -> Result<Vec<Sideband>> {
    if !(beta2 > 0.0) {
        return Err(Error::domain(format!("sidebands need normal dispersion, got β₂ = {beta2:e} s²/m")));
    }
    if !(period_m > 0.0) {
        return Err(Error::invalid(format!("tapering period must be positive, got {period_m} m")));
    }
    let omega_p = omega_from_wavelength_nm(pump_nm);
    Ok(orders
        .iter()
        .map(|&l| {
            let radicand = (2.0 * std::f64::consts::PI * l as f64 / period_m - 2.0 * gamma * power_w) / beta2;
            let shift = (radicand >= 0.0).then(|| radicand.sqrt());
            Sideband {
                order: l,
                shift,
                signal_nm: shift.map(|o| wavelength_nm_from_omega(omega_p + o)),
                idler_nm: shift.filter(|o| *o < omega_p).map(|o| wavelength_nm_from_omega(omega_p - o)),
            }
        })
        .collect())
}

/// Degenerate nonlinear parameter `γ/P` (1/(W·m)) of the pump mode at one
/// geometry.
pub fn nonlinear_parameter(medium: &NonlinearMedium, pump_nm: f64, geometry_um: f64) -> Result<f64> {
    let p = medium.mode_data(omega_from_wavelength_nm(pump_nm), geometry_um)?;
    Ok(cw_coupling_from_modes(&p, &p, &p, 1.0, medium.n2).gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_dispersion_order_one() {
        let s = mi_sidebands(5e-26, 0.0, 0.0, 0.045, 780.0, &[1]).unwrap();
        let omega = s[0].shift.unwrap();
        let expected = (2.0 * std::f64::consts::PI / (0.045 * 5e-26)).sqrt();
        assert!((omega / expected - 1.0).abs() < 1e-14);
        assert!((omega - 5.28e13).abs() < 0.01e13);
        assert!(s[0].signal_nm.unwrap() < 780.0 && s[0].idler_nm.unwrap() > 780.0);
    }

    #[test]
    fn order_zero_is_not_resonant() {
        let s = mi_sidebands(5e-26, 0.1, 1.0, 0.045, 780.0, &[0]).unwrap();
        assert_eq!(s[0].shift, None);
        assert!(mi_sidebands(-1e-26, 0.0, 1.0, 0.045, 780.0, &[1]).is_err());
    }

    #[test]
    fn shifts_increase_with_order() {
        let s = mi_sidebands(1.3e-26, 0.05, 1.0, 0.0455, 780.0, &[1, 2, 3, 4]).unwrap();
        let shifts: Vec<f64> = s.iter().map(|x| x.shift.unwrap()).collect();
        assert!(shifts.windows(2).all(|w| w[1] > w[0]));
    }
}

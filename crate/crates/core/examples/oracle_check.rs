//! Transfer-matrix engine against the RK4 oracle on the tapered fibre, and
//! the engine's convergence as the element count grows.
//!
//! cargo run --release --example oracle_check

use std::sync::Arc;

use sfwm::dispersion::{EmpiricalFibre, FibreCoefficients, SellmeierModel};
use sfwm::medium::NonlinearMedium;
use sfwm::propagation::{ode_oracle, propagate, CwCoupling, OracleOptions};
use sfwm::pump::PumpSource;
use sfwm::units::omega_from_wavelength_nm;
use sfwm::waveguide::TaperProfile;

fn main() -> sfwm::Result<()> {
    let fibre = EmpiricalFibre::new(FibreCoefficients::bundled(), SellmeierModel::fused_silica(), 0.5, [0.5, 1.5])?;
    let medium = Arc::new(NonlinearMedium::fibre(fibre, 2.25e-20)?);
    let pump = PumpSource::cw(0.78, 1.0)?;
    let profile = TaperProfile::new(1.0, 0.1, 0.04548, 50, 200)?;
    for nm in [745.0, 750.0, 755.0] {
        let model = CwCoupling::new(medium.clone(), &pump, omega_from_wavelength_nm(nm))?;
        let engine = propagate(&profile, &model)?;
        let oracle = ode_oracle(&profile, &model, OracleOptions::default())?;
        println!(
            "{nm} nm: engine {:.6e}  oracle {:.6e} (±{:.1e})  relative gap {:.2e}",
            engine.photons(),
            oracle.photons(),
            oracle.error_estimate,
            (engine.photons() / oracle.photons() - 1.0).abs()
        );
    }
    let model = CwCoupling::new(medium.clone(), &pump, omega_from_wavelength_nm(750.0))?;
    let reference = ode_oracle(&profile, &model, OracleOptions::default())?.photons();
    for steps in [25, 50, 100, 200, 400] {
        let p = TaperProfile { steps_per_period: steps, ..profile };
        let n = propagate(&p, &model)?.photons();
        println!("steps/period {steps:4}: relative error {:.3e}", (n / reference - 1.0).abs());
    }
    Ok(())
}

//! Joint spectrum and heralded purity under 1 nJ Gaussian pulses of two
//! durations (4 ps and 1 ps intensity FWHM).
//!
//! The JSA window spans about ±7.5/τ so that, for the long pulse, the
//! phase-matching side lobes are not clipped.
//!
//! cargo run --release --example pulsed_jsi_purity

use std::sync::Arc;

use sfwm::analysis::{jsi_pulsed, schmidt_purity, JsaGrid};
use sfwm::dispersion::{EmpiricalFibre, FibreCoefficients, SellmeierModel};
use sfwm::medium::NonlinearMedium;
use sfwm::output::{jsi_csv, write_atomic};
use sfwm::pump::{PulseGrid, PumpSource};
use sfwm::waveguide::TaperProfile;

fn main() -> sfwm::Result<()> {
    let fibre = EmpiricalFibre::new(FibreCoefficients::bundled(), SellmeierModel::fused_silica(), 0.5, [0.5, 1.5])?;
    let medium = Arc::new(NonlinearMedium::fibre(fibre, 2.25e-20)?);
    let profile = TaperProfile::new(1.0, 0.1, 0.04548, 50, 200)?;
    for tau_ps in [2.47, 0.6] {
        let pulse = PumpSource::pulse_with_grid(0.78, 1e-9, tau_ps * 1e-12, 129, 8.0)?;
        let axes = JsaGrid::around(&PulseGrid::new(&pulse)?, 750.0, 121, 2)?;
        let jsa = jsi_pulsed(&medium, &profile, &pulse, &axes)?;
        let r = schmidt_purity(&jsa)?;
        let (s, i) = jsa.peak();
        println!(
            "τ = {tau_ps} ps: purity {:.4}, Schmidt number {:.3}, peak at ({s:.2}, {i:.2}) nm, Σ|J|² = {:.3e}",
            r.purity,
            r.schmidt_number,
            jsa.total_photons()
        );
        println!("  leading Schmidt weights {:?}", &r.coefficients[..4.min(r.coefficients.len())]);
        let out = std::env::temp_dir().join(format!("sfwm-jsi-{tau_ps}ps.csv"));
        write_atomic(&out, &jsi_csv(&jsa, "example")?)?;
        println!("  wrote {}", out.display());
    }
    Ok(())
}

//! ⟨N⟩ along the fibre at the first- and second-order tapering periods:
//! one growth step per cycle at the first order, two at the second.
//!
//! cargo run --release --example growth_trace

use std::sync::Arc;

use sfwm::analysis::{growth_trace, maxima_per_period};
use sfwm::dispersion::{EmpiricalFibre, FibreCoefficients, SellmeierModel};
use sfwm::medium::NonlinearMedium;
use sfwm::pump::PumpSource;
use sfwm::waveguide::TaperProfile;

fn main() -> sfwm::Result<()> {
    let fibre = EmpiricalFibre::new(FibreCoefficients::bundled(), SellmeierModel::fused_silica(), 0.5, [0.5, 1.5])?;
    let medium = Arc::new(NonlinearMedium::fibre(fibre, 2.25e-20)?);
    let pump = PumpSource::cw(0.78, 1.0)?;
    for (order, period) in [(1, 0.04548), (2, 0.09096)] {
        let profile = TaperProfile::new(1.0, 0.1, period, 8, 200)?;
        let trace = growth_trace(&medium, &profile, &pump, 750.0, 1)?;
        println!("order {order}, Λ_T = {:.2} cm", period * 100.0);
        println!("  maxima per cycle: {:?}", maxima_per_period(&trace, &profile));
        for (z, n) in trace.iter().step_by(50) {
            println!("  z = {:7.4} m  ⟨N⟩ = {n:.4e}", z);
        }
    }
    Ok(())
}

//! Effective index, group index, GVD and mode radius of the microstructured
//! fibre over the visible/near-IR band, for three hole pitches.
//!
//! cargo run --release --example dispersion_curves

use sfwm::dispersion::{beta2, group_index, EmpiricalFibre, FibreCoefficients, SellmeierModel};

fn main() -> sfwm::Result<()> {
    let fibre = EmpiricalFibre::new(FibreCoefficients::bundled(), SellmeierModel::fused_silica(), 0.5, [0.5, 1.5])?;
    println!("pitch_um,wavelength_nm,n_eff,n_g,beta2_ps2_per_km,mode_radius_um");
    for pitch in [0.9, 1.0, 1.1] {
        for k in 0..=16 {
            let um = 0.6 + 0.025 * k as f64;
            let n = fibre.effective_index(um, pitch)?;
            let ng = group_index(&fibre, um, pitch)?;
            // s²/m → ps²/km
            let b2 = beta2(&fibre, um, pitch)? * 1e27;
            let w = fibre.mode_radius_um(um, pitch)?;
            println!("{pitch},{:.1},{n:.6},{ng:.6},{b2:.3},{w:.4}", um * 1e3);
        }
    }
    Ok(())
}

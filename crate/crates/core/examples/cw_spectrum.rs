//! Signal spectrum of the tapered fibre under a 1 W CW pump, with the
//! enhancement over an untapered fibre and the predicted MI sidebands.
//!
//! cargo run --release --example cw_spectrum [config.json]

use std::path::PathBuf;

use sfwm::analysis::{linear_axis, mi_sidebands, nonlinear_parameter, spectrum};
use sfwm::config::LoadedConfig;
use sfwm::dispersion::beta2;
use sfwm::output::{spectrum_csv, write_atomic};

fn main() -> sfwm::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/configs/fibre_cw.json")
    });
    let cfg = LoadedConfig::load(&path, &[])?;
    let sc = cfg.scenario()?;
    let g = &cfg.config.grid;
    let axis = linear_axis(g.signal_start_nm, g.signal_end_nm, g.signal_points)?;
    let r = spectrum(&sc.medium, &sc.profile, &sc.pump, &axis, true)?;

    let (nm, n) = r.peak().expect("finite spectrum");
    let db = r.enhancement_db().unwrap();
    let k = r.wavelength_nm.iter().position(|&x| x == nm).unwrap();
    println!("peak ⟨N⟩ = {n:.4e} at {nm:.2} nm, {:.1} dB above the untapered fibre", db[k]);
    for (x, v) in r.local_maxima(1e-2) {
        println!("  local maximum {x:.2} nm  ⟨N⟩ = {v:.3e}");
    }

    let pump_nm = cfg.config.pump_nm();
    let avg = sc.profile.average_um;
    let b2 = beta2(&*sc.medium.index, pump_nm * 1e-3, avg)?;
    let gamma = nonlinear_parameter(&sc.medium, pump_nm, avg)?;
    let power = match sc.pump {
        sfwm::pump::PumpSource::Cw { power_w, .. } => power_w,
        _ => unreachable!("CW example"),
    };
    for b in mi_sidebands(b2, gamma, power, sc.profile.period_m, pump_nm, &[1, 2, 3])? {
        if let Some(s) = b.signal_nm {
            println!("MI order {}: sideband at {s:.2} nm", b.order);
        }
    }

    let out = std::env::temp_dir().join("sfwm-cw_spectrum.csv");
    write_atomic(&out, &spectrum_csv(&r, &cfg.hash)?)?;
    println!("wrote {}", out.display());
    Ok(())
}

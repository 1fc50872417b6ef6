//! Checkpointed sweep over cycle count and modulation depth. Run it twice:
//! the second run reuses every stored point.
//!
//! cargo run --release --example parameter_sweep

use sfwm::config::{LoadedConfig, SweepAxis};
use sfwm::sweep::{run_sweep, SweepPlan};

fn main() -> sfwm::Result<()> {
    let path = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/configs/fibre_cw.json");
    let base = LoadedConfig::load(&path, &["waveguide.steps_per_period=100".to_string()])?;
    let dir = std::env::temp_dir().join("sfwm-sweep-example");
    let plan = SweepPlan {
        axes: vec![
            SweepAxis { name: "waveguide.periods".into(), values: vec![10.0, 20.0, 40.0, 50.0] },
            SweepAxis { name: "waveguide.modulation".into(), values: vec![0.05, 0.1, 0.15] },
        ],
        base,
        signal_nm: 750.0,
        output: dir.join("sweep.csv"),
        checkpoint: dir.join("sweep.ndjson"),
        chunk_size: 4,
    };
    let out = run_sweep(&plan)?;
    println!("{} points: {} computed, {} reused", out.records.len(), out.computed, out.skipped);
    for r in &out.records {
        println!("{:?} → ⟨N⟩ {:?}, {:?} dB [{}]", r.params, r.photons, r.enhancement_db, r.status);
    }
    println!("wrote {}", plan.output.display());
    Ok(())
}

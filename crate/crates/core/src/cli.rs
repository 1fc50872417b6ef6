//! Command dispatch behind the `sfwm` binary: each command loads a
//! configuration, runs one analysis, writes its files and returns a one-line
//! summary.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use crate::analysis::{
    default_step_multiple, enhancement_map, jsi_pulsed, linear_axis, schmidt_purity, spectrum,
    with_threads, JointSpectralAmplitude, JsaGrid, SpectrumResult,
};
use crate::config::{LoadedConfig, Scenario};
use crate::error::{Error, Result};
use crate::output::{json_meta, json_with_meta, jsi_csv, map_csv, spectrum_csv, write_atomic};
use crate::propagation::{ode_oracle, propagate, CouplingModel, CwCoupling, OracleOptions, PulseSlotCache, PulsedCoupling};
use crate::pump::{PulseGrid, PumpSource};
use crate::sweep::{run_sweep, SweepPlan};
use crate::units::omega_from_wavelength_nm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Jsi,
    Purity,
    Map,
    Sweep,
    Check,
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "spectrum" => Command::Spectrum,
            "jsi" => Command::Jsi,
            "purity" => Command::Purity,
            "map" => Command::Map,
            "sweep" => Command::Sweep,
            "check" => Command::Check,
            other => return Err(Error::invalid(format!("unknown command `{other}`"))),
        })
    }
}

/// Result of a command: the summary line and the files written.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub summary: String,
    pub files: Vec<PathBuf>,
}

/// Exit status for an error: 2 configuration, 3 numerical, 4 I/O.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invalid(_) | Error::Parse(_) => 2,
        Error::Domain(_) | Error::Numerical(_) | Error::Logic(_) => 3,
        Error::Io { .. } => 4,
    }
}

/// Machine-readable error report.
pub fn error_json(e: &Error) -> String {
    let kind = match e {
        Error::Domain(_) => "domain",
        Error::Invalid(_) => "invalid",
        Error::Numerical(_) => "numerical",
        Error::Logic(_) => "logic",
        Error::Io { .. } => "io",
        Error::Parse(_) => "parse",
    };
    serde_json::json!({ "error": kind, "message": e.to_string(), "exit_code": exit_code(e) }).to_string()
}

/// Loads `config_path` with `overrides`, runs `command` and writes into `out`
/// (or the configured output directory, relative to the configuration).
pub fn run(command: Command, config_path: &Path, overrides: &[String], out: Option<&Path>) -> Result<Outcome> {
    let cfg = LoadedConfig::load(config_path, overrides)?;
    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => cfg.resolve(&cfg.config.output.directory),
    };
    let threads = cfg.config.threads;
    with_threads(threads, || dispatch(command, &cfg, &dir))?
}

fn dispatch(command: Command, cfg: &LoadedConfig, dir: &Path) -> Result<Outcome> {
    match command {
        Command::Spectrum => cmd_spectrum(cfg, dir),
        Command::Jsi => cmd_jsi(cfg, dir),
        Command::Purity => cmd_purity(cfg, dir),
        Command::Map => cmd_map(cfg, dir),
        Command::Sweep => cmd_sweep(cfg, dir),
        Command::Check => cmd_check(cfg, dir),
    }
}

fn signal_axis(cfg: &LoadedConfig) -> Result<Vec<f64>> {
    let g = &cfg.config.grid;
    let pump_nm = cfg.config.pump_nm();
    let mut axis = linear_axis(g.signal_start_nm, g.signal_end_nm, g.signal_points)?;
    axis.retain(|x| (x - pump_nm).abs() > 1e-9 * pump_nm);
    Ok(axis)
}

fn run_spectrum(cfg: &LoadedConfig, sc: &Scenario, normalize: bool) -> Result<SpectrumResult> {
    spectrum(&sc.medium, &sc.profile, &sc.pump, &signal_axis(cfg)?, normalize)
}

fn cmd_spectrum(cfg: &LoadedConfig, dir: &Path) -> Result<Outcome> {
    let sc = cfg.scenario()?;
    let r = run_spectrum(cfg, &sc, cfg.config.grid.normalize)?;
    let path = dir.join("spectrum.csv");
    write_atomic(&path, &spectrum_csv(&r, &cfg.hash)?)?;
    let (nm, n) = r.peak().ok_or_else(|| Error::Numerical("spectrum has no finite values".into()))?;
    let mut summary = format!("spectrum: peak N_expected={n:.6e} at {nm:.3} nm");
    if let Some(db) = r.enhancement_db() {
        let best = db.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        summary.push_str(&format!(", max enhancement {best:.2} dB"));
    }
    Ok(Outcome {
        summary,
        files: vec![path],
    })
}

fn pulse_of(sc: &Scenario) -> Result<PumpSource> {
    match sc.pump {
        PumpSource::Pulse { .. } => Ok(sc.pump),
        PumpSource::Cw { .. } => Err(Error::invalid("this command needs a pulsed pump (pump.kind = \"pulse\")")),
    }
}

fn compute_jsa(cfg: &LoadedConfig, sc: &Scenario) -> Result<JointSpectralAmplitude> {
    let pulse = pulse_of(sc)?;
    let grid = PulseGrid::new(&pulse)?;
    let g = &cfg.config.grid;
    let centre = match g.jsa_signal_nm {
        Some(nm) => nm,
        None => {
            let r = run_spectrum(cfg, sc, false)?;
            r.peak().ok_or_else(|| Error::Numerical("spectrum has no finite values".into()))?.0
        }
    };
    let step = g.jsa_step_multiple.unwrap_or_else(|| default_step_multiple(&grid, g.jsa_points));
    let axes = JsaGrid::around(&grid, centre, g.jsa_points, step)?;
    jsi_pulsed(&sc.medium, &sc.profile, &pulse, &axes)
}

fn cmd_jsi(cfg: &LoadedConfig, dir: &Path) -> Result<Outcome> {
    let sc = cfg.scenario()?;
    let jsa = compute_jsa(cfg, &sc)?;
    let csv_path = dir.join("jsi.csv");
    let json_path = dir.join("jsa.json");
    write_atomic(&csv_path, &jsi_csv(&jsa, &cfg.hash)?)?;
    let mut json = jsa.to_json(Some(json_meta(&cfg.hash)))?;
    json.push('\n');
    write_atomic(&json_path, json.as_bytes())?;
    let (s, i) = jsa.peak();
    Ok(Outcome {
        summary: format!(
            "jsi: {}×{} grid, peak at ({s:.3}, {i:.3}) nm, total N_expected={:.6e}",
            jsa.rows(),
            jsa.cols(),
            jsa.total_photons()
        ),
        files: vec![csv_path, json_path],
    })
}

fn cmd_purity(cfg: &LoadedConfig, dir: &Path) -> Result<Outcome> {
    let jsa = match &cfg.config.grid.jsa_file {
        Some(p) => {
            let p = cfg.resolve(p);
            let text = std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
            JointSpectralAmplitude::from_json(&text)?
        }
        None => compute_jsa(cfg, &cfg.scenario()?)?,
    };
    let r = schmidt_purity(&jsa)?;
    let path = dir.join("purity.json");
    let value = serde_json::to_value(&r).map_err(|e| Error::Parse(e.to_string()))?;
    write_atomic(&path, &json_with_meta(value, &cfg.hash)?)?;
    Ok(Outcome {
        summary: format!("purity {:.6} (schmidt_number {:.6})", r.purity, r.schmidt_number),
        files: vec![path],
    })
}

fn cmd_map(cfg: &LoadedConfig, dir: &Path) -> Result<Outcome> {
    let m = cfg
        .config
        .map
        .as_ref()
        .ok_or_else(|| Error::invalid("map command needs a `map` section"))?;
    let sc = cfg.scenario()?;
    if !matches!(sc.pump, PumpSource::Cw { .. }) {
        return Err(Error::invalid("map command needs a CW pump"));
    }
    let map = enhancement_map(
        &sc.medium,
        &sc.profile,
        &sc.pump,
        &m.modulation.values()?,
        &m.period_m.values()?,
        m.signal_nm,
    )?;
    let path = dir.join("map.csv");
    write_atomic(&path, &map_csv(&map, &cfg.hash)?)?;
    let summary = match (map.best(), map.brightest()) {
        (Some((d, p, db)), Some((bd, bp, n))) => format!(
            "map: max enhancement {db:.2} dB at Delta={d} Lambda_T={p} m; \
             brightest N_expected={n:.6e} at Delta={bd} Lambda_T={bp} m"
        ),
        _ => "map: no finite enhancement".to_string(),
    };
    Ok(Outcome {
        summary,
        files: vec![path],
    })
}

fn cmd_sweep(cfg: &LoadedConfig, dir: &Path) -> Result<Outcome> {
    let s = cfg
        .config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::invalid("sweep command needs a `sweep` section"))?;
    let plan = SweepPlan {
        axes: s.axes.clone(),
        base: cfg.clone(),
        signal_nm: s.signal_nm,
        output: dir.join("sweep.csv"),
        checkpoint: dir.join("sweep.ndjson"),
        chunk_size: s.chunk_size,
    };
    let out = run_sweep(&plan)?;
    let failed = out.records.iter().filter(|r| !r.ok()).count();
    let best = out
        .records
        .iter()
        .filter_map(|r| r.enhancement_db)
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Outcome {
        summary: format!(
            "sweep: {} points ({} computed, {} reused, {failed} failed), max enhancement {best:.2} dB",
            out.records.len(),
            out.computed,
            out.skipped
        ),
        files: vec![plan.output, plan.checkpoint],
    })
}

#[derive(Serialize)]
struct CheckPoint {
    signal_nm: f64,
    engine: f64,
    oracle: f64,
    relative_deviation: f64,
    oracle_error_estimate: f64,
}

fn cmd_check(cfg: &LoadedConfig, dir: &Path) -> Result<Outcome> {
    let sc = cfg.scenario()?;
    let c = &cfg.config.check;
    let signals = if c.signal_nm.is_empty() {
        let r = run_spectrum(cfg, &sc, false)?;
        vec![r.peak().ok_or_else(|| Error::Numerical("spectrum has no finite values".into()))?.0]
    } else {
        c.signal_nm.clone()
    };
    let options = OracleOptions {
        fine_steps: c.fine_steps,
        tolerance: c.tolerance,
    };
    let cache = match sc.pump {
        PumpSource::Pulse { .. } => Some(Arc::new(PulseSlotCache::new(
            &sc.medium,
            &sc.pump,
            &sc.profile.slot_geometries(),
        )?)),
        PumpSource::Cw { .. } => None,
    };
    let mut points = Vec::new();
    for &nm in &signals {
        let ws = omega_from_wavelength_nm(nm);
        let model: Box<dyn CouplingModel> = match &cache {
            None => Box::new(CwCoupling::new(sc.medium.clone(), &sc.pump, ws)?),
            Some(cache) => {
                let wi = 2.0 * cache.grid.center_omega - ws;
                Box::new(PulsedCoupling::new(sc.medium.clone(), cache.clone(), ws, wi)?)
            }
        };
        let engine = propagate(&sc.profile, model.as_ref())?.photons();
        let oracle = ode_oracle(&sc.profile, model.as_ref(), options)?;
        points.push(CheckPoint {
            signal_nm: nm,
            engine,
            oracle: oracle.photons(),
            relative_deviation: (engine - oracle.photons()).abs() / oracle.photons(),
            oracle_error_estimate: oracle.error_estimate,
        });
    }
    let worst = points.iter().map(|p| p.relative_deviation).fold(0.0, f64::max);
    let pass = worst <= c.max_relative_deviation;
    let path = dir.join("check.json");
    let value = serde_json::json!({
        "points": points,
        "max_relative_deviation": worst,
        "limit": c.max_relative_deviation,
        "pass": pass,
    });
    write_atomic(&path, &json_with_meta(value, &cfg.hash)?)?;
    let summary = format!(
        "check: max relative N deviation {worst:.3e} (limit {:.1e}) {}",
        c.max_relative_deviation,
        if pass { "PASS" } else { "FAIL" }
    );
    if !pass {
        return Err(Error::Numerical(summary));
    }
    Ok(Outcome {
        summary,
        files: vec![path],
    })
}

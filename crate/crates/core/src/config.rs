//! Run configuration: a JSON document with unit-bearing keys, dotted-path
//! overrides, and a content hash covering the configuration and every data
//! file it references.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::dispersion::{
    DispersionTable, EffectiveIndex, EmpiricalFibre, FibreCoefficients, Interpolation, SellmeierModel,
};
use crate::error::{Error, Result};
use crate::medium::NonlinearMedium;
use crate::modes::{ModeModel, ModeSize};
use crate::pump::{PumpSource, DEFAULT_COMPONENTS, DEFAULT_SPAN_OVER_TAU};
use crate::waveguide::{TaperProfile, DEFAULT_STEPS_PER_PERIOD};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub waveguide: WaveguideConfig,
    pub dispersion: DispersionConfig,
    pub pump: PumpConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapConfig>,
    #[serde(default)]
    pub check: CheckConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    /// Worker threads (0 = one per core). Never affects results.
    #[serde(default)]
    pub threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// Geometry parameter is the fibre pitch.
    Fibre,
    /// Geometry parameter is the waveguide width.
    Planar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveguideConfig {
    pub profile: ProfileKind,
    pub average_um: f64,
    pub modulation: f64,
    pub period_m: f64,
    pub periods: usize,
    #[serde(default = "default_steps")]
    pub steps_per_period: usize,
}

fn default_steps() -> usize {
    DEFAULT_STEPS_PER_PERIOD
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderKind {
    /// Empirical microstructured-fibre model.
    Fibre,
    /// Tabulated n_eff (and optionally mode area) from a CSV file.
    Table,
    /// Bulk Sellmeier material with a fixed mode radius.
    Bulk,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionConfig {
    pub provider: ProviderKind,
    #[serde(rename = "n2_m2_per_W")]
    pub n2_m2_per_w: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hole_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pitch_range_um: Option<[f64; 2]>,
    /// Fibre fit coefficients; the bundled set when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients_file: Option<PathBuf>,
    /// Sellmeier JSON; fused silica when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<Interpolation>,
    /// Fixed Gaussian radius; overrides the provider's own mode size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_radius_um: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PumpConfig {
    Cw {
        lambda_pump_nm: f64,
        #[serde(rename = "power_W")]
        power_w: f64,
    },
    Pulse {
        lambda_pump_nm: f64,
        #[serde(rename = "energy_nJ")]
        energy_nj: f64,
        /// Characteristic width τ; takes precedence over `fwhm_ps`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau_ps: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fwhm_ps: Option<f64>,
        #[serde(default = "default_components")]
        components: usize,
        #[serde(default = "default_span")]
        span_over_tau: f64,
    },
}

fn default_components() -> usize {
    DEFAULT_COMPONENTS
}

fn default_span() -> f64 {
    DEFAULT_SPAN_OVER_TAU
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub signal_start_nm: f64,
    pub signal_end_nm: f64,
    pub signal_points: usize,
    /// Also compute the unmodulated reference and the enhancement column.
    #[serde(default)]
    pub normalize: bool,
    /// JSA centre; the spectrum's peak when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jsa_signal_nm: Option<f64>,
    #[serde(default = "default_jsa_points")]
    pub jsa_points: usize,
    /// JSA step in pump-grid spacings; about ±3 pump bandwidths when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jsa_step_multiple: Option<usize>,
    /// Stored JSA for `purity`, instead of computing one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jsa_file: Option<PathBuf>,
}

fn default_jsa_points() -> usize {
    crate::analysis::DEFAULT_JSA_POINTS
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            signal_start_nm: 700.0,
            signal_end_nm: 770.0,
            signal_points: 701,
            normalize: false,
            jsa_signal_nm: None,
            jsa_points: default_jsa_points(),
            jsa_step_multiple: None,
            jsa_file: None,
        }
    }
}

/// Evenly spaced values, `start` and `end` included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 || !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::invalid(format!("invalid axis {self:?}")));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let step = (self.end - self.start) / (self.points - 1) as f64;
        Ok((0..self.points).map(|k| self.start + k as f64 * step).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    pub signal_nm: f64,
    pub modulation: AxisSpec,
    pub period_m: AxisSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    /// Signal wavelengths to compare; the spectrum's peak when empty.
    #[serde(default)]
    pub signal_nm: Vec<f64>,
    #[serde(default = "default_fine_steps")]
    pub fine_steps: usize,
    #[serde(default = "default_oracle_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_deviation")]
    pub max_relative_deviation: f64,
}

fn default_fine_steps() -> usize {
    2000
}

fn default_oracle_tolerance() -> f64 {
    1e-9
}

fn default_max_deviation() -> f64 {
    0.005
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            signal_nm: Vec::new(),
            fine_steps: default_fine_steps(),
            tolerance: default_oracle_tolerance(),
            max_relative_deviation: default_max_deviation(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// Dotted configuration path, e.g. `waveguide.period_m`.
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub signal_nm: f64,
    pub axes: Vec<SweepAxis>,
    #[serde(default = "default_chunk")]
    pub chunk_size: usize,
}

fn default_chunk() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
        }
    }
}

/// Physical inputs of a run, ready for the analysis functions.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub medium: Arc<NonlinearMedium>,
    pub profile: TaperProfile,
    pub pump: PumpSource,
}

/// A parsed configuration with everything needed to reproduce it.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: RunConfig,
    /// The configuration as JSON after overrides.
    pub raw: Value,
    /// Relative paths are resolved against this directory.
    pub base_dir: PathBuf,
    pub hash: String,
}

impl LoadedConfig {
    pub fn load(path: impl AsRef<Path>, overrides: &[String]) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut raw: Value =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        for o in overrides {
            apply_override(&mut raw, o)?;
        }
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_value(raw, base_dir)
    }

    pub fn from_value(raw: Value, base_dir: PathBuf) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_value(raw.clone()).map_err(|e| Error::invalid(format!("configuration: {e}")))?;
        config.validate()?;
        let hash = config.content_hash(&base_dir)?;
        Ok(Self {
            config,
            raw,
            base_dir,
            hash,
        })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        resolve(&self.base_dir, p)
    }

    pub fn scenario(&self) -> Result<Scenario> {
        self.config.scenario(&self.base_dir)
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Applies `a.b.c=value`; the value is parsed as JSON, falling back to a
/// plain string.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (key, text) = assignment
        .split_once('=')
        .ok_or_else(|| Error::invalid(format!("override `{assignment}` is not of the form key=value")))?;
    let value = serde_json::from_str(text.trim()).unwrap_or_else(|_| Value::String(text.trim().to_string()));
    set_path(root, key.trim(), value)
}

/// Sets a dotted path, creating intermediate objects as needed.
pub fn set_path(root: &mut Value, key: &str, value: Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::invalid(format!("malformed key `{key}`")));
    }
    let mut node = root;
    for part in &parts[..parts.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::invalid(format!("`{key}`: `{part}` is inside a non-object value")))?;
        node = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node
        .as_object_mut()
        .ok_or_else(|| Error::invalid(format!("`{key}` does not name an object field")))?;
    obj.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| Error::invalid(format!("configuration: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        positive("dispersion.n2_m2_per_W", self.dispersion.n2_m2_per_w)?;
        self.profile()?;
        self.pump_source()?;
        let g = &self.grid;
        if g.signal_points < 2 || !(g.signal_end_nm > g.signal_start_nm) || !(g.signal_start_nm > 0.0) {
            return Err(Error::invalid("grid: need signal_points ≥ 2 and 0 < signal_start_nm < signal_end_nm"));
        }
        if g.jsa_points == 0 {
            return Err(Error::invalid("grid.jsa_points must be at least 1"));
        }
        match self.dispersion.provider {
            ProviderKind::Fibre => {
                if self.dispersion.hole_ratio.is_none() || self.dispersion.pitch_range_um.is_none() {
                    return Err(Error::invalid("fibre dispersion needs hole_ratio and pitch_range_um"));
                }
            }
            ProviderKind::Table => {
                if self.dispersion.table_file.is_none() {
                    return Err(Error::invalid("table dispersion needs table_file"));
                }
            }
            ProviderKind::Bulk => {
                if self.dispersion.mode_radius_um.is_none() {
                    return Err(Error::invalid("bulk dispersion needs mode_radius_um"));
                }
            }
        }
        if let Some(r) = self.dispersion.mode_radius_um {
            positive("dispersion.mode_radius_um", r)?;
        }
        let c = &self.check;
        if c.fine_steps < 2 || !c.fine_steps.is_multiple_of(2) {
            return Err(Error::invalid("check.fine_steps must be even and ≥ 2"));
        }
        positive("check.tolerance", c.tolerance)?;
        positive("check.max_relative_deviation", c.max_relative_deviation)?;
        if let Some(m) = &self.map {
            positive("map.signal_nm", m.signal_nm)?;
            m.modulation.values()?;
            m.period_m.values()?;
        }
        if let Some(s) = &self.sweep {
            positive("sweep.signal_nm", s.signal_nm)?;
            if s.chunk_size == 0 {
                return Err(Error::invalid("sweep.chunk_size must be at least 1"));
            }
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<TaperProfile> {
        let w = &self.waveguide;
        TaperProfile::new(w.average_um, w.modulation, w.period_m, w.periods, w.steps_per_period)
    }

    pub fn pump_source(&self) -> Result<PumpSource> {
        match self.pump {
            PumpConfig::Cw {
                lambda_pump_nm,
                power_w,
            } => PumpSource::cw(lambda_pump_nm * 1e-3, power_w),
            PumpConfig::Pulse {
                lambda_pump_nm,
                energy_nj,
                tau_ps,
                fwhm_ps,
                components,
                span_over_tau,
            } => {
                let tau_s = match (tau_ps, fwhm_ps) {
                    (Some(t), _) => t * 1e-12,
                    (None, Some(f)) => PumpSource::tau_from_fwhm(f * 1e-12),
                    (None, None) => return Err(Error::invalid("pulse pump needs tau_ps or fwhm_ps")),
                };
                PumpSource::pulse_with_grid(lambda_pump_nm * 1e-3, energy_nj * 1e-9, tau_s, components, span_over_tau)
            }
        }
    }

    pub fn pump_nm(&self) -> f64 {
        match self.pump {
            PumpConfig::Cw { lambda_pump_nm, .. } | PumpConfig::Pulse { lambda_pump_nm, .. } => lambda_pump_nm,
        }
    }

    /// Every data file the run reads, resolved.
    pub fn data_files(&self, base_dir: &Path) -> Vec<PathBuf> {
        let d = &self.dispersion;
        [&d.coefficients_file, &d.material_file, &d.table_file, &self.grid.jsa_file]
            .into_iter()
            .flatten()
            .map(|p| resolve(base_dir, p))
            .collect()
    }

    /// SHA-256 over the canonical configuration (without thread count and
    /// output location) followed by the contents of every referenced file.
    pub fn content_hash(&self, base_dir: &Path) -> Result<String> {
        let mut canonical = self.clone();
        canonical.threads = 0;
        canonical.output = OutputConfig::default();
        let text = serde_json::to_string(&canonical).map_err(|e| Error::Parse(e.to_string()))?;
        let mut h = Sha256::new();
        h.update(text.as_bytes());
        for p in self.data_files(base_dir) {
            let bytes = fs::read(&p).map_err(|e| Error::io(&p, e))?;
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(&bytes);
        }
        Ok(hex::encode(h.finalize()))
    }

    pub fn scenario(&self, base_dir: &Path) -> Result<Scenario> {
        let d = &self.dispersion;
        let material = match &d.material_file {
            Some(p) => SellmeierModel::from_json_file(resolve(base_dir, p))?,
            None => SellmeierModel::fused_silica(),
        };
        let (index, modes): (Arc<dyn EffectiveIndex>, Arc<dyn ModeSize>) = match d.provider {
            ProviderKind::Fibre => {
                let coeffs = match &d.coefficients_file {
                    Some(p) => FibreCoefficients::from_json_file(resolve(base_dir, p))?,
                    None => FibreCoefficients::bundled(),
                };
                let fibre = Arc::new(EmpiricalFibre::new(
                    coeffs,
                    material,
                    d.hole_ratio.unwrap_or_default(),
                    d.pitch_range_um.unwrap_or_default(),
                )?);
                (fibre.clone(), Arc::new(ModeModel::Fibre(fibre)))
            }
            ProviderKind::Table => {
                let path = resolve(base_dir, d.table_file.as_deref().unwrap_or(Path::new("")));
                let table = Arc::new(
                    DispersionTable::from_csv_path(&path)?.with_interpolation(d.interpolation.unwrap_or_default()),
                );
                let modes = if d.mode_radius_um.is_none() {
                    if !table.has_area() {
                        return Err(Error::invalid(format!(
                            "{} has no area_um2 column; set dispersion.mode_radius_um",
                            path.display()
                        )));
                    }
                    ModeModel::TableArea(table.clone())
                } else {
                    ModeModel::Constant(0.0)
                };
                (table, Arc::new(modes))
            }
            ProviderKind::Bulk => (Arc::new(material), Arc::new(ModeModel::Constant(0.0))),
        };
        let modes: Arc<dyn ModeSize> = match d.mode_radius_um {
            Some(r) => Arc::new(ModeModel::Constant(r)),
            None => modes,
        };
        Ok(Scenario {
            medium: Arc::new(NonlinearMedium::new(index, modes, d.n2_m2_per_w)?),
            profile: self.profile()?,
            pump: self.pump_source()?,
        })
    }
}

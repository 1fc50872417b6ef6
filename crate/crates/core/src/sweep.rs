//! Batch parameter scans with deterministic ordering and resumable
//! checkpoints.
//!
//! Each grid point overrides dotted configuration paths on a base
//! configuration. Finished points are appended, one complete JSON line each,
//! to a checkpoint file keyed by a content hash of (base configuration, point);
//! a rerun skips every key already present. The final CSV is written in grid
//! order through a temporary file, whatever order the points finished in.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{pair_photons, to_db};
use crate::config::{set_path, LoadedConfig, SweepAxis};
use crate::error::{Error, Result};
use crate::output::{fmt_f64, header_line, write_atomic};

#[derive(Clone, Debug)]
pub struct SweepPlan {
    pub axes: Vec<SweepAxis>,
    pub base: LoadedConfig,
    pub signal_nm: f64,
    /// Final CSV.
    pub output: PathBuf,
    /// Newline-delimited JSON records.
    pub checkpoint: PathBuf,
    /// Points evaluated in parallel between checkpoint flushes.
    pub chunk_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub index: usize,
    pub key: String,
    /// Axis values in axis order.
    pub params: Vec<f64>,
    pub photons: Option<f64>,
    pub enhancement_db: Option<f64>,
    /// `ok`, or `failed: <reason>`.
    pub status: String,
}

impl SweepRecord {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    /// One record per grid point, in grid order.
    pub records: Vec<SweepRecord>,
    pub computed: usize,
    pub skipped: usize,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.chunk_size == 0 {
            return Err(Error::invalid("sweep chunk size must be at least 1"));
        }
        for a in &self.axes {
            if a.values.is_empty() {
                return Err(Error::invalid(format!("sweep axis `{}` has no values", a.name)));
            }
            if a.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("sweep axis `{}` has non-finite values", a.name)));
            }
            let mut sorted = a.values.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("sweep axis `{}` has duplicate values", a.name)));
            }
        }
        let mut names: Vec<&str> = self.axes.iter().map(|a| a.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("sweep axes must be distinct"));
        }
        Ok(())
    }

    /// Product of the axis lengths (1 for no axes).
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis values of point `index`; the last axis varies fastest.
    pub fn point(&self, index: usize) -> Vec<f64> {
        let mut rest = index;
        let mut out = vec![0.0; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            out[k] = a.values[rest % a.values.len()];
            rest /= a.values.len();
        }
        out
    }

    pub fn key(&self, params: &[f64]) -> String {
        let names: Vec<&str> = self.axes.iter().map(|a| a.name.as_str()).collect();
        let point = serde_json::json!({
            "base": self.base.hash,
            "signal_nm": self.signal_nm,
            "axes": names,
            "values": params,
        });
        hex::encode(Sha256::digest(point.to_string().as_bytes()))
    }

    fn evaluate(&self, index: usize) -> SweepRecord {
        let params = self.point(index);
        let key = self.key(&params);
        let (photons, enhancement_db, status) = match self.evaluate_point(&params) {
            Ok((n, n0)) => (Some(n), Some(to_db(n / n0)), "ok".to_string()),
            Err(e) => {
                log::warn!("sweep point {index} failed: {e}");
                (None, None, format!("failed: {e}"))
            }
        };
        SweepRecord {
            index,
            key,
            params,
            photons,
            enhancement_db,
            status,
        }
    }

    fn evaluate_point(&self, params: &[f64]) -> Result<(f64, f64)> {
        let mut raw = self.base.raw.clone();
        for (a, v) in self.axes.iter().zip(params) {
            set_path(&mut raw, &a.name, json_number(*v))?;
        }
        let cfg = LoadedConfig::from_value(raw, self.base.base_dir.clone())?;
        let sc = cfg.scenario()?;
        let n = pair_photons(&sc.medium, &sc.profile, &sc.pump, self.signal_nm)?;
        let n0 = pair_photons(&sc.medium, &sc.profile.uniform(), &sc.pump, self.signal_nm)?;
        Ok((n, n0))
    }
}

/// Integral values become JSON integers so they can fill count fields.
fn json_number(v: f64) -> serde_json::Value {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        serde_json::json!(v as i64)
    } else {
        serde_json::json!(v)
    }
}

/// Reads complete checkpoint records, cutting off a trailing partial line
/// left by an interrupted write.
pub fn read_checkpoint(path: &std::path::Path) -> Result<Vec<SweepRecord>> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::io(path, e)),
    };
    let complete = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
    if complete < bytes.len() {
        log::warn!(
            "dropping {} bytes of a partial record at the end of {}",
            bytes.len() - complete,
            path.display()
        );
        let f = OpenOptions::new().write(true).open(path).map_err(|e| Error::io(path, e))?;
        f.set_len(complete as u64).map_err(|e| Error::io(path, e))?;
    }
    let text = std::str::from_utf8(&bytes[..complete])
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            serde_json::from_str(l).map_err(|e| Error::Parse(format!("{}: bad record: {e}", path.display())))
        })
        .collect()
}

pub fn run_sweep(plan: &SweepPlan) -> Result<SweepOutcome> {
    plan.validate()?;
    let total = plan.len();
    let mut done: HashMap<String, SweepRecord> = read_checkpoint(&plan.checkpoint)?
        .into_iter()
        .map(|r| (r.key.clone(), r))
        .collect();
    let pending: Vec<usize> = (0..total)
        .filter(|&i| !done.contains_key(&plan.key(&plan.point(i))))
        .collect();
    let skipped = total - pending.len();
    if let Some(dir) = plan.checkpoint.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut log_file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&plan.checkpoint)
        .map_err(|e| Error::io(&plan.checkpoint, e))?;
    for chunk in pending.chunks(plan.chunk_size) {
        let records: Vec<SweepRecord> = chunk.par_iter().map(|&i| plan.evaluate(i)).collect();
        let mut buf = Vec::new();
        for r in &records {
            serde_json::to_writer(&mut buf, r).map_err(|e| Error::Parse(e.to_string()))?;
            buf.push(b'\n');
        }
        log_file.write_all(&buf).map_err(|e| Error::io(&plan.checkpoint, e))?;
        log_file.flush().map_err(|e| Error::io(&plan.checkpoint, e))?;
        for r in records {
            done.insert(r.key.clone(), r);
        }
    }
    let records: Vec<SweepRecord> = (0..total)
        .map(|i| {
            let params = plan.point(i);
            let mut r = done
                .remove(&plan.key(&params))
                .ok_or_else(|| Error::Logic(format!("sweep point {i} missing after run")))?;
            r.index = i;
            Ok(r)
        })
        .collect::<Result<_>>()?;
    write_atomic(&plan.output, &sweep_csv(plan, &records)?)?;
    Ok(SweepOutcome {
        records,
        computed: pending.len(),
        skipped,
    })
}

fn sweep_csv(plan: &SweepPlan, records: &[SweepRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Parse(format!("csv encoding: {e}"));
    let mut header = vec!["index".to_string()];
    header.extend(plan.axes.iter().map(|a| a.name.clone()));
    header.extend(["N_expected", "enhancement_dB", "status"].map(String::from));
    w.write_record(&header).map_err(fail)?;
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for r in records {
        let mut row = vec![r.index.to_string()];
        row.extend(r.params.iter().map(|&v| fmt_f64(v)));
        row.extend([opt(r.photons), opt(r.enhancement_db), r.status.clone()]);
        w.write_record(&row).map_err(fail)?;
    }
    let body = w.into_inner().map_err(|e| Error::Parse(format!("csv encoding: {e}")))?;
    let mut out = header_line(&plan.base.hash).into_bytes();
    out.extend(body);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> LoadedConfig {
        let raw = serde_json::json!({
            "waveguide": {"profile": "fibre", "average_um": 1.0, "modulation": 0.1, "period_m": 0.0455,
                          "periods": 4, "steps_per_period": 20},
            "dispersion": {"provider": "fibre", "n2_m2_per_W": 2.25e-20, "hole_ratio": 0.5,
                           "pitch_range_um": [0.5, 1.5]},
            "pump": {"kind": "cw", "lambda_pump_nm": 780, "power_W": 1.0}
        });
        LoadedConfig::from_value(raw, PathBuf::new()).unwrap()
    }

    fn plan(dir: &std::path::Path, axes: Vec<SweepAxis>) -> SweepPlan {
        SweepPlan {
            axes,
            base: base(),
            signal_nm: 750.0,
            output: dir.join("sweep.csv"),
            checkpoint: dir.join("sweep.ndjson"),
            chunk_size: 2,
        }
    }

    fn axes() -> Vec<SweepAxis> {
        vec![
            SweepAxis {
                name: "waveguide.modulation".into(),
                values: vec![0.05, 0.1, 0.95],
            },
            SweepAxis {
                name: "waveguide.period_m".into(),
                values: vec![0.045, 0.046],
            },
            SweepAxis {
                name: "waveguide.periods".into(),
                values: vec![4.0],
            },
        ]
    }

    #[test]
    fn ordering_and_failures() {
        let dir = tempfile::tempdir().unwrap();
        let p = plan(dir.path(), axes());
        assert_eq!(p.len(), 6);
        assert_eq!(p.point(3), vec![0.1, 0.046, 4.0]);
        let out = run_sweep(&p).unwrap();
        assert_eq!((out.computed, out.skipped), (6, 0));
        assert!(out.records.iter().enumerate().all(|(i, r)| r.index == i));
        // Δ = 0.95 drives the pitch outside the fibre's range
        assert!(out.records[..4].iter().all(SweepRecord::ok));
        assert!(out.records[4..].iter().all(|r| r.status.starts_with("failed")));
    }

    #[test]
    fn rerun_is_idempotent() {
        let dir = tempfile::tempdir().unwrap();
        let p = plan(dir.path(), axes());
        run_sweep(&p).unwrap();
        let first = fs::read(&p.output).unwrap();
        let again = run_sweep(&p).unwrap();
        assert_eq!((again.computed, again.skipped), (0, 6));
        assert_eq!(fs::read(&p.output).unwrap(), first);
    }

    #[test]
    fn resumes_after_partial_write() {
        let dir = tempfile::tempdir().unwrap();
        let p = plan(dir.path(), axes());
        run_sweep(&p).unwrap();
        let full = fs::read(&p.output).unwrap();
        let log = fs::read_to_string(&p.checkpoint).unwrap();
        let lines: Vec<&str> = log.lines().collect();
        // keep two records plus half of the third
        let cut = format!("{}\n{}\n{}", lines[0], lines[1], &lines[2][..lines[2].len() / 2]);
        fs::write(&p.checkpoint, cut).unwrap();
        fs::remove_file(&p.output).unwrap();
        let out = run_sweep(&p).unwrap();
        assert_eq!((out.computed, out.skipped), (4, 2));
        assert_eq!(fs::read(&p.output).unwrap(), full);
        assert_eq!(read_checkpoint(&p.checkpoint).unwrap().len(), 6);
    }

    #[test]
    fn single_point_matches_direct_call() {
        let dir = tempfile::tempdir().unwrap();
        let p = plan(dir.path(), Vec::new());
        let out = run_sweep(&p).unwrap();
        assert_eq!(out.records.len(), 1);
        let sc = p.base.scenario().unwrap();
        let direct = pair_photons(&sc.medium, &sc.profile, &sc.pump, 750.0).unwrap();
        assert_eq!(out.records[0].photons, Some(direct));
    }

    #[test]
    fn invalid_plans() {
        let dir = tempfile::tempdir().unwrap();
        let dup = vec![SweepAxis {
            name: "waveguide.modulation".into(),
            values: vec![0.1, 0.1],
        }];
        assert!(run_sweep(&plan(dir.path(), dup)).is_err());
        let nan = vec![SweepAxis {
            name: "waveguide.modulation".into(),
            values: vec![f64::NAN],
        }];
        assert!(run_sweep(&plan(dir.path(), nan)).is_err());
    }
}

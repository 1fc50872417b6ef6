//! Plot-ready output files. Every file starts with a provenance line carrying
//! the crate version and the configuration hash, and is written atomically.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::analysis::{EnhancementMap, JointSpectralAmplitude, SpectrumResult};
use crate::config::VERSION;
use crate::error::{Error, Result};

/// `# sfwm <version> config_sha256=<hash>`.
pub fn header_line(hash: &str) -> String {
    format!("# sfwm {VERSION} config_sha256={hash}\n")
}

/// Writes through a temporary sibling and renames it into place, so readers
/// never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(contents).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn csv_body(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Parse(format!("csv encoding: {e}"));
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(&r).map_err(fail)?;
    }
    w.into_inner().map_err(|e| Error::Parse(format!("csv encoding: {e}")))
}

fn with_header(hash: &str, body: Vec<u8>) -> Vec<u8> {
    let mut out = header_line(hash).into_bytes();
    out.extend(body);
    out
}

/// `wavelength_nm, N_expected[, enhancement_dB]`.
pub fn spectrum_csv(result: &SpectrumResult, hash: &str) -> Result<Vec<u8>> {
    let db = result.enhancement_db();
    let mut header = vec!["wavelength_nm".to_string(), "N_expected".to_string()];
    if db.is_some() {
        header.push("enhancement_dB".into());
    }
    let rows = (0..result.wavelength_nm.len()).map(|k| {
        let mut r = vec![fmt_f64(result.wavelength_nm[k]), fmt_f64(result.photons[k])];
        if let Some(db) = &db {
            r.push(fmt_f64(db[k]));
        }
        r
    });
    Ok(with_header(hash, csv_body(&header, rows)?))
}

/// First row: `signal_nm\idler_nm` then the idler axis; each further row is
/// a signal wavelength followed by `|J|²` across the idler axis.
pub fn jsi_csv(jsa: &JointSpectralAmplitude, hash: &str) -> Result<Vec<u8>> {
    let mut header = vec!["signal_nm\\idler_nm".to_string()];
    header.extend(jsa.idler_nm.iter().map(|&v| fmt_f64(v)));
    let rows = (0..jsa.rows()).map(|s| {
        let mut r = vec![fmt_f64(jsa.signal_nm[s])];
        r.extend((0..jsa.cols()).map(|i| fmt_f64(jsa.get(s, i).norm_sqr())));
        r
    });
    Ok(with_header(hash, csv_body(&header, rows)?))
}

/// `Delta, Lambda_T_m, enhancement_dB, N_expected`, one row per map cell.
pub fn map_csv(map: &EnhancementMap, hash: &str) -> Result<Vec<u8>> {
    let db = map.enhancement_db();
    let header: Vec<String> = ["Delta", "Lambda_T_m", "enhancement_dB", "N_expected"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows = map.modulations.iter().enumerate().flat_map(|(a, &d)| {
        let db = &db;
        map.periods_m.iter().enumerate().map(move |(b, &p)| {
            vec![fmt_f64(d), fmt_f64(p), fmt_f64(db[a][b]), fmt_f64(map.photons[a][b])]
        })
    });
    Ok(with_header(hash, csv_body(&header, rows)?))
}

/// JSON metadata block embedded in JSON outputs.
pub fn json_meta(hash: &str) -> serde_json::Value {
    serde_json::json!({ "generator": "sfwm", "version": VERSION, "config_sha256": hash })
}

/// Pretty JSON with the metadata block under `meta`.
pub fn json_with_meta(mut value: serde_json::Value, hash: &str) -> Result<Vec<u8>> {
    if let Some(obj) = value.as_object_mut() {
        obj.insert("meta".into(), json_meta(hash));
    }
    let mut s = serde_json::to_string_pretty(&value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

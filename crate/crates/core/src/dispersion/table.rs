//! Tabulated effective-index (and optional mode-area) data on a rectangular
//! (geometry × wavelength) grid.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Bilinear in (geometry, wavelength). Exact at nodes, no overshoot.
    #[default]
    Bilinear,
    /// Natural cubic spline along wavelength, linear across geometry.
    /// Smooth enough in λ for finite-difference dispersion.
    SplineWavelength,
}

/// Rectangular grid of `n_eff(geometry, λ)` plus optional mode area.
///
/// Values are stored row-major: one row per geometry node.
#[derive(Clone, Debug)]
pub struct DispersionTable {
    geometry_um: Vec<f64>,
    wavelength_um: Vec<f64>,
    n_eff: Vec<f64>,
    area_um2: Option<Vec<f64>>,
    metadata: BTreeMap<String, String>,
    interpolation: Interpolation,
    n_curvature: Vec<f64>,
    area_curvature: Option<Vec<f64>>,
}

fn strictly_increasing(axis: &[f64]) -> bool {
    axis.windows(2).all(|w| w[1] > w[0]) && axis.iter().all(|v| v.is_finite())
}

impl DispersionTable {
    pub fn new(
        geometry_um: Vec<f64>,
        wavelength_um: Vec<f64>,
        n_eff: Vec<f64>,
        area_um2: Option<Vec<f64>>,
    ) -> Result<Self> {
        if geometry_um.len() < 2 || wavelength_um.len() < 2 {
            return Err(Error::invalid(
                "dispersion table needs at least two geometry and two wavelength nodes",
            ));
        }
        if !strictly_increasing(&geometry_um) || !strictly_increasing(&wavelength_um) {
            return Err(Error::invalid("dispersion table axes must be strictly increasing"));
        }
        let cells = geometry_um.len() * wavelength_um.len();
        if n_eff.len() != cells {
            return Err(Error::invalid(format!(
                "dispersion table has {} n_eff values, expected {cells}",
                n_eff.len()
            )));
        }
        if n_eff.iter().any(|&n| !(n > 0.0 && n.is_finite())) {
            return Err(Error::invalid("n_eff grid must be strictly positive"));
        }
        if let Some(area) = &area_um2 {
            if area.len() != cells {
                return Err(Error::invalid(format!(
                    "dispersion table has {} area values, expected {cells}",
                    area.len()
                )));
            }
            if area.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
                return Err(Error::invalid("mode-area grid must be strictly positive"));
            }
        }
        Ok(Self {
            geometry_um,
            wavelength_um,
            n_eff,
            area_um2,
            metadata: BTreeMap::new(),
            interpolation: Interpolation::Bilinear,
            n_curvature: Vec::new(),
            area_curvature: None,
        })
    }

    pub fn with_interpolation(mut self, interpolation: Interpolation) -> Self {
        self.interpolation = interpolation;
        if interpolation == Interpolation::SplineWavelength {
            self.n_curvature = self.row_curvatures(&self.n_eff);
            self.area_curvature = self.area_um2.as_ref().map(|a| self.row_curvatures(a));
        } else {
            self.n_curvature.clear();
            self.area_curvature = None;
        }
        self
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn geometry_axis(&self) -> &[f64] {
        &self.geometry_um
    }

    pub fn wavelength_axis(&self) -> &[f64] {
        &self.wavelength_um
    }

    pub fn has_area(&self) -> bool {
        self.area_um2.is_some()
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// Loads the CSV schema `geometry_um, wavelength_um, n_eff[, area_um2]`.
    ///
    /// Lines of the form `# key = value` before the header become metadata
    /// (e.g. `# thickness_um = 0.45` for planar guides). Rows may come in any
    /// order but must cover the full rectangular grid exactly once.
    pub fn from_csv_reader<R: Read>(mut reader: R) -> Result<Self> {
        let mut text = String::new();
        reader
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("dispersion table: {e}")))?;

        let mut metadata = BTreeMap::new();
        for line in text.lines() {
            let Some(rest) = line.trim_start().strip_prefix('#') else {
                continue;
            };
            if let Some((k, v)) = rest.split_once('=').or_else(|| rest.split_once(':')) {
                metadata.insert(k.trim().to_string(), v.trim().to_string());
            }
        }

        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Parse(format!("dispersion table header: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        let expected = ["geometry_um", "wavelength_um", "n_eff"];
        if headers.len() < 3 || headers[..3] != expected {
            return Err(Error::Parse(format!(
                "dispersion table header must start with geometry_um, wavelength_um, n_eff; got {headers:?}"
            )));
        }
        let with_area = match headers.get(3).map(String::as_str) {
            None => false,
            Some("area_um2") if headers.len() == 4 => true,
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected dispersion table columns {headers:?}"
                )))
            }
        };

        let mut rows = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record =
                record.map_err(|e| Error::Parse(format!("dispersion table row {}: {e}", line + 1)))?;
            let mut vals = [0.0f64; 4];
            for (slot, field) in vals.iter_mut().zip(record.iter()) {
                *slot = field.parse().map_err(|_| {
                    Error::Parse(format!(
                        "dispersion table row {}: cannot parse {field:?}",
                        line + 1
                    ))
                })?;
            }
            if record.len() != headers.len() {
                return Err(Error::Parse(format!(
                    "dispersion table row {} has {} fields",
                    line + 1,
                    record.len()
                )));
            }
            rows.push(vals);
        }

        let mut geometry: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let mut wavelength: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        for axis in [&mut geometry, &mut wavelength] {
            axis.sort_by(f64::total_cmp);
            axis.dedup();
        }
        let (ng, nl) = (geometry.len(), wavelength.len());
        if ng * nl != rows.len() {
            return Err(Error::invalid(format!(
                "dispersion table is not rectangular: {} rows for {ng} geometries × {nl} wavelengths",
                rows.len()
            )));
        }
        let mut n_eff = vec![f64::NAN; ng * nl];
        let mut area = vec![f64::NAN; ng * nl];
        for r in &rows {
            let gi = geometry.binary_search_by(|g| g.total_cmp(&r[0])).unwrap();
            let li = wavelength.binary_search_by(|l| l.total_cmp(&r[1])).unwrap();
            let idx = gi * nl + li;
            if !n_eff[idx].is_nan() {
                return Err(Error::invalid(format!(
                    "dispersion table repeats node (geometry {}, wavelength {})",
                    r[0], r[1]
                )));
            }
            n_eff[idx] = r[2];
            area[idx] = r[3];
        }
        let mut table =
            Self::new(geometry, wavelength, n_eff, with_area.then_some(area))?;
        table.metadata = metadata;
        Ok(table)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file)
    }

    pub fn contains(&self, wavelength_um: f64, geometry_um: f64) -> bool {
        let (g0, g1) = (self.geometry_um[0], *self.geometry_um.last().unwrap());
        let (l0, l1) = (self.wavelength_um[0], *self.wavelength_um.last().unwrap());
        geometry_um >= g0 && geometry_um <= g1 && wavelength_um >= l0 && wavelength_um <= l1
    }

    pub fn n_eff(&self, wavelength_um: f64, geometry_um: f64) -> Result<f64> {
        self.interpolate(&self.n_eff, &self.n_curvature, wavelength_um, geometry_um)
    }

    /// Mode area (µm²) from the optional area column.
    pub fn area(&self, wavelength_um: f64, geometry_um: f64) -> Result<f64> {
        let area = self
            .area_um2
            .as_ref()
            .ok_or_else(|| Error::invalid("dispersion table carries no area_um2 column"))?;
        let curv = self.area_curvature.as_deref().unwrap_or(&[]);
        self.interpolate(area, curv, wavelength_um, geometry_um)
    }

    fn interpolate(
        &self,
        values: &[f64],
        curvature: &[f64],
        wavelength_um: f64,
        geometry_um: f64,
    ) -> Result<f64> {
        if !self.contains(wavelength_um, geometry_um) {
            return Err(Error::domain(format!(
                "table query (λ = {wavelength_um} µm, geometry = {geometry_um} µm) outside [{}, {}] µm × [{}, {}] µm",
                self.wavelength_um[0],
                self.wavelength_um.last().unwrap(),
                self.geometry_um[0],
                self.geometry_um.last().unwrap()
            )));
        }
        let (gi, u) = locate(&self.geometry_um, geometry_um);
        let (li, t) = locate(&self.wavelength_um, wavelength_um);
        let nl = self.wavelength_um.len();
        let along = |row: usize| -> f64 {
            let base = row * nl;
            let (a, b) = (values[base + li], values[base + li + 1]);
            match self.interpolation {
                Interpolation::Bilinear => a + t * (b - a),
                Interpolation::SplineWavelength => {
                    if t == 0.0 {
                        return a;
                    }
                    let h = self.wavelength_um[li + 1] - self.wavelength_um[li];
                    let (ma, mb) = (curvature[base + li], curvature[base + li + 1]);
                    let s = 1.0 - t;
                    s * a + t * b + ((s * s * s - s) * ma + (t * t * t - t) * mb) * h * h / 6.0
                }
            }
        };
        let lo = along(gi);
        if u == 0.0 {
            return Ok(lo);
        }
        let hi = along(gi + 1);
        Ok(lo + u * (hi - lo))
    }

    /// Second derivatives of a natural cubic spline through each geometry row.
    fn row_curvatures(&self, values: &[f64]) -> Vec<f64> {
        let x = &self.wavelength_um;
        let nl = x.len();
        let mut out = Vec::with_capacity(values.len());
        for row in values.chunks(nl) {
            out.extend(natural_spline_curvature(x, row));
        }
        out
    }
}

/// Index of the cell containing `q` and the fractional position inside it.
/// Nodes map to `t == 0` so interpolation reproduces them exactly.
fn locate(axis: &[f64], q: f64) -> (usize, f64) {
    let last = axis.len() - 1;
    let i = match axis.binary_search_by(|v| v.total_cmp(&q)) {
        Ok(i) if i == last => return (last - 1, 1.0),
        Ok(i) => return (i, 0.0),
        Err(i) => i - 1,
    };
    (i, (q - axis[i]) / (axis[i + 1] - axis[i]))
}

fn natural_spline_curvature(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations.
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let a = h0 / 6.0;
        let b = (h0 + h1) / 3.0;
        let c = h1 / 6.0;
        let d = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        let denom = b - a * c_prime[i - 1];
        c_prime[i] = c / denom;
        d_prime[i] = (d - a * d_prime[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corner_table() -> DispersionTable {
        // geometry rows {1, 2}, wavelength columns {0.5, 0.7}
        DispersionTable::new(
            vec![1.0, 2.0],
            vec![0.5, 0.7],
            vec![1.40, 1.42, 1.44, 1.46],
            None,
        )
        .unwrap()
    }

    #[test]
    fn constant_field() {
        let t = DispersionTable::new(vec![0.8, 1.0, 1.2], vec![0.6, 0.8], vec![1.45; 6], None)
            .unwrap();
        for &(l, g) in &[(0.6, 0.8), (0.71, 0.93), (0.8, 1.2), (0.65, 1.11)] {
            assert_eq!(t.n_eff(l, g).unwrap(), 1.45);
        }
    }

    #[test]
    fn nodes_are_exact() {
        let t = corner_table();
        assert_eq!(t.n_eff(0.5, 1.0).unwrap(), 1.40);
        assert_eq!(t.n_eff(0.7, 1.0).unwrap(), 1.42);
        assert_eq!(t.n_eff(0.5, 2.0).unwrap(), 1.44);
        assert_eq!(t.n_eff(0.7, 2.0).unwrap(), 1.46);
        let s = t.with_interpolation(Interpolation::SplineWavelength);
        assert_eq!(s.n_eff(0.7, 2.0).unwrap(), 1.46);
    }

    #[test]
    fn bilinear_midpoint_is_mean() {
        let t = corner_table();
        assert!((t.n_eff(0.6, 1.5).unwrap() - 1.43).abs() < 1e-14);
    }

    #[test]
    fn no_extrapolation() {
        let t = corner_table();
        assert!(matches!(t.n_eff(0.49, 1.5), Err(Error::Domain(_))));
        assert!(matches!(t.n_eff(0.6, 2.01), Err(Error::Domain(_))));
    }

    #[test]
    fn spline_reproduces_cubic_interior() {
        // A natural spline through many samples of a smooth curve is accurate inside.
        let x: Vec<f64> = (0..41).map(|i| 0.6 + 0.01 * i as f64).collect();
        let f = |l: f64| 1.45 + 0.01 / (l * l);
        let mut n = Vec::new();
        for _ in 0..2 {
            n.extend(x.iter().map(|&l| f(l)));
        }
        let t = DispersionTable::new(vec![1.0, 2.0], x, n, None)
            .unwrap()
            .with_interpolation(Interpolation::SplineWavelength);
        let q = 0.8037;
        assert!((t.n_eff(q, 1.3).unwrap() - f(q)).abs() < 1e-8);
    }

    #[test]
    fn csv_loader_validates_and_reads_metadata() {
        let text = "# thickness_um = 0.45\n\
            geometry_um, wavelength_um, n_eff, area_um2\n\
            1.0, 0.5, 1.40, 0.5\n\
            2.0, 0.7, 1.46, 0.8\n\
            1.0, 0.7, 1.42, 0.6\n\
            2.0, 0.5, 1.44, 0.7\n";
        let t = DispersionTable::from_csv_reader(text.as_bytes()).unwrap();
        assert_eq!(t.metadata().get("thickness_um").map(String::as_str), Some("0.45"));
        assert_eq!(t.n_eff(0.7, 1.0).unwrap(), 1.42);
        assert_eq!(t.area(0.5, 2.0).unwrap(), 0.7);

        let ragged = "geometry_um,wavelength_um,n_eff\n1.0,0.5,1.4\n2.0,0.7,1.46\n1.0,0.7,1.42\n";
        assert!(matches!(
            DispersionTable::from_csv_reader(ragged.as_bytes()),
            Err(Error::Invalid(_))
        ));
        let bad_header = "g,wavelength_um,n_eff\n1.0,0.5,1.4\n";
        assert!(matches!(
            DispersionTable::from_csv_reader(bad_header.as_bytes()),
            Err(Error::Parse(_))
        ));
    }
}

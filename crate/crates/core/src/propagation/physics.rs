//! Coupling coefficients from mode data: γ, κ and Δκ for CW and pulsed pumps.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::medium::{ModeData, NonlinearMedium};
use crate::modes::{overlap_fwm, overlap_xpm, self_overlap};
use crate::pump::{pump_kappa_cw, pump_kappa_two, PulseGrid, PumpSource};
use crate::units::{SPEED_OF_LIGHT, UM2_TO_M2};

use super::{Coupling, CouplingModel};

/// Relative slack on `ω_p1 + ω_p2 = ω_s + ω_i`.
const ENERGY_TOLERANCE: f64 = 1e-9;
/// Allowed distance (in grid spacings) of `ω_s + ω_i − 2ω₀` from a grid multiple.
const COMMENSURATE_TOLERANCE: f64 = 1e-6;

fn coupling_shape(omega_s: f64, omega_i: f64, n_s: f64, n_i: f64, area_s: f64, area_i: f64) -> f64 {
    ((omega_s * omega_i) / ((n_s * area_s) * (n_i * area_i))).sqrt()
}

/// `γ = (2 n₂ I_p / c) √(ω_s ω_i / (n_s S_s n_i S_i)) O_FWM`.
///
/// Areas and the overlap share units (µm² here); `intensity` is W/m².
#[allow(clippy::too_many_arguments)]
pub fn gamma_cw(
    omega_s: f64,
    omega_i: f64,
    n_s: f64,
    n_i: f64,
    area_s: f64,
    area_i: f64,
    overlap: f64,
    n2: f64,
    intensity: f64,
) -> f64 {
    2.0 * n2 * intensity / SPEED_OF_LIGHT * coupling_shape(omega_s, omega_i, n_s, n_i, area_s, area_i) * overlap
}

/// γ for the pump pairing `(p1, p2)`: prefactor `4 n₂ √(I₁ I₂)/c` for distinct
/// components, the CW prefactor when they coincide.
pub fn gamma_pulsed(
    signal: &ModeData,
    idler: &ModeData,
    p1: &ModeData,
    p2: &ModeData,
    intensities: (f64, f64),
    n2: f64,
) -> Result<f64> {
    check_energy(signal.omega, idler.omega, p1.omega, p2.omega)?;
    let overlap = overlap_fwm(&p1.mode, &p2.mode, &signal.mode, &idler.mode);
    let shape = coupling_shape(
        signal.omega,
        idler.omega,
        signal.mode.index,
        idler.mode.index,
        signal.area_um2,
        idler.area_um2,
    );
    let (i1, i2) = intensities;
    let prefactor = if degenerate(p1.omega, p2.omega, signal.omega + idler.omega) {
        2.0 * n2 * i1
    } else {
        4.0 * n2 * (i1 * i2).sqrt()
    };
    Ok(prefactor / SPEED_OF_LIGHT * shape * overlap)
}

fn degenerate(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= ENERGY_TOLERANCE * scale
}

fn check_energy(omega_s: f64, omega_i: f64, omega_p1: f64, omega_p2: f64) -> Result<()> {
    let out = omega_s + omega_i;
    let err = (omega_p1 + omega_p2 - out).abs();
    if err > ENERGY_TOLERANCE * out {
        return Err(Error::Logic(format!(
            "energy conservation broken: ω_p1 + ω_p2 − ω_s − ω_i = {err:.3e} rad/s"
        )));
    }
    Ok(())
}

/// XPM-corrected signal/idler constant
/// `κ_q = k_q [1 + 4 n₂ Σ_p I_p ∬|F_p|²|F_q|² / (n_q² S_q)]`, with the
/// pump terms given as `(I_p, overlap)`.
pub fn mode_kappa(k_q: f64, n_q: f64, n2: f64, area_q: f64, pumps: &[(f64, f64)]) -> f64 {
    let xpm: f64 = pumps.iter().map(|(i, o)| i * o).sum();
    k_q * (1.0 + 4.0 * n2 * xpm / (n_q * n_q * area_q))
}

/// `Δκ = (κ_p1 + κ_p2) − (κ_s + κ_i)`; pass `κ_p` twice for a CW pump.
pub fn delta_kappa(kappa_p1: f64, kappa_p2: f64, kappa_s: f64, kappa_i: f64) -> f64 {
    (kappa_p1 + kappa_p2) - (kappa_s + kappa_i)
}

fn intensity(power_w: f64, area_um2: f64) -> f64 {
    power_w / (area_um2 * UM2_TO_M2)
}

/// Local coupling for a CW pump of `power_w` watts. Symmetric in signal and
/// idler down to the last bit.
pub fn cw_coupling_from_modes(
    pump: &ModeData,
    signal: &ModeData,
    idler: &ModeData,
    power_w: f64,
    n2: f64,
) -> Coupling {
    let i_p = intensity(power_w, pump.area_um2);
    let kappa_p = pump_kappa_cw(
        pump.k,
        pump.mode.index,
        n2,
        i_p,
        pump.area_um2,
        self_overlap(&pump.mode),
    );
    let kappa = |q: &ModeData| {
        mode_kappa(q.k, q.mode.index, n2, q.area_um2, &[(i_p, overlap_xpm(&pump.mode, &q.mode))])
    };
    let gamma = gamma_cw(
        signal.omega,
        idler.omega,
        signal.mode.index,
        idler.mode.index,
        signal.area_um2,
        idler.area_um2,
        overlap_fwm(&pump.mode, &pump.mode, &signal.mode, &idler.mode),
        n2,
        i_p,
    );
    Coupling {
        gamma,
        delta_kappa: delta_kappa(kappa_p, kappa_p, kappa(signal), kappa(idler)),
    }
}

/// Local coupling of one pump pairing. Coinciding components fall back to the
/// CW expressions with that component's intensity.
pub fn pulsed_coupling_from_modes(
    p1: &ModeData,
    p2: &ModeData,
    signal: &ModeData,
    idler: &ModeData,
    intensities: (f64, f64),
    n2: f64,
) -> Result<Coupling> {
    let (i1, i2) = intensities;
    if degenerate(p1.omega, p2.omega, signal.omega + idler.omega) {
        check_energy(signal.omega, idler.omega, p1.omega, p2.omega)?;
        let power = i1 * p1.area_um2 * UM2_TO_M2;
        return Ok(cw_coupling_from_modes(p1, signal, idler, power, n2));
    }
    let gamma = gamma_pulsed(signal, idler, p1, p2, intensities, n2)?;
    let o11 = self_overlap(&p1.mode);
    let o22 = self_overlap(&p2.mode);
    let o12 = overlap_xpm(&p1.mode, &p2.mode);
    let kappa_1 = pump_kappa_two(p1.k, p1.mode.index, n2, i1, i2, p1.area_um2, o11, o12);
    let kappa_2 = pump_kappa_two(p2.k, p2.mode.index, n2, i2, i1, p2.area_um2, o22, o12);
    let kappa = |q: &ModeData| {
        mode_kappa(
            q.k,
            q.mode.index,
            n2,
            q.area_um2,
            &[(i1, overlap_xpm(&p1.mode, &q.mode)), (i2, overlap_xpm(&p2.mode, &q.mode))],
        )
    };
    Ok(Coupling {
        gamma,
        delta_kappa: delta_kappa(kappa_1, kappa_2, kappa(signal), kappa(idler)),
    })
}

/// Mode data of one frequency at a fixed list of geometries.
#[derive(Clone, Debug)]
pub struct ModeTable {
    pub omega: f64,
    pub geometries: Vec<f64>,
    pub data: Vec<ModeData>,
}

impl ModeTable {
    pub fn build(medium: &NonlinearMedium, omega: f64, geometries: &[f64]) -> Result<Self> {
        let data = geometries
            .iter()
            .map(|&g| medium.mode_data(omega, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            omega,
            geometries: geometries.to_vec(),
            data,
        })
    }

    fn matches(&self, omega: f64, geometries: &[f64]) -> bool {
        self.omega == omega && self.geometries == geometries
    }
}

fn table_for<'a>(
    cached: Option<&'a ModeTable>,
    medium: &NonlinearMedium,
    omega: f64,
    geometries: &[f64],
) -> Result<std::borrow::Cow<'a, ModeTable>> {
    match cached {
        Some(t) if t.matches(omega, geometries) => Ok(std::borrow::Cow::Borrowed(t)),
        _ => Ok(std::borrow::Cow::Owned(ModeTable::build(medium, omega, geometries)?)),
    }
}

/// Single-pairing model for a CW pump with `ω_i = 2ω_p − ω_s`.
#[derive(Clone, Debug)]
pub struct CwCoupling {
    pub medium: Arc<NonlinearMedium>,
    pub pump_omega: f64,
    pub power_w: f64,
    pub omega_s: f64,
    pub omega_i: f64,
    pump_table: Option<Arc<ModeTable>>,
}

impl CwCoupling {
    pub fn new(medium: Arc<NonlinearMedium>, pump: &PumpSource, omega_s: f64) -> Result<Self> {
        let PumpSource::Cw { power_w, .. } = *pump else {
            return Err(Error::invalid("CW coupling needs a CW pump"));
        };
        pump.validate()?;
        let pump_omega = pump.center_omega();
        let omega_i = 2.0 * pump_omega - omega_s;
        Self::with_idler(medium, pump_omega, power_w, omega_s, omega_i)
    }

    /// Explicit idler frequency; used to evaluate a pair in either labelling.
    pub fn with_idler(
        medium: Arc<NonlinearMedium>,
        pump_omega: f64,
        power_w: f64,
        omega_s: f64,
        omega_i: f64,
    ) -> Result<Self> {
        if !(omega_s > 0.0 && omega_i > 0.0) {
            return Err(Error::domain(format!(
                "signal and idler frequencies must be positive (ω_s = {omega_s:.4e}, ω_i = {omega_i:.4e})"
            )));
        }
        Ok(Self {
            medium,
            pump_omega,
            power_w,
            omega_s,
            omega_i,
            pump_table: None,
        })
    }

    /// Reuse pump mode data already evaluated at the profile's slot geometries.
    pub fn with_pump_table(mut self, table: Arc<ModeTable>) -> Self {
        self.pump_table = Some(table);
        self
    }

    /// The same pair with signal and idler labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            omega_s: self.omega_i,
            omega_i: self.omega_s,
            ..self.clone()
        }
    }
}

impl CouplingModel for CwCoupling {
    fn pair_count(&self) -> usize {
        1
    }

    fn couplings(&self, geometries_um: &[f64]) -> Result<Vec<Coupling>> {
        let m = &*self.medium;
        let pump = table_for(self.pump_table.as_deref(), m, self.pump_omega, geometries_um)?;
        geometries_um
            .iter()
            .zip(&pump.data)
            .map(|(&g, p)| {
                let s = m.mode_data(self.omega_s, g)?;
                let i = m.mode_data(self.omega_i, g)?;
                Ok(cw_coupling_from_modes(p, &s, &i, self.power_w, m.n2))
            })
            .collect()
    }
}

/// Pump-component mode data and intensities at fixed geometries, shared by
/// every signal/idler pair of a pulsed run.
#[derive(Clone, Debug)]
pub struct PulseSlotCache {
    pub grid: PulseGrid,
    pub geometries: Vec<f64>,
    /// `[geometry][component]`.
    pub modes: Vec<ModeData>,
    /// `[geometry][component]`, W/m².
    pub intensities: Vec<f64>,
}

impl PulseSlotCache {
    pub fn new(medium: &NonlinearMedium, pulse: &PumpSource, geometries: &[f64]) -> Result<Self> {
        let grid = PulseGrid::new(pulse)?;
        Self::from_grid(medium, grid, geometries)
    }

    pub fn from_grid(medium: &NonlinearMedium, grid: PulseGrid, geometries: &[f64]) -> Result<Self> {
        let n = grid.len();
        let mut modes = Vec::with_capacity(geometries.len() * n);
        let mut intensities = Vec::with_capacity(geometries.len() * n);
        for &g in geometries {
            for (&omega, &power) in grid.omegas.iter().zip(&grid.powers_w) {
                let d = medium.mode_data(omega, g)?;
                intensities.push(intensity(power, d.area_um2));
                modes.push(d);
            }
        }
        Ok(Self {
            grid,
            geometries: geometries.to_vec(),
            modes,
            intensities,
        })
    }

    /// Grid offset `n` with `ω_s + ω_i = 2ω₀ + nΔω`; errors if the pair is not
    /// commensurate with the pump grid.
    pub fn pair_offset(&self, omega_s: f64, omega_i: f64) -> Result<i64> {
        let x = (omega_s + omega_i - 2.0 * self.grid.center_omega) / self.grid.spacing;
        let n = x.round();
        if (x - n).abs() > COMMENSURATE_TOLERANCE {
            return Err(Error::Logic(format!(
                "ω_s + ω_i − 2ω₀ is {x:.6} pump-grid spacings, not an integer; \
                 signal/idler axes must be commensurate with the pump grid"
            )));
        }
        Ok(n as i64)
    }
}

/// Pulsed-pump model: one pairing per component `ω_p1` for which
/// `ω_p2 = ω_s + ω_i − ω_p1` also lies on the grid.
#[derive(Clone, Debug)]
pub struct PulsedCoupling {
    pub medium: Arc<NonlinearMedium>,
    pub cache: Arc<PulseSlotCache>,
    pub omega_s: f64,
    pub omega_i: f64,
    /// `(k1, k2)` grid indices of each pairing.
    pairs: Vec<(usize, usize)>,
    signal_table: Option<Arc<ModeTable>>,
    idler_table: Option<Arc<ModeTable>>,
}

impl PulsedCoupling {
    pub fn new(
        medium: Arc<NonlinearMedium>,
        cache: Arc<PulseSlotCache>,
        omega_s: f64,
        omega_i: f64,
    ) -> Result<Self> {
        let n = cache.pair_offset(omega_s, omega_i)?;
        let len = cache.grid.len() as i64;
        let pairs = (0..len)
            .filter_map(|k1| {
                let k2 = n + (len - 1) - k1;
                (0..len).contains(&k2).then_some((k1 as usize, k2 as usize))
            })
            .collect();
        Ok(Self {
            medium,
            cache,
            omega_s,
            omega_i,
            pairs,
            signal_table: None,
            idler_table: None,
        })
    }

    /// Reuse signal and idler mode data evaluated at the cache geometries.
    pub fn with_tables(mut self, signal: Arc<ModeTable>, idler: Arc<ModeTable>) -> Self {
        self.signal_table = Some(signal);
        self.idler_table = Some(idler);
        self
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

impl CouplingModel for PulsedCoupling {
    fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    fn couplings(&self, geometries_um: &[f64]) -> Result<Vec<Coupling>> {
        let m = &*self.medium;
        let local;
        let cache: &PulseSlotCache = if self.cache.geometries == geometries_um {
            &self.cache
        } else {
            local = PulseSlotCache::from_grid(m, self.cache.grid.clone(), geometries_um)?;
            &local
        };
        let signal = table_for(self.signal_table.as_deref(), m, self.omega_s, geometries_um)?;
        let idler = table_for(self.idler_table.as_deref(), m, self.omega_i, geometries_um)?;
        let n = cache.grid.len();
        let mut out = Vec::with_capacity(geometries_um.len() * self.pairs.len());
        for (j, (s, i)) in signal.data.iter().zip(&idler.data).enumerate() {
            let row = j * n;
            for &(k1, k2) in &self.pairs {
                out.push(pulsed_coupling_from_modes(
                    &cache.modes[row + k1],
                    &cache.modes[row + k2],
                    s,
                    i,
                    (cache.intensities[row + k1], cache.intensities[row + k2]),
                    m.n2,
                )?);
            }
        }
        Ok(out)
    }
}

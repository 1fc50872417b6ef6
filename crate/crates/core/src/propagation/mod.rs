//! Transfer-matrix propagation of the signal/idler mode pair.
//!
//! In the rotating frame `b_q = a_q e^{−jκ_q z}` the pair obeys
//!
//! ```text
//! db_s/dz  =  j γ e^{jΔφ} b_i†
//! db_i†/dz = −j γ* e^{−jΔφ} b_s,      Δφ(z) = ∫₀^z Δκ dz'
//! ```
//!
//! Each constant-cross-section element of thickness Δz maps
//! `(b_s, b_i†)` through `[[1, f], [f*, 1]]` with `f = jγΔz e^{jΔφ}`, where Δφ
//! is the phase accumulated up to the element's start. The structure matrix is
//! the product of element matrices in descending order, and the expected
//! photon number of the signal mode is `|T(1,2)|²`.

mod matrix;
mod oracle;
mod physics;

pub use matrix::TransferMatrix;
pub use oracle::{ode_oracle, OracleOptions, OracleResult};
pub use physics::{
    cw_coupling_from_modes, delta_kappa, gamma_cw, gamma_pulsed, mode_kappa, pulsed_coupling_from_modes,
    CwCoupling, ModeTable, PulseSlotCache, PulsedCoupling,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::waveguide::{Element, TaperProfile};

/// Element coupling magnitude above which the first-order element matrix is
/// flagged as inaccurate.
pub const ELEMENT_COUPLING_WARNING: f64 = 0.1;
/// Whole-structure gain beyond which propagation aborts.
pub const GAIN_LIMIT: f64 = 1e12;

/// Local coefficients of one pump pairing at one geometry.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Coupling {
    /// γ_{s,i} (1/m).
    pub gamma: f64,
    /// Δκ (1/m), including nonlinear corrections.
    pub delta_kappa: f64,
}

/// A source of coupling coefficients along the structure.
///
/// A CW pump has a single pairing; a pulsed pump has one per contributing
/// component `ω_p1` (with `ω_p2 = ω_s + ω_i − ω_p1`). Implementations must be
/// pure: the same geometries always give the same coefficients.
pub trait CouplingModel: Sync {
    fn pair_count(&self) -> usize;

    /// Coefficients at each geometry, laid out `[geometry][pair]`.
    fn couplings(&self, geometries_um: &[f64]) -> Result<Vec<Coupling>>;
}

/// Coefficients varying linearly with the local geometry around a reference
/// value. Useful as a cheap synthetic structure for checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearCoupling {
    pub gamma: f64,
    pub gamma_slope: f64,
    pub delta_kappa: f64,
    pub delta_kappa_slope: f64,
    pub reference_um: f64,
}

impl LinearCoupling {
    pub fn uniform(gamma: f64, delta_kappa: f64) -> Self {
        Self {
            gamma,
            gamma_slope: 0.0,
            delta_kappa,
            delta_kappa_slope: 0.0,
            reference_um: 1.0,
        }
    }
}

impl CouplingModel for LinearCoupling {
    fn pair_count(&self) -> usize {
        1
    }

    fn couplings(&self, geometries_um: &[f64]) -> Result<Vec<Coupling>> {
        Ok(geometries_um
            .iter()
            .map(|g| {
                let d = g - self.reference_um;
                Coupling {
                    gamma: self.gamma + self.gamma_slope * d,
                    delta_kappa: self.delta_kappa + self.delta_kappa_slope * d,
                }
            })
            .collect())
    }
}

/// Δφ at every element boundary: `Δφ(z_m) = Σ_{m'<m} Δκ_{m'} Δz_{m'}`.
/// Returns `elements.len() + 1` values starting at zero.
pub fn accumulate_phase(elements: &[Element], delta_kappa: &[f64]) -> Result<Vec<f64>> {
    if elements.len() != delta_kappa.len() {
        return Err(Error::invalid(format!(
            "{} elements but {} Δκ values",
            elements.len(),
            delta_kappa.len()
        )));
    }
    let mut phases = Vec::with_capacity(elements.len() + 1);
    let mut phi = 0.0;
    phases.push(phi);
    for (e, dk) in elements.iter().zip(delta_kappa) {
        phi += dk * e.thickness_m;
        phases.push(phi);
    }
    Ok(phases)
}

/// Off-diagonal coupling `f = jγΔz e^{jΔφ}` of one pairing.
pub fn element_coupling(gamma: f64, phase: f64, thickness_m: f64) -> Complex64 {
    Complex64::new(0.0, gamma * thickness_m) * Complex64::cis(phase)
}

pub fn element_matrix_cw(gamma: f64, phase: f64, thickness_m: f64) -> Result<TransferMatrix> {
    if !(thickness_m > 0.0) {
        return Err(Error::invalid(format!("element thickness must be positive, got {thickness_m}")));
    }
    let f = element_coupling(gamma, phase, thickness_m);
    warn_if_coarse(f.norm());
    Ok(TransferMatrix::element(f))
}

/// Element matrix with the off-diagonal summed over pump pairings given as
/// `(γ, Δφ)`.
pub fn element_matrix_pulsed(pairs: &[(f64, f64)], thickness_m: f64) -> Result<TransferMatrix> {
    if !(thickness_m > 0.0) {
        return Err(Error::invalid(format!("element thickness must be positive, got {thickness_m}")));
    }
    let f: Complex64 = pairs
        .iter()
        .map(|&(g, phi)| element_coupling(g, phi, thickness_m))
        .sum();
    warn_if_coarse(f.norm());
    Ok(TransferMatrix::element(f))
}

fn warn_if_coarse(f: f64) -> bool {
    let coarse = f >= ELEMENT_COUPLING_WARNING;
    if coarse {
        log::warn!(
            "element coupling |f| = {f:.3} ≥ {ELEMENT_COUPLING_WARNING}; first-order element matrices lose accuracy"
        );
    }
    coarse
}

/// Whole-structure result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Propagation {
    pub matrix: TransferMatrix,
    /// Largest |f| of any element.
    pub max_element_coupling: f64,
}

impl Propagation {
    /// Expected signal photon number `|T(1,2)|²`.
    pub fn photons(&self) -> f64 {
        self.matrix.photons()
    }
}

/// Multiplies all element matrices of `profile` in descending order.
pub fn propagate(profile: &TaperProfile, model: &dyn CouplingModel) -> Result<Propagation> {
    run_elements(profile, model, |_, _| {})
}

/// As [`propagate`], also recording `(z, ⟨N⟩)` after every `every` elements
/// (and at z = 0).
pub fn propagate_trace(
    profile: &TaperProfile,
    model: &dyn CouplingModel,
    every: usize,
) -> Result<(Propagation, Vec<(f64, f64)>)> {
    let every = every.max(1);
    let dz = profile.element_thickness_m();
    let mut trace = vec![(0.0, 0.0)];
    let result = run_elements(profile, model, |m, t| {
        if (m + 1) % every == 0 {
            trace.push(((m + 1) as f64 * dz, t.photons()));
        }
    })?;
    Ok((result, trace))
}

fn run_elements(
    profile: &TaperProfile,
    model: &dyn CouplingModel,
    mut observe: impl FnMut(usize, &TransferMatrix),
) -> Result<Propagation> {
    profile.validate()?;
    let pairs = model.pair_count();
    let steps = profile.steps_per_period;
    let slots = profile.slot_geometries();
    let table = model.couplings(&slots)?;
    if table.len() != steps * pairs {
        return Err(Error::Logic(format!(
            "coupling model returned {} values for {steps} slots × {pairs} pairings",
            table.len()
        )));
    }
    let dz = profile.element_thickness_m();
    let slot_elements: Vec<Element> = profile.discretize().into_iter().take(steps).collect();

    // Within one period: f-coefficients relative to the phase at period start,
    // plus the phase gained over a full period, for each pairing.
    let mut local = vec![Complex64::new(0.0, 0.0); steps * pairs];
    let mut period_phase = vec![0.0; pairs];
    let mut dk = vec![0.0; steps];
    for p in 0..pairs {
        for j in 0..steps {
            dk[j] = table[j * pairs + p].delta_kappa;
        }
        let phases = accumulate_phase(&slot_elements, &dk)?;
        for j in 0..steps {
            local[j * pairs + p] = element_coupling(table[j * pairs + p].gamma, phases[j], dz);
        }
        period_phase[p] = phases[steps];
    }

    let mut t = TransferMatrix::identity();
    let mut base = vec![Complex64::new(1.0, 0.0); pairs];
    let mut max_f: f64 = 0.0;
    for period in 0..profile.periods {
        for (b, phi) in base.iter_mut().zip(&period_phase) {
            *b = Complex64::cis(period as f64 * phi);
        }
        for j in 0..steps {
            let row = &local[j * pairs..(j + 1) * pairs];
            let f: Complex64 = row.iter().zip(&base).map(|(c, b)| c * b).sum();
            max_f = max_f.max(f.norm());
            t = t.apply_element(f);
            observe(period * steps + j, &t);
        }
        if !(t.gain() <= GAIN_LIMIT) {
            return Err(Error::Numerical(format!(
                "|T(1,1)| = {:.3e} exceeds {GAIN_LIMIT:.0e} after {} of {} periods; unphysical gain",
                t.gain(),
                period + 1,
                profile.periods
            )));
        }
    }
    if warn_if_coarse(max_f) {
        log::debug!("largest element coupling {max_f}");
    }
    Ok(Propagation {
        matrix: t,
        max_element_coupling: max_f,
    })
}

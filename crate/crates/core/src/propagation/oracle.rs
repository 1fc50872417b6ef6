//! Independent check of the element-product engine: the coupled equations are
//! integrated as a 2×2 fundamental-matrix ODE with classical RK4 on the
//! continuous taper profile.
//!
//! State: `T(z)` with `dT/dz = [[0, F], [F*, 0]] T`, `F = Σ_p jγ_p e^{jφ_p}`,
//! and one phase per pairing with `dφ_p/dz = Δκ_p(z)`. Couplings are needed at
//! step ends and midpoints only; since the profile is periodic they are
//! evaluated once for a single period. The error is estimated by repeating
//! the integration with doubled step (Richardson, `|T_h − T_2h| / 15`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::waveguide::TaperProfile;

use super::{Coupling, CouplingModel, TransferMatrix, GAIN_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleOptions {
    /// RK4 steps per taper period; must be even.
    pub fine_steps: usize,
    /// Largest accepted error estimate, relative to `max(1, max|T|)`.
    pub tolerance: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            fine_steps: 2000,
            tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult {
    pub matrix: TransferMatrix,
    pub error_estimate: f64,
}

impl OracleResult {
    pub fn photons(&self) -> f64 {
        self.matrix.photons()
    }
}

pub fn ode_oracle(
    profile: &TaperProfile,
    model: &dyn CouplingModel,
    options: OracleOptions,
) -> Result<OracleResult> {
    profile.validate()?;
    let n = options.fine_steps;
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::invalid(format!("oracle fine_steps must be even and ≥ 2, got {n}")));
    }
    if !(options.tolerance > 0.0) {
        return Err(Error::invalid("oracle tolerance must be positive"));
    }
    // nodes at multiples of h/2 within one period
    let nodes = 2 * n;
    let geometries: Vec<f64> = (0..nodes)
        .map(|k| profile.geometry_at_phase(k as f64 / nodes as f64))
        .collect();
    let pairs = model.pair_count();
    let table = model.couplings(&geometries)?;
    if table.len() != nodes * pairs {
        return Err(Error::Logic(format!(
            "coupling model returned {} values for {nodes} nodes × {pairs} pairings",
            table.len()
        )));
    }
    let h = profile.period_m / n as f64;
    let fine = integrate(&table, pairs, nodes, 1, h, profile.periods)?;
    let coarse = integrate(&table, pairs, nodes, 2, 2.0 * h, profile.periods)?;
    let error_estimate = fine.max_abs_diff(&coarse) / 15.0;
    let scale = fine.max_abs().max(1.0);
    if !(error_estimate <= options.tolerance * scale) {
        return Err(Error::Numerical(format!(
            "oracle error estimate {error_estimate:.3e} exceeds tolerance {:.1e} (× {scale:.3e}); \
             increase fine_steps beyond {n}",
            options.tolerance
        )));
    }
    Ok(OracleResult {
        matrix: fine,
        error_estimate,
    })
}

/// RK4 with step `h`; `stride` is the node spacing (in h_fine/2 units) of h/2.
fn integrate(
    table: &[Coupling],
    pairs: usize,
    nodes: usize,
    stride: usize,
    h: f64,
    periods: usize,
) -> Result<TransferMatrix> {
    let at = |node: usize| &table[(node % nodes) * pairs..(node % nodes + 1) * pairs];
    let steps = nodes / (2 * stride);
    let mut t = TransferMatrix::identity();
    let mut phi = vec![0.0; pairs];
    let mut stage = vec![0.0; pairs];
    for period in 0..periods {
        for step in 0..steps {
            let k0 = 2 * stride * step;
            let (c0, c1, c2) = (at(k0), at(k0 + stride), at(k0 + 2 * stride));

            let f1 = drive(c0, &phi, None, 0.0, &mut stage);
            let a1 = apply(f1, &t);
            let f2 = drive(c1, &phi, Some(c0), 0.5 * h, &mut stage);
            let a2 = apply(f2, &add(&t, &a1, 0.5 * h));
            let f3 = drive(c1, &phi, Some(c1), 0.5 * h, &mut stage);
            let a3 = apply(f3, &add(&t, &a2, 0.5 * h));
            let f4 = drive(c2, &phi, Some(c1), h, &mut stage);
            let a4 = apply(f4, &add(&t, &a3, h));

            for r in 0..2 {
                for c in 0..2 {
                    t.m[r][c] += (a1.m[r][c] + 2.0 * a2.m[r][c] + 2.0 * a3.m[r][c] + a4.m[r][c]) * (h / 6.0);
                }
            }
            for p in 0..pairs {
                let dk = c0[p].delta_kappa + 4.0 * c1[p].delta_kappa + c2[p].delta_kappa;
                phi[p] += dk * (h / 6.0);
            }
        }
        if !(t.gain() <= GAIN_LIMIT) {
            return Err(Error::Numerical(format!(
                "|T(1,1)| = {:.3e} exceeds {GAIN_LIMIT:.0e} after {} periods; unphysical gain",
                t.gain(),
                period + 1
            )));
        }
    }
    Ok(t)
}

/// `F = Σ jγ e^{jφ}` at a stage whose phases are `φ + dz·Δκ(slope)`.
fn drive(at: &[Coupling], phi: &[f64], slope: Option<&[Coupling]>, dz: f64, stage: &mut [f64]) -> Complex64 {
    for (p, s) in stage.iter_mut().enumerate() {
        *s = phi[p] + slope.map_or(0.0, |c| dz * c[p].delta_kappa);
    }
    at.iter()
        .zip(stage.iter())
        .map(|(c, &ph)| Complex64::new(0.0, c.gamma) * Complex64::cis(ph))
        .sum()
}

fn apply(f: Complex64, t: &TransferMatrix) -> TransferMatrix {
    let [[a, b], [c, d]] = t.m;
    let fc = f.conj();
    TransferMatrix::new(f * c, f * d, fc * a, fc * b)
}

fn add(t: &TransferMatrix, k: &TransferMatrix, dz: f64) -> TransferMatrix {
    let mut out = *t;
    for r in 0..2 {
        for c in 0..2 {
            out.m[r][c] += k.m[r][c] * dz;
        }
    }
    out
}

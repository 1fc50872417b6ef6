//! Sinusoidally tapered geometry and its discretisation into
//! constant-cross-section elements.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of elements per tapering period.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 200;

/// `g(z) = g_av [1 − Δ cos(2πz/Λ_T)]` repeated over `M` periods.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaperProfile {
    /// Average geometry parameter (pitch or width), µm.
    pub average_um: f64,
    /// Relative modulation depth Δ, 0 ≤ Δ < 1.
    pub modulation: f64,
    /// Tapering period Λ_T, m.
    pub period_m: f64,
    /// Number of tapering periods M.
    pub periods: usize,
    pub steps_per_period: usize,
}

/// One piece of the structure with a constant cross-section.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Element {
    /// Start position, m.
    pub start_m: f64,
    /// Thickness Δz, m.
    pub thickness_m: f64,
    /// Geometry at the element midpoint, µm.
    pub geometry_um: f64,
    /// Position of this element within its period (0..steps_per_period).
    pub slot: usize,
}

impl TaperProfile {
    pub fn new(
        average_um: f64,
        modulation: f64,
        period_m: f64,
        periods: usize,
        steps_per_period: usize,
    ) -> Result<Self> {
        let p = Self {
            average_um,
            modulation,
            period_m,
            periods,
            steps_per_period,
        };
        p.validate()?;
        Ok(p)
    }

    /// Unmodulated guide of the same length and discretisation.
    pub fn uniform(&self) -> Self {
        Self {
            modulation: 0.0,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.average_um > 0.0 && self.average_um.is_finite()) {
            return Err(Error::invalid(format!(
                "average geometry must be positive, got {} µm",
                self.average_um
            )));
        }
        if !(self.modulation >= 0.0 && self.modulation < 1.0) {
            return Err(Error::invalid(format!(
                "modulation depth must lie in [0, 1), got {}",
                self.modulation
            )));
        }
        if !(self.period_m > 0.0 && self.period_m.is_finite()) {
            return Err(Error::invalid(format!(
                "tapering period must be positive, got {} m",
                self.period_m
            )));
        }
        if self.periods == 0 {
            return Err(Error::invalid("period count must be at least 1"));
        }
        if self.steps_per_period == 0 {
            return Err(Error::invalid("steps per period must be at least 1"));
        }
        Ok(())
    }

    /// Total length `M Λ_T`, m.
    pub fn length_m(&self) -> f64 {
        self.periods as f64 * self.period_m
    }

    pub fn element_thickness_m(&self) -> f64 {
        self.period_m / self.steps_per_period as f64
    }

    pub fn element_count(&self) -> usize {
        self.periods * self.steps_per_period
    }

    /// Geometry as a function of the phase `z/Λ_T` within one period.
    pub fn geometry_at_phase(&self, fraction: f64) -> f64 {
        self.average_um * (1.0 - self.modulation * (2.0 * PI * fraction).cos())
    }

    /// Local geometry parameter at position `z` (m).
    pub fn geometry_at(&self, z_m: f64) -> Result<f64> {
        let length = self.length_m();
        if !(z_m >= 0.0 && z_m <= length) {
            return Err(Error::domain(format!(
                "position {z_m} m outside the structure [0, {length}] m"
            )));
        }
        Ok(self.geometry_at_phase(z_m / self.period_m))
    }

    /// Geometry of each slot within one period (sampled at element midpoints).
    /// Every period of the structure reuses these values exactly.
    pub fn slot_geometries(&self) -> Vec<f64> {
        let steps = self.steps_per_period as f64;
        (0..self.steps_per_period)
            .map(|j| self.geometry_at_phase((j as f64 + 0.5) / steps))
            .collect()
    }

    pub fn discretize(&self) -> Vec<Element> {
        let dz = self.element_thickness_m();
        let slots = self.slot_geometries();
        (0..self.element_count())
            .map(|m| {
                let slot = m % self.steps_per_period;
                Element {
                    start_m: m as f64 * dz,
                    thickness_m: dz,
                    geometry_um: slots[slot],
                    slot,
                }
            })
            .collect()
    }
}

pub fn geometry_at(profile: &TaperProfile, z_m: f64) -> Result<f64> {
    profile.geometry_at(z_m)
}

pub fn discretize(profile: &TaperProfile) -> Vec<Element> {
    profile.discretize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn endpoints_of_a_period() {
        let p = TaperProfile::new(1.0, 0.1, 0.045, 50, 200).unwrap();
        assert!((p.geometry_at(0.0).unwrap() - 0.9).abs() < 1e-15);
        assert!((p.geometry_at(0.0225).unwrap() - 1.1).abs() < 1e-15);
    }

    #[test]
    fn pitch_spans_paper_range() {
        let p = TaperProfile::new(1.0, 0.1, 0.045, 50, 2000).unwrap();
        let g = p.slot_geometries();
        let lo = g.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((lo - 0.9).abs() < 1e-5 && (hi - 1.1).abs() < 1e-5);
    }

    #[test]
    fn uniform_partition() {
        let p = TaperProfile::new(1.0, 0.2, 1.0, 1, 4).unwrap();
        let e = p.discretize();
        let starts: Vec<f64> = e.iter().map(|e| e.start_m).collect();
        assert_eq!(starts, vec![0.0, 0.25, 0.5, 0.75]);
        assert!(e.iter().all(|e| e.thickness_m == 0.25));
    }

    #[test]
    fn unmodulated_elements_share_geometry() {
        let p = TaperProfile::new(1.3, 0.0, 0.01, 3, 7).unwrap();
        assert!(p.discretize().iter().all(|e| e.geometry_um == 1.3));
    }

    #[test]
    fn default_discretisation_count() {
        let p = TaperProfile::new(1.0, 0.1, 0.045, 50, DEFAULT_STEPS_PER_PERIOD).unwrap();
        assert_eq!(p.discretize().len(), 10_000);
    }

    #[test]
    fn outside_structure_is_rejected() {
        let p = TaperProfile::new(1.0, 0.1, 0.045, 2, 10).unwrap();
        assert!(matches!(p.geometry_at(-1e-9), Err(Error::Domain(_))));
        assert!(matches!(p.geometry_at(0.0901), Err(Error::Domain(_))));
        assert!(TaperProfile::new(1.0, 1.0, 0.045, 2, 10).is_err());
        assert!(TaperProfile::new(1.0, 0.1, 0.045, 0, 10).is_err());
    }

    proptest! {
        #[test]
        fn elements_tile_the_structure(
            m in 1usize..60, steps in 1usize..300, period in 1e-4f64..0.2
        ) {
            let p = TaperProfile::new(1.0, 0.1, period, m, steps).unwrap();
            let e = p.discretize();
            prop_assert_eq!(e.len(), m * steps);
            let total: f64 = e.iter().map(|e| e.thickness_m).sum();
            let length = p.length_m();
            prop_assert!(((total - length) / length).abs() <= e.len() as f64 * f64::EPSILON);
            for w in e.windows(2) {
                let gap = w[1].start_m - (w[0].start_m + w[0].thickness_m);
                prop_assert!(gap.abs() <= 4.0 * f64::EPSILON * length);
            }
        }

        #[test]
        fn geometry_is_periodic(frac in 0.0f64..1.0, k in 0usize..10, avg in 0.5f64..2.0) {
            let p = TaperProfile::new(avg, 0.1, 0.045, 12, 200).unwrap();
            let z = (k as f64 + frac) * p.period_m;
            let a = p.geometry_at(z).unwrap();
            let b = p.geometry_at(z + p.period_m).unwrap();
            prop_assert!((a - b).abs() <= 1e-15 * avg * 4.0);
        }
    }
}

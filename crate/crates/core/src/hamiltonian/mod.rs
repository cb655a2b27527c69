//! The Kitaev model as a quadratic form, in the complex-fermion (Nambu) and
//! Majorana representations.

mod majorana;
mod nambu;
mod spectrum;

use serde::{Deserialize, Serialize};

pub use majorana::{build_majorana, MajoranaForm};
pub use nambu::{build_nambu, NambuForm};
pub use spectrum::{particle_hole_defect, QuadraticForm, SpectrumResult};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::linalg;
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    /// Hopping amplitude.
    pub t: f64,
    /// Real p-wave pairing amplitude.
    pub delta: f64,
    /// Chemical potential.
    pub mu: f64,
}

impl CouplingParams {
    pub fn new(t: f64, delta: f64, mu: f64) -> Self {
        Self { t, delta, mu }
    }

    /// `t = Δ = μ = scale`.
    pub fn sweet_spot(scale: f64) -> Self {
        Self::new(scale, scale, scale)
    }

    pub fn is_sweet_spot(&self) -> bool {
        self.t == self.delta && self.delta == self.mu
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.delta.is_finite() && self.mu.is_finite()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub spectrum_deviation: f64,
    pub ground_energy_deviation: f64,
    pub tolerance: f64,
    pub nambu: SpectrumResult,
    pub majorana: SpectrumResult,
}

/// Builds both representations independently and checks that their `±ε`
/// spectra and absolute ground energies agree within
/// `1e-10 * (1 + max|ε|)`.
pub fn representation_equivalence(spec: &LatticeSpec, p: &CouplingParams) -> Result<EquivalenceReport> {
    let nambu = build_nambu(spec, p).single_particle_spectrum()?;
    let majorana = build_majorana(spec, p).single_particle_spectrum()?;
    let scale = 1.0 + nambu.full.iter().chain(&majorana.full).map(|e| e.abs()).fold(0.0, f64::max);
    let tolerance = tolerances::SPECTRUM_MATCH * scale;
    let spectrum_deviation = linalg::sorted_deviation(&nambu.full, &majorana.full);
    let ground_energy_deviation = (nambu.ground_energy - majorana.ground_energy).abs();
    if spectrum_deviation > tolerance {
        return Err(Error::invariant(
            "representation_equivalence.spectrum",
            spectrum_deviation,
            format!("{}x{} at {p:?}", spec.rows(), spec.cols()),
        ));
    }
    // Sum of MN energies accumulates error linearly in the mode count.
    let energy_tolerance = tolerance * spec.sites() as f64;
    if ground_energy_deviation > energy_tolerance {
        return Err(Error::invariant(
            "representation_equivalence.ground_energy",
            ground_energy_deviation,
            format!("{}x{} at {p:?}", spec.rows(), spec.cols()),
        ));
    }
    Ok(EquivalenceReport {
        spectrum_deviation,
        ground_energy_deviation,
        tolerance,
        nambu,
        majorana,
    })
}

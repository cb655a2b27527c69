use serde::Serialize;

use super::{MajoranaForm, NambuForm};
use crate::error::Result;
use crate::linalg;

/// Quasiparticle energies of a quadratic Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    /// Non-negative single-particle energies `ε_k`, ascending, one per mode.
    pub epsilons: Vec<f64>,
    /// The full `±ε_k` spectrum, ascending.
    pub full: Vec<f64>,
    /// `-½ Σ ε_k + offset`.
    pub ground_energy: f64,
    pub offset: f64,
}

impl SpectrumResult {
    fn from_epsilons(epsilons: Vec<f64>, offset: f64) -> Self {
        let mut full: Vec<f64> = epsilons.iter().flat_map(|&e| [-e, e]).collect();
        full.sort_by(f64::total_cmp);
        let ground_energy = -0.5 * epsilons.iter().sum::<f64>() + offset;
        Self {
            epsilons,
            full,
            ground_energy,
            offset,
        }
    }

    /// Smallest `ε_k`.
    pub fn splitting(&self) -> f64 {
        self.epsilons.first().copied().unwrap_or(0.0)
    }

    /// Smallest `ε_k` above `zero_tol` (0 if every mode is a zero mode).
    pub fn gap(&self, zero_tol: f64) -> f64 {
        self.epsilons.iter().copied().find(|&e| e > zero_tol).unwrap_or(0.0)
    }

    pub fn zero_count(&self, zero_tol: f64) -> usize {
        self.epsilons.iter().filter(|&&e| e <= zero_tol).count()
    }

    /// Every many-body eigenvalue `offset + Σ n_k ε_k - ½ Σ ε_k`, ascending.
    /// Exponential in the mode count; meant for oracle-sized systems.
    pub fn occupation_sums(&self) -> Vec<f64> {
        let mut levels = vec![self.ground_energy];
        for &e in &self.epsilons {
            let shifted: Vec<f64> = levels.iter().map(|x| x + e).collect();
            levels.extend(shifted);
        }
        levels.sort_by(f64::total_cmp);
        levels
    }
}

pub trait QuadraticForm {
    fn single_particle_spectrum(&self) -> Result<SpectrumResult>;
}

impl QuadraticForm for MajoranaForm {
    /// `ε_k` are the singular values of `A`, which come in equal pairs; each
    /// pair contributes one energy.
    fn single_particle_spectrum(&self) -> Result<SpectrumResult> {
        if self.dim() == 0 {
            return Ok(SpectrumResult::from_epsilons(Vec::new(), self.offset));
        }
        let sv = linalg::singular_values(&self.matrix)?;
        let eps = sv.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect();
        Ok(SpectrumResult::from_epsilons(eps, self.offset))
    }
}

impl QuadraticForm for NambuForm {
    /// Upper half of the BdG eigenvalues.
    fn single_particle_spectrum(&self) -> Result<SpectrumResult> {
        let values = linalg::hermitian_eigenvalues(&self.matrix)?;
        let l = self.modes();
        let eps = values[l..].iter().map(|e| e.abs()).collect();
        Ok(SpectrumResult::from_epsilons(eps, self.bdg_offset()))
    }
}

/// Largest deviation of the BdG spectrum from `ε -> -ε` symmetry, relative
/// to `1 + max|ε|`.
pub fn particle_hole_defect(form: &NambuForm) -> Result<f64> {
    let values = linalg::hermitian_eigenvalues(&form.matrix)?;
    let scale = 1.0 + values.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let n = values.len();
    Ok((0..n).map(|i| (values[i] + values[n - 1 - i]).abs()).fold(0.0, f64::max) / scale)
}

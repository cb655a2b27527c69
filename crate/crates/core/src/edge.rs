//! Zero modes of the Majorana form and the edge-mode operator.
//!
//! At `t = Δ = μ` the `K = 0` block only couples `a_{m,0}` to `b_{m+1,0}`,
//! leaving one collective Majorana of each flavor unpaired on opposite edge
//! rows. Which row carries which flavor is read off the kernel of the built
//! block rather than assumed.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::build_sweet_block;
use crate::hamiltonian::{build_majorana, CouplingParams, MajoranaForm, QuadraticForm};
use crate::lattice::{Flavor, LatticeSpec};
use crate::linalg::{self, RMatrix, C64, I};
use crate::tolerances;

/// Fermionic operator `d = Σ_j w_j γ_j` over the `2MN` Majoranas.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    pub spec: LatticeSpec,
    pub coefficients: Vec<C64>,
}

impl ModeOperator {
    /// `{d, d†} = 2 Σ |w_j|²`; equals 1 for a normalized fermion.
    pub fn anticommutator_with_adjoint(&self) -> f64 {
        2.0 * self.coefficients.iter().map(|w| w.norm_sqr()).sum::<f64>()
    }

    /// `{d, d} = 2 Σ w_j²`; zero for a proper fermion.
    pub fn self_anticommutator(&self) -> C64 {
        self.coefficients.iter().map(|w| w * w).sum::<C64>() * 2.0
    }

    /// `[d, H] = -i Σ_k (A w)_k γ_k` for `H = (i/4) γᵀ A γ`; returns `‖A w‖`.
    pub fn commutator_residual(&self, form: &MajoranaForm) -> f64 {
        let w = DVector::from_vec(self.coefficients.clone());
        (linalg::to_complex(&form.matrix) * w).norm()
    }

    /// Energy `ε` if `[d, H] = ε d` holds within `tol`.
    pub fn eigen_energy(&self, form: &MajoranaForm, tol: f64) -> Option<f64> {
        let w = DVector::from_vec(self.coefficients.clone());
        let image = linalg::to_complex(&form.matrix) * &w * (-I);
        let norm2 = w.norm_squared();
        if norm2 == 0.0 {
            return None;
        }
        let eps = w.dotc(&image) / C64::new(norm2, 0.0);
        ((image - &w * eps).norm() <= tol && eps.im.abs() <= tol).then_some(eps.re)
    }

    pub fn flavor_component(&self, flavor: Flavor) -> Vec<C64> {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(j, &w)| if Flavor::of_flat(j) == flavor { w } else { linalg::ZERO })
            .collect()
    }
}

/// Rows hosting the unpaired `K = 0` Majoranas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeAssignment {
    /// Row whose collective A-flavor Majorana `a_{row,0}` is a zero mode.
    pub a_row: usize,
    /// Row whose collective B-flavor Majorana `b_{row,0}` is a zero mode.
    pub b_row: usize,
}

/// Locates the unpaired Majoranas from the kernel of the sweet-spot `K = 0` block.
pub fn edge_assignment(spec: &LatticeSpec) -> Result<EdgeAssignment> {
    let block = build_sweet_block(spec, 1.0, 0.0)?;
    // h_0 = iA_0 with A_0 real antisymmetric
    let a0: RMatrix = block.matrix.map(|z| z.im);
    let kernel = linalg::kernel_basis(&a0, tolerances::zero_threshold(linalg::spectral_norm(&a0)))?;
    let reps = flavor_pure(&kernel, Flavor::of_flat)?;
    let row_of = |flavor: Flavor| -> Result<usize> {
        let mut found = reps.iter().filter(|(f, _)| *f == flavor);
        match (found.next(), found.next()) {
            (Some((_, v)), None) => Ok(v.iamax() / 2 + 1),
            _ => Err(Error::invariant(
                "edge_assignment.kernel",
                kernel.len() as f64,
                format!("K=0 block kernel of {}x{} is not one Majorana per flavor", spec.rows(), spec.cols()),
            )),
        }
    };
    Ok(EdgeAssignment {
        a_row: row_of(Flavor::A)?,
        b_row: row_of(Flavor::B)?,
    })
}

fn collective(spec: &LatticeSpec, row: usize, flavor: Flavor, weight: C64, into: &mut [C64]) {
    let norm = 1.0 / (spec.cols() as f64).sqrt();
    for n in 0..spec.cols() {
        let site = (row - 1) * spec.cols() + n;
        into[2 * site + flavor.bit()] += weight * norm;
    }
}

/// Zero-energy edge operator `d_M = ½ (a_{A,0} - i b_{B,0})` built from the
/// uniform `K = 0` combinations on the rows given by [`edge_assignment`].
pub fn analytic_edge_operator(spec: &LatticeSpec) -> Result<ModeOperator> {
    let edges = edge_assignment(spec)?;
    let mut w = vec![linalg::ZERO; spec.majoranas()];
    collective(spec, edges.a_row, Flavor::A, C64::new(0.5, 0.0), &mut w);
    collective(spec, edges.b_row, Flavor::B, C64::new(0.0, -0.5), &mut w);
    Ok(ModeOperator {
        spec: *spec,
        coefficients: w,
    })
}

/// Bulk `K = 0` mode `d_m = ½ (a_{m,0} + i b_{m',0})` pairing row `m` with
/// the neighbouring row `m'` it is coupled to, `m = 1..M-1`. The sign makes
/// `d_m` lower the energy by `2t`, so `h⁰ = 2t Σ (d_m† d_m - ½)`.
pub fn bulk_mode_operator(spec: &LatticeSpec, m: usize) -> Result<ModeOperator> {
    if m == 0 || m >= spec.rows() {
        return Err(Error::Domain(format!("bulk mode index m = {m} outside 1..{}", spec.rows())));
    }
    let edges = edge_assignment(spec)?;
    let (a_row, b_row) = if edges.a_row == spec.rows() { (m, m + 1) } else { (m + 1, m) };
    let mut w = vec![linalg::ZERO; spec.majoranas()];
    collective(spec, a_row, Flavor::A, C64::new(0.5, 0.0), &mut w);
    collective(spec, b_row, Flavor::B, C64::new(0.0, 0.5), &mut w);
    Ok(ModeOperator {
        spec: *spec,
        coefficients: w,
    })
}

/// Normalized weight per row, `w(m) ∝ Σ_n (|w_a|² + |w_b|²)`.
pub fn localization_profile(mode: &ModeOperator, spec: &LatticeSpec) -> Vec<f64> {
    row_profile(spec, mode.coefficients.iter().map(|w| w.norm_sqr()))
}

fn row_profile(spec: &LatticeSpec, weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut rows = vec![0.0; spec.rows()];
    for (j, w) in weights.enumerate() {
        rows[spec.row_of_majorana(j) - 1] += w;
    }
    let total: f64 = rows.iter().sum();
    if total > 0.0 {
        rows.iter_mut().for_each(|w| *w /= total);
    }
    rows
}

/// Splits a kernel basis into flavor-pure orthonormal representatives.
fn flavor_pure(kernel: &[DVector<f64>], flavor_of: impl Fn(usize) -> Flavor) -> Result<Vec<(Flavor, DVector<f64>)>> {
    let mut out = Vec::new();
    let Some(dim) = kernel.first().map(|v| v.len()) else {
        return Ok(out);
    };
    for flavor in [Flavor::A, Flavor::B] {
        let projected: Vec<DVector<f64>> = kernel
            .iter()
            .map(|v| DVector::from_iterator(dim, v.iter().enumerate().map(|(j, &x)| if flavor_of(j) == flavor { x } else { 0.0 })))
            .collect();
        let mut basis = linalg::orthonormal_span(&projected, dim)?;
        for v in &mut basis {
            // fix the overall sign: largest component positive
            if v[v.iamax()] < 0.0 {
                *v *= -1.0;
            }
        }
        out.extend(basis.into_iter().map(|v| (flavor, v)));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeProfile {
    pub flavor: Flavor,
    /// Row weights `w(1..=M)`, summing to 1.
    pub rows: Vec<f64>,
    pub participation_ratio: f64,
    /// Weight on rows `1 < m < M`.
    pub interior_weight: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroModeReport {
    /// Number of Majorana zero directions (twice the fermionic zero modes).
    pub count: usize,
    pub profiles: Vec<ModeProfile>,
    /// Smallest single-particle energy above the zero threshold.
    pub gap: f64,
    /// Smallest single-particle energy.
    pub splitting: f64,
    #[serde(skip)]
    pub tolerance: f64,
    /// Flavor-pure orthonormal kernel representatives, same order as `profiles`.
    #[serde(skip)]
    pub kernel: Vec<DVector<f64>>,
}

impl ZeroModeReport {
    pub fn max_interior_weight(&self) -> f64 {
        self.profiles.iter().map(|p| p.interior_weight).fold(0.0, f64::max)
    }
}

pub fn default_zero_tolerance(form: &MajoranaForm) -> f64 {
    tolerances::zero_threshold(form.spectral_norm())
}

/// Collects every singular direction of `A` with `σ <= tol` (default
/// `1e-10 (1 + ‖A‖₂)`), rotated to flavor-pure representatives.
pub fn detect_zero_modes(form: &MajoranaForm, tol: Option<f64>) -> Result<ZeroModeReport> {
    let tol = tol.unwrap_or_else(|| default_zero_tolerance(form));
    let spec = form.spec;
    let sigmas = linalg::singular_values(&form.matrix)?;
    let count = sigmas.iter().filter(|&&s| s <= tol).count();
    let spectrum = form.single_particle_spectrum()?;
    let kernel = linalg::kernel_basis(&form.matrix, tol)?;
    let reps = flavor_pure(&kernel, Flavor::of_flat)?;
    let rows = spec.rows();
    let mut profiles = Vec::with_capacity(reps.len());
    let mut vectors = Vec::with_capacity(reps.len());
    for (flavor, v) in reps {
        let weights = row_profile(&spec, v.iter().map(|x| x * x));
        let interior_weight = if rows > 2 { weights[1..rows - 1].iter().sum() } else { 0.0 };
        let p4: f64 = v.iter().map(|x| x.powi(4)).sum();
        profiles.push(ModeProfile {
            flavor,
            rows: weights,
            participation_ratio: if p4 > 0.0 { 1.0 / p4 } else { 0.0 },
            interior_weight,
        });
        vectors.push(v);
    }
    Ok(ZeroModeReport {
        count,
        profiles,
        gap: spectrum.gap(tol),
        splitting: spectrum.splitting(),
        tolerance: tol,
        kernel: vectors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub delta: f64,
    pub mu: f64,
    pub splitting: f64,
    pub gap: f64,
}

fn sweep_point(spec: &LatticeSpec, p: &CouplingParams) -> Result<SweepRow> {
    let form = build_majorana(spec, p);
    let spectrum = form.single_particle_spectrum()?;
    Ok(SweepRow {
        t: p.t,
        delta: p.delta,
        mu: p.mu,
        splitting: spectrum.splitting(),
        gap: spectrum.gap(default_zero_tolerance(&form)),
    })
}

/// Smallest `|ε|` and gap at every grid point, in grid order. Points are
/// split across `jobs` worker threads.
pub fn splitting_sweep(spec: &LatticeSpec, grid: &[CouplingParams], jobs: usize) -> Result<Vec<SweepRow>> {
    let jobs = jobs.clamp(1, grid.len().max(1));
    if jobs == 1 {
        return grid.iter().map(|p| sweep_point(spec, p)).collect();
    }
    let chunk = grid.len().div_ceil(jobs);
    let parts: Vec<Result<Vec<SweepRow>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|points| scope.spawn(move || points.iter().map(|p| sweep_point(spec, p)).collect::<Result<Vec<_>>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(grid.len());
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// The sweet-spot `K = 0` block in its diagonal form: one zero mode and
/// `M - 1` modes of a common energy.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroBlockForm {
    pub zero_modes: usize,
    pub energies: Vec<f64>,
    /// Common value of the non-zero energies, if they agree within tolerance.
    pub common_energy: Option<f64>,
}

pub fn zero_block_diagonal_form(spec: &LatticeSpec, t: f64) -> Result<ZeroBlockForm> {
    let block = build_sweet_block(spec, t, 0.0)?;
    let values = block.energies()?;
    let rows = spec.rows();
    let energies: Vec<f64> = values[rows..].iter().map(|e| e.abs()).collect();
    let tol = tolerances::zero_threshold(energies.iter().copied().fold(0.0, f64::max));
    let zero_modes = energies.iter().filter(|&&e| e <= tol).count();
    let nonzero: Vec<f64> = energies.iter().copied().filter(|&e| e > tol).collect();
    let common_energy = match nonzero.first() {
        Some(&first) if nonzero.iter().all(|e| (e - first).abs() <= tol) => Some(first),
        _ => None,
    };
    Ok(ZeroBlockForm {
        zero_modes,
        energies,
        common_energy,
    })
}

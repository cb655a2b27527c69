//! Fourier transformation along the periodic direction.
//!
//! With `a_{m,n} = N^{-1/2} Σ_K e^{-iKn} a_{m,K}` (same for `b`), the
//! Hermitian matrix `iA` splits into `N` blocks of size `2M`, one per wave
//! number `K = 2πl/N`. Block `K` acts on `(a_{1,K}, b_{1,K}, ..., a_{M,K}, b_{M,K})`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{build_majorana, CouplingParams};
use crate::lattice::LatticeSpec;
use crate::linalg::{self, CMatrix, C64, I};
use crate::tolerances;

const GRID_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct FourierBlock {
    /// Wave number in `[0, 2π)`.
    pub k: f64,
    /// Grid label, `k = 2π l / N`.
    pub l: usize,
    /// `K ∈ {0, π}`: the block is its own particle-hole partner.
    pub self_conjugate: bool,
    #[serde(skip)]
    pub matrix: CMatrix,
}

impl FourierBlock {
    /// Signed eigenvalues of the block, ascending.
    pub fn energies(&self) -> Result<Vec<f64>> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }
}

/// `{2πl/N : l = 0..N-1}`, ascending.
pub fn k_values(cols: usize) -> Result<Vec<f64>> {
    if cols == 0 {
        return Err(Error::Domain("wave-number grid needs N >= 1".into()));
    }
    Ok((0..cols).map(|l| 2.0 * PI * l as f64 / cols as f64).collect())
}

/// Grid label of `k` (taken mod 2π), or a domain error if `k` is off the grid.
pub fn grid_label(cols: usize, k: f64) -> Result<usize> {
    let turns = k.rem_euclid(2.0 * PI) * cols as f64 / (2.0 * PI);
    let l = turns.round();
    if (turns - l).abs() > GRID_TOL * cols as f64 {
        return Err(Error::Domain(format!("K = {k} is not of the form 2πl/{cols}")));
    }
    Ok(l as usize % cols)
}

/// Block `h_K` of `iA` at wave number `k`, assembled directly from the
/// translation-invariant couplings:
///
/// ```text
/// h[a_m, b_m]     = i(-2μ + (t+Δ) e^{-iK} + (t-Δ) e^{iK})
/// h[a_m, b_{m+1}] = i(t+Δ)
/// h[a_{m+1}, b_m] = i(t-Δ)
/// ```
///
/// At `t = Δ = μ` the onsite entry is `-2it(1 - e^{-iK})`, which vanishes at `K = 0`.
pub fn build_block(spec: &LatticeSpec, p: &CouplingParams, k: f64) -> Result<FourierBlock> {
    let cols = spec.cols();
    let l = grid_label(cols, k)?;
    let k = 2.0 * PI * l as f64 / cols as f64;
    let rows = spec.rows();
    let mut h = CMatrix::zeros(2 * rows, 2 * rows);
    let onsite = I * (C64::new(-2.0 * p.mu, 0.0)
        + C64::from_polar(p.t + p.delta, -k)
        + C64::from_polar(p.t - p.delta, k));
    let mut set = |a: usize, b: usize, v: C64| {
        h[(a, b)] += v;
        h[(b, a)] += v.conj();
    };
    for m in 0..rows {
        set(2 * m, 2 * m + 1, onsite);
        if m + 1 < rows {
            set(2 * m, 2 * (m + 1) + 1, I * (p.t + p.delta));
            set(2 * (m + 1), 2 * m + 1, I * (p.t - p.delta));
        }
    }
    Ok(FourierBlock {
        k,
        l,
        self_conjugate: 2 * l % cols == 0,
        matrix: h,
    })
}

/// Sweet-spot block, `t = Δ = μ = t`.
pub fn build_sweet_block(spec: &LatticeSpec, t: f64, k: f64) -> Result<FourierBlock> {
    build_block(spec, &CouplingParams::sweet_spot(t), k)
}

/// Unitary Fourier change of basis on the `2MN` Majorana indices. Column
/// `l·2M + 2(m-1) + f` holds mode `(K_l, m, f)`.
pub fn fourier_unitary(spec: &LatticeSpec) -> CMatrix {
    let (rows, cols) = (spec.rows(), spec.cols());
    let dim = spec.majoranas();
    let norm = 1.0 / (cols as f64).sqrt();
    let mut u = CMatrix::zeros(dim, dim);
    for l in 0..cols {
        let k = 2.0 * PI * l as f64 / cols as f64;
        for m in 0..rows {
            for n in 1..=cols {
                let site = m * cols + (n - 1);
                let phase = C64::from_polar(norm, -k * n as f64);
                for f in 0..2 {
                    u[(2 * site + f, l * 2 * rows + 2 * m + f)] = phase;
                }
            }
        }
    }
    u
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockSpectrum {
    pub k: f64,
    pub l: usize,
    pub energies: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    /// Largest entry of `U†(iA)U` outside the diagonal blocks.
    pub off_block_max: f64,
    /// Largest deviation of a rotated diagonal block from [`build_block`].
    pub block_mismatch_max: f64,
    /// Deviation between the union of block spectra and the spectrum of `iA`.
    pub spectrum_deviation: f64,
    /// Largest entry over all pairwise commutators of embedded blocks.
    pub commutator_max: f64,
    /// `max |Σ_K E_K - iA|` for the embedded blocks `E_K`.
    pub reassembly_defect: f64,
    pub blocks: Vec<BlockSpectrum>,
}

/// Checks that the Fourier rotation block-diagonalizes `iA`, that the
/// diagonal blocks are exactly the analytically assembled `h_K`, that block
/// spectra reproduce the full spectrum, and that embedded blocks commute.
pub fn verify_block_decomposition(spec: &LatticeSpec, p: &CouplingParams) -> Result<BlockReport> {
    let form = build_majorana(spec, p);
    let ia = linalg::to_complex(&form.matrix) * I;
    let u = fourier_unitary(spec);
    let rotated = u.adjoint() * &ia * &u;
    let width = 2 * spec.rows();

    let mut off_block_max: f64 = 0.0;
    for ((r, c), z) in rotated.iter().enumerate().map(|(i, z)| ((i % rotated.nrows(), i / rotated.nrows()), z)) {
        if r / width != c / width {
            off_block_max = off_block_max.max(z.norm());
        }
    }

    let mut block_mismatch_max: f64 = 0.0;
    let mut blocks = Vec::new();
    let mut embedded = Vec::new();
    let mut union = Vec::new();
    for (l, k) in k_values(spec.cols())?.into_iter().enumerate() {
        let block = build_block(spec, p, k)?;
        let diag = rotated.view((l * width, l * width), (width, width));
        block_mismatch_max = block_mismatch_max.max(linalg::max_abs(&(diag - &block.matrix)));
        let energies = block.energies()?;
        union.extend_from_slice(&energies);
        blocks.push(BlockSpectrum { k, l, energies });
        let u_k = u.columns(l * width, width);
        embedded.push(u_k * &block.matrix * u_k.adjoint());
    }

    let full = linalg::hermitian_eigenvalues(&ia)?;
    let spectrum_deviation = linalg::sorted_deviation(&union, &full);

    let mut commutator_max: f64 = 0.0;
    for i in 0..embedded.len() {
        for j in (i + 1)..embedded.len() {
            commutator_max = commutator_max.max(linalg::max_abs(&linalg::commutator(&embedded[i], &embedded[j])));
        }
    }
    let total = embedded.iter().fold(CMatrix::zeros(ia.nrows(), ia.ncols()), |acc, e| acc + e);
    let reassembly_defect = linalg::max_abs(&(total - &ia));

    let scale = 1.0 + full.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let tol = tolerances::SPECTRUM_MATCH * scale;
    let checks = [
        ("fourier.off_block", off_block_max, tol),
        ("fourier.block_match", block_mismatch_max, tol),
        ("fourier.spectrum_union", spectrum_deviation, tol),
        ("fourier.reassembly", reassembly_defect, tol),
        ("fourier.block_commutator", commutator_max, tolerances::OPERATOR_IDENTITY * scale * scale),
    ];
    for (name, deviation, tol) in checks {
        if deviation > tol {
            return Err(Error::invariant(name, deviation, format!("{}x{} at {p:?}", spec.rows(), spec.cols())));
        }
    }
    Ok(BlockReport {
        off_block_max,
        block_mismatch_max,
        spectrum_deviation,
        commutator_max,
        reassembly_defect,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_examples() {
        assert_eq!(k_values(1).unwrap(), vec![0.0]);
        let k4 = k_values(4).unwrap();
        for (k, e) in k4.iter().zip([0.0, PI / 2.0, PI, 3.0 * PI / 2.0]) {
            assert!((k - e).abs() < 1e-15);
        }
        let k3 = k_values(3).unwrap();
        assert!((k3[2] - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!(k_values(0).is_err());
    }

    #[test]
    fn label_two_pi_is_zero() {
        assert_eq!(grid_label(4, 2.0 * PI).unwrap(), 0);
        assert_eq!(grid_label(4, -PI / 2.0).unwrap(), 3);
        assert!(grid_label(4, 0.3).is_err());
    }

    #[test]
    fn zero_wavevector_onsite_vanishes() {
        for rows in 1..5 {
            let spec = LatticeSpec::new(rows, 5).unwrap();
            let b = build_sweet_block(&spec, 1.7, 0.0).unwrap();
            for m in 0..rows {
                assert_eq!(b.matrix[(2 * m, 2 * m + 1)], C64::new(0.0, 0.0));
            }
            assert!(b.self_conjugate);
        }
    }

    /// 4x4 oracle for M = 2, K = 0: only (a_1, b_2) is coupled, with
    /// `iA` entry `2it`, so the block eigenvalues are `{-2t, 0, 0, 2t}`.
    #[test]
    fn two_row_zero_block() {
        let spec = LatticeSpec::new(2, 3).unwrap();
        let e = build_sweet_block(&spec, 1.0, 0.0).unwrap().energies().unwrap();
        assert!(linalg::sorted_deviation(&e, &[-2.0, 0.0, 0.0, 2.0]) < 1e-14, "{e:?}");
    }

    /// 2x2 oracle for M = 1, N = 2, K = π: onsite entry `-2it(1 - e^{-iπ}) = -4it`.
    #[test]
    fn single_row_pi_block() {
        let spec = LatticeSpec::new(1, 2).unwrap();
        let b = build_sweet_block(&spec, 1.0, PI).unwrap();
        assert!((b.matrix[(0, 1)] - C64::new(0.0, -4.0)).norm() < 1e-14);
        let e = b.energies().unwrap();
        assert!(linalg::sorted_deviation(&e, &[-4.0, 4.0]) < 1e-14);
    }

    #[test]
    fn zero_coupling_block_is_zero() {
        let spec = LatticeSpec::new(3, 4).unwrap();
        let b = build_sweet_block(&spec, 0.0, PI / 2.0).unwrap();
        assert_eq!(linalg::max_abs(&b.matrix), 0.0);
    }

    #[test]
    fn decomposition_examples() {
        let r = verify_block_decomposition(&LatticeSpec::new(3, 4).unwrap(), &CouplingParams::sweet_spot(1.0)).unwrap();
        assert_eq!(r.blocks.len(), 4);
        assert_eq!(r.blocks.iter().map(|b| b.energies.len()).sum::<usize>(), 24);

        let spec = LatticeSpec::new(1, 1).unwrap();
        let r = verify_block_decomposition(&spec, &CouplingParams::sweet_spot(1.0)).unwrap();
        assert_eq!(r.blocks.len(), 1);
        let a = build_majorana(&spec, &CouplingParams::sweet_spot(1.0));
        let b = build_sweet_block(&spec, 1.0, 0.0).unwrap();
        assert!(linalg::max_abs(&(linalg::to_complex(&a.matrix) * I - b.matrix)) < 1e-15);

        let r = verify_block_decomposition(&LatticeSpec::new(2, 2).unwrap(), &CouplingParams::sweet_spot(0.0)).unwrap();
        assert_eq!(r.off_block_max, 0.0);
    }

    #[test]
    fn off_sweet_spot_blocks_also_decompose() {
        let p = CouplingParams::new(0.7, -0.3, 1.4);
        for (m, n) in [(2, 3), (3, 5), (1, 2), (2, 1)] {
            verify_block_decomposition(&LatticeSpec::new(m, n).unwrap(), &p).unwrap();
        }
    }

    #[test]
    fn conjugate_blocks_share_singular_values() {
        let spec = LatticeSpec::new(3, 5).unwrap();
        for l in 1..5 {
            let k = 2.0 * PI * l as f64 / 5.0;
            let abs = |k: f64| {
                let mut e: Vec<f64> = build_sweet_block(&spec, 1.0, k).unwrap().energies().unwrap().iter().map(|x| x.abs()).collect();
                e.sort_by(f64::total_cmp);
                e
            };
            assert!(linalg::sorted_deviation(&abs(k), &abs(2.0 * PI - k)) < 1e-12);
        }
    }

    #[test]
    fn union_property_over_small_lattices() {
        for rows in 1..=6 {
            for cols in 1..=6 {
                for t in [0.5, 1.0, 2.0] {
                    let spec = LatticeSpec::new(rows, cols).unwrap();
                    verify_block_decomposition(&spec, &CouplingParams::sweet_spot(t)).unwrap();
                }
            }
        }
    }
}

//! Exact occupation-number-basis oracle for small cylinders.
//!
//! Basis state `s` has site `i` occupied when bit `i` of `s` is set, with
//! sites in the flat order of [`LatticeSpec`]. `c_i` carries the
//! Jordan-Wigner sign `(-1)^(occupied sites below i)`.

mod edge_states;
mod operator;

use nalgebra::DVector;
use serde::Serialize;

pub use edge_states::{
    collective_edge_modes, d_vacuum, edge_pair_states, pairing_check, two_mode_basis, two_mode_entropy, DVacuum, EdgeFock,
    EdgePairStates, PairingReport,
};
pub use operator::{anticommutator_defect, commutator_norm, FockOperator};

use crate::edge::ModeOperator;
use crate::error::{Error, Result};
use crate::hamiltonian::{build_nambu, CouplingParams, QuadraticForm};
use crate::lattice::LatticeSpec;
use crate::linalg::{self, RMatrix, C64};
use crate::tolerances;

/// Normalized many-body state with optional labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyState {
    pub amplitudes: DVector<C64>,
    pub energy: Option<f64>,
    pub jx: Option<f64>,
    pub parity: Option<f64>,
}

impl ManyBodyState {
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 1e-300) {
            return Err(Error::invariant("many_body_state.norm", norm, "cannot normalize a null vector"));
        }
        Ok(Self {
            amplitudes: amplitudes / C64::new(norm, 0.0),
            energy: None,
            jx: None,
            parity: None,
        })
    }
}

pub fn check_oracle_size(spec: &LatticeSpec) -> Result<()> {
    let sites = spec.sites();
    if sites > tolerances::ORACLE_SITE_CAP {
        return Err(Error::Resource {
            sites,
            dimension: 1u128 << sites.min(127),
            cap: tolerances::ORACLE_SITE_CAP,
        });
    }
    Ok(())
}

/// `c`, `c†`, `a`, `b` for every site.
#[derive(Debug, Clone)]
pub struct SiteOperators {
    pub spec: LatticeSpec,
    pub c: Vec<FockOperator>,
    pub cdag: Vec<FockOperator>,
    pub a: Vec<FockOperator>,
    pub b: Vec<FockOperator>,
}

impl SiteOperators {
    pub fn dim(&self) -> usize {
        1 << self.spec.sites()
    }

    pub fn identity(&self) -> FockOperator {
        FockOperator::identity(self.dim())
    }

    /// Majorana by flat index `2·site + flavor`.
    pub fn majorana(&self, flat: usize) -> &FockOperator {
        if flat.is_multiple_of(2) {
            &self.a[flat / 2]
        } else {
            &self.b[flat / 2]
        }
    }

    pub fn number(&self, site: usize) -> FockOperator {
        &self.cdag[site] * &self.c[site]
    }

    pub fn vacuum(&self) -> DVector<C64> {
        let mut v = DVector::zeros(self.dim());
        v[0] = C64::new(1.0, 0.0);
        v
    }

    /// `Σ_j w_j γ_j` as a many-body operator.
    pub fn mode(&self, mode: &ModeOperator) -> FockOperator {
        let mut triplets = Vec::new();
        for (j, &w) in mode.coefficients.iter().enumerate() {
            if w != linalg::ZERO {
                triplets.extend(self.majorana(j).triplets().map(|(r, c, v)| (r, c, v * w)));
            }
        }
        FockOperator::from_triplets(self.dim(), triplets)
    }

    /// Site pairs on which the anticommutators are verified: all pairs up to
    /// four sites, otherwise each site with itself, its successor, and the
    /// mirrored site.
    fn sampled_pairs(&self) -> Vec<(usize, usize)> {
        let l = self.spec.sites();
        if l <= 4 {
            return (0..l).flat_map(|i| (0..l).map(move |j| (i, j))).collect();
        }
        let mut pairs: Vec<_> = (0..l).flat_map(|i| [(i, i), (i, (i + 1) % l), (i, l - 1 - i)]).collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// Largest defect of `{c_i, c_j†} = δ_ij`, `{c_i, c_j} = 0`, `a² = b² = 1`
    /// over the sampled pairs.
    pub fn car_defect(&self) -> Result<f64> {
        let id = self.identity();
        let zero = FockOperator::zero(self.dim());
        let mut worst: f64 = 0.0;
        for (i, j) in self.sampled_pairs() {
            let target = if i == j { &id } else { &zero };
            worst = worst.max(anticommutator_defect(&self.c[i], &self.cdag[j], target)?);
            worst = worst.max(anticommutator_defect(&self.c[i], &self.c[j], &zero)?);
        }
        for site in 0..self.spec.sites() {
            worst = worst.max((&(&self.a[site] * &self.a[site]) - &id).max_abs());
            worst = worst.max((&(&self.b[site] * &self.b[site]) - &id).max_abs());
        }
        Ok(worst)
    }
}

/// Jordan-Wigner site operators, verified against the canonical
/// anticommutation relations before returning.
pub fn site_operators(spec: &LatticeSpec) -> Result<SiteOperators> {
    check_oracle_size(spec)?;
    let sites = spec.sites();
    let dim = 1usize << sites;
    let i = C64::new(0.0, 1.0);
    let mut c = Vec::with_capacity(sites);
    for site in 0..sites {
        let bit = 1usize << site;
        let below = bit - 1;
        let triplets = (0..dim)
            .filter(|s| s & bit != 0)
            .map(|s| {
                let sign = if (s & below).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                (s ^ bit, s, C64::new(sign, 0.0))
            })
            .collect();
        c.push(FockOperator::from_triplets(dim, triplets));
    }
    let cdag: Vec<_> = c.iter().map(FockOperator::adjoint).collect();
    let a = c.iter().zip(&cdag).map(|(c, cd)| cd + c).collect();
    let b = c.iter().zip(&cdag).map(|(c, cd)| &(i * c) - &(i * cd)).collect();
    let ops = SiteOperators { spec: *spec, c, cdag, a, b };
    let defect = ops.car_defect()?;
    if defect > tolerances::OPERATOR_IDENTITY {
        return Err(Error::invariant("fock.car", defect, format!("{} sites", sites)));
    }
    Ok(ops)
}

/// `H = Σ_bonds [-t (c_r† c_s + h.c.) - Δ (c_r c_s + h.c.)] + μ Σ_r (2 n_r - 1)`.
pub fn manybody_h(ops: &SiteOperators, p: &CouplingParams) -> FockOperator {
    let dim = ops.dim();
    let mut triplets = Vec::new();
    let mut push = |op: FockOperator, alpha: f64| {
        if alpha != 0.0 {
            triplets.extend(op.triplets().map(|(r, c, v)| (r, c, v * alpha)));
        }
    };
    for bond in ops.spec.bonds() {
        let (r, s) = (bond.from, bond.to);
        push(&ops.cdag[r] * &ops.c[s], -p.t);
        push(&ops.cdag[s] * &ops.c[r], -p.t);
        push(&ops.c[r] * &ops.c[s], -p.delta);
        push(&ops.cdag[s] * &ops.cdag[r], -p.delta);
    }
    for site in 0..ops.spec.sites() {
        push(ops.number(site), 2.0 * p.mu);
    }
    push(FockOperator::identity(dim), -p.mu * ops.spec.sites() as f64);
    FockOperator::from_triplets(dim, triplets)
}

pub fn build_manybody_h(spec: &LatticeSpec, p: &CouplingParams) -> Result<FockOperator> {
    let ops = site_operators(spec)?;
    let h = manybody_h(&ops, p);
    let defect = (&h - &h.adjoint()).max_abs();
    if defect > tolerances::HERMITIAN * (1.0 + h.max_abs()) {
        return Err(Error::invariant("fock.hermiticity", defect, format!("{}x{}", spec.rows(), spec.cols())));
    }
    Ok(h)
}

fn dense_guard(h: &FockOperator) -> Result<()> {
    let sites = h.dim().trailing_zeros() as usize;
    if sites > tolerances::DENSE_SITE_LIMIT {
        return Err(Error::Resource {
            sites,
            dimension: h.dim() as u128,
            cap: tolerances::DENSE_SITE_LIMIT,
        });
    }
    if !h.is_real(0.0) {
        return Err(Error::Domain("dense oracle expects a real Hamiltonian".into()));
    }
    Ok(())
}

/// Full spectrum (ascending) and orthonormal eigenvectors as columns.
pub fn dense_eigensystem(h: &FockOperator) -> Result<(Vec<f64>, RMatrix)> {
    dense_guard(h)?;
    linalg::symmetric_eigh(&h.to_dense_real())
}

pub fn dense_spectrum(h: &FockOperator) -> Result<Vec<f64>> {
    Ok(dense_eigensystem(h)?.0)
}

/// Ground energy: dense for up to [`tolerances::DENSE_SITE_LIMIT`] sites,
/// Lanczos with full reorthogonalization above.
pub fn ground_energy(h: &FockOperator) -> Result<f64> {
    if h.dim().trailing_zeros() as usize <= tolerances::DENSE_SITE_LIMIT {
        return Ok(dense_spectrum(h)?[0]);
    }
    lanczos_ground(h, 400)
}

fn lanczos_ground(h: &FockOperator, max_iter: usize) -> Result<f64> {
    let n = h.dim();
    // deterministic start vector with no special symmetry
    let mut v = DVector::from_iterator(n, (0..n).map(|i| ((i as f64 + 1.0) * 0.754_877_666).sin() + 0.1));
    v.normalize_mut();
    let mut basis: Vec<DVector<f64>> = vec![v];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let scale = 1.0 + h.max_abs() * n as f64;
    let mut previous = f64::INFINITY;
    for k in 0..max_iter.min(n) {
        let mut w = h.apply_real(&basis[k]);
        let a = basis[k].dot(&w);
        alpha.push(a);
        for q in &basis {
            let overlap = q.dot(&w);
            w.axpy(-overlap, q, 1.0);
        }
        let b = w.norm();
        let m = alpha.len();
        let mut t = RMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let (values, vectors) = linalg::symmetric_eigh(&t)?;
        let residual = b * vectors[(m - 1, 0)].abs();
        let tol = 1e-12 * (1.0 + values[0].abs());
        if residual <= tol || b <= 1e-14 * scale || (previous - values[0]).abs() <= 1e-14 * (1.0 + values[0].abs()) && residual <= 1e-9 {
            return Ok(values[0]);
        }
        previous = values[0];
        beta.push(b);
        basis.push(w / b);
    }
    Err(Error::NoConvergence {
        dimension: n,
        max_entry: h.max_abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub multiplicity: usize,
}

/// Clusters sorted eigenvalues with tolerance `1e-8 (1 + |E|)`.
pub fn cluster_levels(energies: &[f64]) -> Vec<Level> {
    linalg::cluster_sorted(energies, |e| tolerances::DEGENERACY_CLUSTER * (1.0 + e.abs()))
        .into_iter()
        .map(|r| Level {
            energy: energies[r.clone()].iter().sum::<f64>() / r.len() as f64,
            multiplicity: r.len(),
        })
        .collect()
}

pub fn degeneracy_multiplicities(spec: &LatticeSpec, p: &CouplingParams) -> Result<Vec<Level>> {
    let h = build_manybody_h(spec, p)?;
    Ok(cluster_levels(&dense_spectrum(&h)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct OccupationCheck {
    pub max_deviation: f64,
    pub manybody: Vec<f64>,
    pub reconstructed: Vec<f64>,
}

/// Compares the exact spectrum with `offset + Σ n_k ε_k - ½ Σ ε_k` over all
/// occupations, using energies from the Nambu form.
pub fn occupation_consistency(spec: &LatticeSpec, p: &CouplingParams) -> Result<OccupationCheck> {
    let manybody = dense_spectrum(&build_manybody_h(spec, p)?)?;
    let reconstructed = build_nambu(spec, p).single_particle_spectrum()?.occupation_sums();
    Ok(OccupationCheck {
        max_deviation: linalg::sorted_deviation(&manybody, &reconstructed),
        manybody,
        reconstructed,
    })
}

/// Energy `ε` with `[H, d†] = ε d†`, read off as `ε = -⟨d, [H, d]⟩ / ⟨d, d⟩`
/// (Frobenius), together with the residual `‖[H, d] + ε d‖_max`.
pub fn ladder_energy(h: &FockOperator, d: &FockOperator) -> Result<(f64, f64)> {
    let comm = &h.try_mul(d)? - &d.try_mul(h)?;
    let dd: f64 = d.triplets().map(|(_, _, v)| v.norm_sqr()).sum();
    if dd == 0.0 {
        return Err(Error::Domain("ladder energy of the zero operator".into()));
    }
    let overlap: C64 = d.triplets().map(|(r, c, v)| v.conj() * comm.get(r, c)).sum();
    let eps = -overlap.re / dd;
    let residual = (&comm + &d.scale(C64::new(eps, 0.0))).max_abs();
    Ok((eps, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::{analytic_edge_operator, bulk_mode_operator};
    use crate::hamiltonian::build_majorana;

    fn spec(m: usize, n: usize) -> LatticeSpec {
        LatticeSpec::new(m, n).unwrap()
    }

    #[test]
    fn single_site_operators() {
        let ops = site_operators(&spec(1, 1)).unwrap();
        assert_eq!(ops.c[0].get(0, 1), C64::new(1.0, 0.0));
        assert_eq!(ops.c[0].nnz(), 1);
        let a2 = &ops.a[0] * &ops.a[0];
        assert_eq!(a2, FockOperator::identity(2));
    }

    #[test]
    fn two_sites_carry_string_sign() {
        let ops = site_operators(&spec(1, 2)).unwrap();
        // c_2 on |11> = c_2 c_1† c_2† |00>... bit 0 set gives a minus sign
        assert_eq!(ops.c[1].get(0b01, 0b11), C64::new(-1.0, 0.0));
        assert_eq!(ops.c[1].get(0b00, 0b10), C64::new(1.0, 0.0));
        let zero = FockOperator::zero(4);
        assert_eq!(anticommutator_defect(&ops.c[0], &ops.cdag[1], &zero).unwrap(), 0.0);
    }

    #[test]
    fn all_anticommutators_two_by_two() {
        let ops = site_operators(&spec(2, 2)).unwrap();
        let id = ops.identity();
        let zero = FockOperator::zero(16);
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { &id } else { &zero };
                assert!(anticommutator_defect(&ops.c[i], &ops.cdag[j], target).unwrap() <= 1e-14);
                assert!(anticommutator_defect(&ops.c[i], &ops.c[j], &zero).unwrap() <= 1e-14);
            }
        }
    }

    #[test]
    fn size_cap() {
        let err = site_operators(&spec(5, 3)).unwrap_err();
        match err {
            Error::Resource { sites, dimension, cap } => {
                assert_eq!((sites, dimension, cap), (15, 32768, 14));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn single_site_spectrum() {
        let h = build_manybody_h(&spec(1, 1), &CouplingParams::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(dense_spectrum(&h).unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn sweet_spot_ground_energy_matches_quadratic() {
        let s = spec(2, 2);
        let p = CouplingParams::sweet_spot(1.0);
        let e0 = ground_energy(&build_manybody_h(&s, &p).unwrap()).unwrap();
        let q = build_majorana(&s, &p).single_particle_spectrum().unwrap();
        assert!((e0 - q.ground_energy).abs() < 1e-9);
    }

    /// Brute-force 4x4 check at (1,2): the doubled periodic bond gives the
    /// pair `(c_1, c_2)` hopping `-2t` and pairing amplitude zero (the two
    /// `-Δ c_r c_s` terms cancel), so levels are `μ(2n-2) ± 2t` shifts.
    #[test]
    fn one_by_two_levels() {
        let p = CouplingParams::new(1.0, 0.5, 0.3);
        let levels = dense_spectrum(&build_manybody_h(&spec(1, 2), &p).unwrap()).unwrap();
        // |00>: -2μ, |11>: 2μ, single-particle sector: ±2t
        let mut expected = vec![-0.6, 0.6, -2.0, 2.0];
        expected.sort_by(f64::total_cmp);
        assert!(linalg::sorted_deviation(&levels, &expected) < 1e-12, "{levels:?}");
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let s = spec(2, 5);
        let p = CouplingParams::new(0.7, 1.1, 0.4);
        let h = build_manybody_h(&s, &p).unwrap();
        let dense = dense_spectrum(&h).unwrap()[0];
        let lanczos = lanczos_ground(&h, 400).unwrap();
        assert!((dense - lanczos).abs() < 1e-9, "{dense} vs {lanczos}");
    }

    #[test]
    fn lanczos_above_dense_limit() {
        let s = spec(3, 4);
        let p = CouplingParams::sweet_spot(1.0);
        let e0 = ground_energy(&build_manybody_h(&s, &p).unwrap()).unwrap();
        let q = build_majorana(&s, &p).single_particle_spectrum().unwrap();
        assert!((e0 - q.ground_energy).abs() < 1e-9);
    }

    #[test]
    fn sweet_spot_multiplicities_are_even() {
        for (m, n) in [(2, 2), (3, 2), (2, 3)] {
            let levels = degeneracy_multiplicities(&spec(m, n), &CouplingParams::sweet_spot(1.0)).unwrap();
            assert!(levels.iter().all(|l| l.multiplicity % 2 == 0), "{m}x{n}: {levels:?}");
        }
        let report_only = degeneracy_multiplicities(&spec(1, 2), &CouplingParams::new(1.0, 0.2, 0.9)).unwrap();
        assert_eq!(report_only.iter().map(|l| l.multiplicity).sum::<usize>(), 4);
    }

    #[test]
    fn occupation_sums_reproduce_spectrum() {
        for (m, n, p) in [(2, 2, CouplingParams::new(0.3, -1.2, 0.8)), (3, 1, CouplingParams::new(1.0, 0.4, -0.5)), (1, 3, CouplingParams::new(-0.9, 0.6, 0.2))] {
            let check = occupation_consistency(&spec(m, n), &p).unwrap();
            assert!(check.max_deviation < 1e-8, "{m}x{n}: {}", check.max_deviation);
        }
    }

    #[test]
    fn edge_operator_commutes_with_h() {
        let s = spec(2, 2);
        let ops = site_operators(&s).unwrap();
        let h = manybody_h(&ops, &CouplingParams::sweet_spot(1.0));
        let d = ops.mode(&analytic_edge_operator(&s).unwrap());
        assert!(commutator_norm(&d, &h).unwrap() <= 1e-12);
        assert!(anticommutator_defect(&d, &d.adjoint(), &ops.identity()).unwrap() <= 1e-12);
    }

    #[test]
    fn bulk_modes_lower_energy_by_two_t() {
        let s = spec(3, 2);
        let ops = site_operators(&s).unwrap();
        let h = manybody_h(&ops, &CouplingParams::sweet_spot(1.5));
        for m in 1..3 {
            let d = ops.mode(&bulk_mode_operator(&s, m).unwrap());
            let (eps, residual) = ladder_energy(&h, &d).unwrap();
            assert!((eps - 3.0).abs() < 1e-12 && residual < 1e-12, "{eps} {residual}");
        }
    }
}

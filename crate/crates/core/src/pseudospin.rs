//! Edge pseudospins built from the two collective edge fermions `c_a`, `c_b`:
//!
//! ```text
//! s^x = ½ (c_a† c_b + c_b† c_a)     τ^x = ½ (c_b† c_a† + c_a c_b)
//! s^y = (c_a† c_b - c_b† c_a) / 2i  τ^y = (c_b† c_a† - c_a c_b) / 2i
//! s^z = ½ (n_a - n_b)               τ^z = ½ (n_b + n_a - 1)
//! ```
//!
//! and `J = s + τ`. With `a_edge`/`b_edge` from [`crate::fock::EdgeFock`],
//! `J^x = -(i/2) a_{A,0} b_{B,0}` is built from the two unpaired Majoranas.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{self, collective_edge_modes, site_operators, EdgeFock, FockOperator};
use crate::hamiltonian::CouplingParams;
use crate::lattice::LatticeSpec;
use crate::linalg::{self, CMatrix, C64};
use crate::tolerances;

/// `ε_{αβγ}` with `x, y, z = 0, 1, 2`.
pub const LEVI_CIVITA: [[[f64; 3]; 3]; 3] = [
    [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]],
    [[0.0, 0.0, -1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
    [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
];

const AXES: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Clone)]
pub struct PseudospinSet {
    pub s: [FockOperator; 3],
    pub tau: [FockOperator; 3],
    pub j: [FockOperator; 3],
}

fn half(x: C64) -> C64 {
    x * 0.5
}

impl PseudospinSet {
    /// Builds the nine operators from a pair of fermion annihilators.
    pub fn from_modes(ca: &FockOperator, cb: &FockOperator) -> Self {
        let dim = ca.dim();
        let cad = ca.adjoint();
        let cbd = cb.adjoint();
        let na = &cad * ca;
        let nb = &cbd * cb;
        let hop = &cad * cb;
        let hop_h = &cbd * ca;
        let pair = &cbd * &cad;
        let pair_h = ca * cb;
        let i = C64::new(0.0, 1.0);
        let s = [
            half(C64::new(1.0, 0.0)) * &(&hop + &hop_h),
            half(-i) * &(&hop - &hop_h),
            0.5 * &(&na - &nb),
        ];
        let tau = [
            half(C64::new(1.0, 0.0)) * &(&pair + &pair_h),
            half(-i) * &(&pair - &pair_h),
            0.5 * &(&(&nb + &na) - &FockOperator::identity(dim)),
        ];
        let j = [&s[0] + &tau[0], &s[1] + &tau[1], &s[2] + &tau[2]];
        Self { s, tau, j }
    }

    /// The 4x4 realization on `|1> = |Vac>`, `|2> = c_a†|Vac>`,
    /// `|3> = c_b†|Vac>`, `|4> = c_a† c_b†|Vac>`.
    pub fn two_mode() -> Self {
        let (ca, cb) = two_mode_annihilators();
        Self::from_modes(&ca, &cb)
    }

    /// Many-body embedding on the full occupation basis.
    pub fn fock(edges: &EdgeFock) -> Self {
        Self::from_modes(&edges.a_edge, &edges.b_edge)
    }

    pub fn dim(&self) -> usize {
        self.s[0].dim()
    }

    pub fn s_squared(&self) -> FockOperator {
        casimir(&self.s)
    }

    pub fn tau_squared(&self) -> FockOperator {
        casimir(&self.tau)
    }
}

fn casimir(ops: &[FockOperator; 3]) -> FockOperator {
    let sq: Vec<FockOperator> = ops.iter().map(|o| o * o).collect();
    &(&sq[0] + &sq[1]) + &sq[2]
}

/// `c_a`, `c_b` as 4x4 matrices on the two-mode basis.
pub fn two_mode_annihilators() -> (FockOperator, FockOperator) {
    let one = C64::new(1.0, 0.0);
    // c_a: |2> -> |1>, |4> = c_a† c_b† |1> -> |3>
    let ca = FockOperator::from_triplets(4, vec![(0, 1, one), (2, 3, one)]);
    // c_b: |3> -> |1>, |4> = -c_b† c_a† |1> -> -|2>
    let cb = FockOperator::from_triplets(4, vec![(0, 2, one), (1, 3, -one)]);
    (ca, cb)
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraReport {
    pub s_commutators: f64,
    pub tau_commutators: f64,
    pub j_commutators: f64,
    pub cross_commutators: f64,
    /// `‖s² + τ² - ¾‖_max`.
    pub casimir_defect: f64,
    pub hermiticity_defect: f64,
}

impl AlgebraReport {
    pub fn max_deviation(&self) -> f64 {
        [
            self.s_commutators,
            self.tau_commutators,
            self.j_commutators,
            self.cross_commutators,
            self.casimir_defect,
            self.hermiticity_defect,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn su2_defect(ops: &[FockOperator; 3], name: &str, tol: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let mut target = FockOperator::zero(ops[0].dim());
            for (c, op) in ops.iter().enumerate() {
                if LEVI_CIVITA[a][b][c] != 0.0 {
                    target = &target + &op.scale(C64::new(0.0, LEVI_CIVITA[a][b][c]));
                }
            }
            let comm = &(&ops[a] * &ops[b]) - &(&ops[b] * &ops[a]);
            let dev = (&comm - &target).max_abs();
            if dev > tol {
                return Err(Error::invariant(
                    "pseudospin.su2",
                    dev,
                    format!("[{name}^{}, {name}^{}] != i eps {name}", AXES[a], AXES[b]),
                ));
            }
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

/// Verifies the su(2) relations of `s`, `τ`, `J`, `[s^α, τ^β] = 0`,
/// Hermiticity, and `s² + τ² = ¾`, each within `tol`.
pub fn algebra_check(ps: &PseudospinSet, tol: f64) -> Result<AlgebraReport> {
    let s_commutators = su2_defect(&ps.s, "s", tol)?;
    let tau_commutators = su2_defect(&ps.tau, "tau", tol)?;
    let j_commutators = su2_defect(&ps.j, "J", tol)?;
    let mut cross_commutators: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let dev = fock::commutator_norm(&ps.s[a], &ps.tau[b])?;
            if dev > tol {
                return Err(Error::invariant("pseudospin.cross", dev, format!("[s^{}, tau^{}] != 0", AXES[a], AXES[b])));
            }
            cross_commutators = cross_commutators.max(dev);
        }
    }
    let hermiticity_defect = ps
        .s
        .iter()
        .chain(&ps.tau)
        .map(|o| (o - &o.adjoint()).max_abs())
        .fold(0.0, f64::max);
    if hermiticity_defect > tol {
        return Err(Error::invariant("pseudospin.hermiticity", hermiticity_defect, "s or tau not Hermitian"));
    }
    let total = &ps.s_squared() + &ps.tau_squared();
    let casimir_defect = (&total - &FockOperator::identity(ps.dim()).scale(C64::new(0.75, 0.0))).max_abs();
    if casimir_defect > tol {
        return Err(Error::invariant("pseudospin.casimir", casimir_defect, "s^2 + tau^2 != 3/4"));
    }
    Ok(AlgebraReport {
        s_commutators,
        tau_commutators,
        j_commutators,
        cross_commutators,
        casimir_defect,
        hermiticity_defect,
    })
}

/// Eigenvalues of `s^z, s², τ^z, τ²` on one two-mode basis state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumNumbers {
    pub state: usize,
    pub sz: f64,
    pub s2: f64,
    pub tau_z: f64,
    pub tau2: f64,
}

/// Quantum numbers of `|1>..|4>`; each basis state must be an eigenvector
/// of all four operators within `1e-12`.
pub fn basis_quantum_numbers(ps: &PseudospinSet) -> Result<Vec<QuantumNumbers>> {
    if ps.dim() != 4 {
        return Err(Error::Domain("quantum-number table needs the 4x4 realization".into()));
    }
    let ops = [ps.s[2].clone(), ps.s_squared(), ps.tau[2].clone(), ps.tau_squared()];
    (0..4)
        .map(|k| {
            let mut e = DVector::zeros(4);
            e[k] = C64::new(1.0, 0.0);
            let mut values = [0.0; 4];
            for (v, op) in values.iter_mut().zip(&ops) {
                let image = op.apply(&e);
                *v = image[k].re;
                let residual = (image - &e * C64::new(*v, 0.0)).norm();
                if residual > tolerances::OPERATOR_IDENTITY {
                    return Err(Error::invariant("pseudospin.basis_eigenstate", residual, format!("state |{}>", k + 1)));
                }
            }
            Ok(QuantumNumbers {
                state: k + 1,
                sz: values[0],
                s2: values[1],
                tau_z: values[2],
                tau2: values[3],
            })
        })
        .collect()
}

fn phase_fixed(mut v: DVector<C64>) -> DVector<C64> {
    let k = (0..v.len()).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap_or(0);
    let phase = v[k] / C64::new(v[k].norm(), 0.0);
    v /= phase;
    v
}

/// Particle-hole map on the two-mode space: the Hermitian involution that
/// swaps the `J^x` eigenvectors of the τ sector `{|1>, |4>}` with those of
/// the s sector `{|2>, |3>}`, so that `P⁻¹ s² P = τ²` and `[P, J^x] = 0`.
pub fn particle_hole_map(ps: &PseudospinSet) -> Result<CMatrix> {
    if ps.dim() != 4 {
        return Err(Error::Domain("particle-hole map is defined on the 4x4 realization".into()));
    }
    // J^x + 2 s² has four distinct eigenvalues: -½, ½ (τ sector), 1, 2 (s sector)
    let key = &ps.j[0] + &ps.s_squared().scale(C64::new(2.0, 0.0));
    let (_, vectors) = linalg::hermitian_eigh(&key.to_dense())?;
    let v: Vec<DVector<C64>> = (0..4).map(|k| phase_fixed(vectors.column(k).into_owned())).collect();
    let (tau_minus, tau_plus, s_minus, s_plus) = (&v[0], &v[1], &v[2], &v[3]);
    let p = s_minus * tau_minus.adjoint() + tau_minus * s_minus.adjoint() + s_plus * tau_plus.adjoint() + tau_plus * s_plus.adjoint();
    Ok(p)
}

#[derive(Debug, Clone, Serialize)]
pub struct ParticleHoleReport {
    /// `‖P⁻¹ s² P - τ²‖_max`.
    pub s2_to_tau2: f64,
    /// `‖[J^x, P]‖_max`.
    pub jx_commutator: f64,
    /// `‖P² - 1‖_max`.
    pub involution: f64,
    pub unitarity: f64,
}

pub fn particle_hole_report(ps: &PseudospinSet, p: &CMatrix) -> ParticleHoleReport {
    let pinv = p.adjoint();
    let s2 = ps.s_squared().to_dense();
    let tau2 = ps.tau_squared().to_dense();
    let jx = ps.j[0].to_dense();
    let id = CMatrix::identity(4, 4);
    ParticleHoleReport {
        s2_to_tau2: linalg::max_abs(&(&pinv * s2 * p - tau2)),
        jx_commutator: linalg::max_abs(&linalg::commutator(&jx, p)),
        involution: linalg::max_abs(&(p * p - &id)),
        unitarity: linalg::max_abs(&(&pinv * p - id)),
    }
}

/// Lifts a 4x4 operator on the two-mode basis to the full occupation basis,
/// acting as the identity on every other mode:
/// `X̂ = Σ_ij X_ij C_i E C_j†` with `C = (1, c_a†, c_b†, c_a† c_b†)` and
/// `E = (1 - n_a)(1 - n_b)`.
pub fn lift_two_mode(x: &CMatrix, edges: &EdgeFock) -> FockOperator {
    let dim = edges.dim();
    let id = FockOperator::identity(dim);
    let ad = edges.a_edge.adjoint();
    let bd = edges.b_edge.adjoint();
    let creators = [id.clone(), ad.clone(), bd.clone(), &ad * &bd];
    let na = &ad * &edges.a_edge;
    let nb = &bd * &edges.b_edge;
    let empty = &(&id - &na) * &(&id - &nb);
    let mut out = FockOperator::zero(dim);
    for i in 0..4 {
        let left = &creators[i] * &empty;
        for j in 0..4 {
            if x[(i, j)] != linalg::ZERO {
                let term = &left * &creators[j].adjoint();
                out = &out + &term.scale(x[(i, j)]);
            }
        }
    }
    out
}

/// One row of the eigenstate table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectationRow {
    pub energy: f64,
    pub jx: f64,
    pub s2: f64,
    pub tau2: f64,
    /// `J^x = ±½` with `<s²> = <τ²> = 3/8`.
    pub phi_flag: bool,
}

fn is_phi(jx: f64, s2: f64, tau2: f64) -> bool {
    let tol = tolerances::ORACLE_EXPECTATION;
    (jx.abs() - 0.5).abs() <= tol && (s2 - 0.375).abs() <= tol && (tau2 - 0.375).abs() <= tol
}

/// Eigenvectors of `op` compressed onto the orthonormal columns `basis`,
/// grouped into clusters of equal eigenvalue. With `invariant` set, fails
/// under that name when the span is not invariant under `op`.
fn resolve(op: &FockOperator, basis: &[DVector<C64>], invariant: Option<&'static str>) -> Result<Vec<(f64, Vec<DVector<C64>>)>> {
    let k = basis.len();
    let images: Vec<DVector<C64>> = basis.iter().map(|v| op.apply(v)).collect();
    let compressed = DMatrix::from_fn(k, k, |i, j| basis[i].dotc(&images[j]));
    let scale = 1.0 + op.max_abs();
    for (j, image) in images.iter().enumerate().filter(|_| invariant.is_some()) {
        let projected = basis.iter().enumerate().fold(DVector::zeros(image.len()), |acc, (i, b)| acc + b * compressed[(i, j)]);
        let leak = (image - projected).norm();
        if leak > tolerances::ORACLE_EXPECTATION * scale {
            return Err(Error::invariant(invariant.unwrap_or_default(), leak, "operator does not preserve the degenerate subspace"));
        }
    }
    let (values, rot) = linalg::hermitian_eigh(&compressed)?;
    let rotated: Vec<DVector<C64>> = (0..k)
        .map(|c| basis.iter().zip(rot.column(c).iter()).fold(DVector::zeros(basis[0].len()), |acc, (b, &w)| acc + b * w))
        .collect();
    Ok(linalg::cluster_sorted(&values, |v| tolerances::DEGENERACY_CLUSTER * (1.0 + v.abs()))
        .into_iter()
        .map(|r| (values[r.clone()].iter().sum::<f64>() / r.len() as f64, rotated[r].to_vec()))
        .collect())
}

/// Fixes a basis of a degenerate `(E, J^x)` sector by P parity.
///
/// The lifted P only acts on the edge modes, so its compression can vanish
/// on a sector; this happens when the sector joins an s-type state `A`
/// (`s² = ¾`) and a τ-type state `B` (`s² = 0`) that differ away from the
/// edges. The sector exchange `A <-> B` then plays the role of P, and its
/// eigenstates `(A ± B)/√2` are returned, with any unpaired states kept
/// in the `s²` eigenbasis.
fn resolve_sector(lifted_p: &FockOperator, s2: &FockOperator, sector: Vec<DVector<C64>>) -> Result<Vec<DVector<C64>>> {
    let p_groups = resolve(lifted_p, &sector, None)?;
    let p_acts = p_groups.len() > 1 || p_groups.first().is_some_and(|(v, _)| v.abs() > tolerances::ORACLE_EXPECTATION);
    if p_acts {
        return Ok(p_groups.into_iter().flat_map(|(_, v)| v).collect());
    }
    let tol = tolerances::ORACLE_EXPECTATION;
    let mut s_type = Vec::new();
    let mut tau_type = Vec::new();
    let mut rest = Vec::new();
    for (value, vectors) in resolve(s2, &sector, None)? {
        if (value - 0.75).abs() <= tol {
            s_type.extend(vectors);
        } else if value.abs() <= tol {
            tau_type.extend(vectors);
        } else {
            rest.extend(vectors);
        }
    }
    let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let paired = s_type.len().min(tau_type.len());
    let mut out = Vec::with_capacity(sector.len());
    for (a, b) in s_type.iter().zip(&tau_type) {
        out.push((a + b) * r);
        out.push((a - b) * r);
    }
    out.extend(s_type.into_iter().skip(paired));
    out.extend(tau_type.into_iter().skip(paired));
    out.extend(rest);
    Ok(out)
}

/// Resolves every eigenstate of `H` by energy, then `J^x`, then the
/// compression of the lifted particle-hole map, and reports `J^x`, `<s²>`, `<τ²>` per state.
pub fn eigenstate_expectations(spec: &LatticeSpec, p: &CouplingParams) -> Result<Vec<ExpectationRow>> {
    let ops = site_operators(spec)?;
    let edges = collective_edge_modes(&ops)?;
    let h = fock::manybody_h(&ops, p);
    let ps = PseudospinSet::fock(&edges);
    let s2 = ps.s_squared();
    let tau2 = ps.tau_squared();
    let lifted_p = lift_two_mode(&particle_hole_map(&PseudospinSet::two_mode())?, &edges);
    let (energies, vectors) = fock::dense_eigensystem(&h)?;
    let mut rows = Vec::with_capacity(energies.len());
    for range in linalg::cluster_sorted(&energies, |e| tolerances::DEGENERACY_CLUSTER * (1.0 + e.abs())) {
        let energy = energies[range.clone()].iter().sum::<f64>() / range.len() as f64;
        let cluster: Vec<DVector<C64>> = range.map(|k| vectors.column(k).map(|x| C64::new(x, 0.0))).collect();
        for (jx, sector) in resolve(&ps.j[0], &cluster, Some("eigenstate_expectations.jx"))? {
            let states = if sector.len() > 1 { resolve_sector(&lifted_p, &s2, sector)? } else { sector };
            for v in states {
                let e_s2 = s2.matrix_element(&v, &v).re;
                let e_tau2 = tau2.matrix_element(&v, &v).re;
                rows.push(ExpectationRow {
                    energy,
                    jx,
                    s2: e_s2,
                    tau2: e_tau2,
                    phi_flag: is_phi(jx, e_s2, e_tau2),
                });
            }
        }
    }
    Ok(rows)
}

/// `Φ̃± = (|0>_s |→/←>_τ + |→/←>_s |0>_τ) / √2` on the two-mode space, with
/// `|→>`, `|←>` the `±½` eigenvectors of `τ^x` and `s^x`.
pub fn phi_tilde(ps: &PseudospinSet) -> Result<[DVector<C64>; 2]> {
    if ps.dim() != 4 {
        return Err(Error::Domain("phi-tilde states live on the 4x4 realization".into()));
    }
    let sector_eigvec = |op: &FockOperator, support: [usize; 2], value: f64| -> Result<DVector<C64>> {
        let sub = DMatrix::from_fn(2, 2, |i, j| op.get(support[i], support[j]));
        let (vals, vecs) = linalg::hermitian_eigh(&sub)?;
        let k = if value > 0.0 { 1 } else { 0 };
        if (vals[k] - value).abs() > tolerances::OPERATOR_IDENTITY {
            return Err(Error::invariant("phi_tilde.eigenvalue", (vals[k] - value).abs(), "unexpected spin-1/2 eigenvalue"));
        }
        let mut out = DVector::zeros(4);
        out[support[0]] = vecs[(0, k)];
        out[support[1]] = vecs[(1, k)];
        Ok(phase_fixed(out))
    };
    let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus = (sector_eigvec(&ps.tau[0], [0, 3], 0.5)? + sector_eigvec(&ps.s[0], [1, 2], 0.5)?) * r;
    let minus = (sector_eigvec(&ps.tau[0], [0, 3], -0.5)? + sector_eigvec(&ps.s[0], [1, 2], -0.5)?) * r;
    Ok([plus, minus])
}

/// Entanglement entropy between the s and τ factors of a two-mode state,
/// using `|1> = |0>_s|↓>_τ`, `|4> = |0>_s|↑>_τ`, `|2> = |↑>_s|0>_τ`,
/// `|3> = |↓>_s|0>_τ` in the 3x3 product space.
pub fn factor_entropy(psi: &DVector<C64>) -> f64 {
    // rows: s ∈ {0, ↑, ↓}; columns: τ ∈ {0, ↑, ↓}
    let mut m = CMatrix::zeros(3, 3);
    m[(0, 2)] = psi[0];
    m[(0, 1)] = psi[3];
    m[(1, 0)] = psi[1];
    m[(2, 0)] = psi[2];
    let weights: Vec<f64> = m.singular_values().iter().map(|s| s * s).collect();
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiTildeSummary {
    pub jx: f64,
    pub jx_residual: f64,
    pub s2: f64,
    pub tau2: f64,
    pub factor_entropy: f64,
}

pub fn phi_tilde_summary(ps: &PseudospinSet) -> Result<[PhiTildeSummary; 2]> {
    let states = phi_tilde(ps)?;
    let s2 = ps.s_squared();
    let tau2 = ps.tau_squared();
    let summarize = |v: &DVector<C64>| {
        let jx = ps.j[0].matrix_element(v, v).re;
        PhiTildeSummary {
            jx,
            jx_residual: (ps.j[0].apply(v) - v * C64::new(jx, 0.0)).norm(),
            s2: s2.matrix_element(v, v).re,
            tau2: tau2.matrix_element(v, v).re,
            factor_entropy: factor_entropy(v),
        }
    };
    Ok([summarize(&states[0]), summarize(&states[1])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{commutator_norm, manybody_h, two_mode_basis};
    use std::f64::consts::LN_2;

    fn basis(k: usize) -> DVector<C64> {
        let mut e = DVector::zeros(4);
        e[k] = C64::new(1.0, 0.0);
        e
    }

    #[test]
    fn levi_civita_is_antisymmetric() {
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(LEVI_CIVITA[a][b][c], -LEVI_CIVITA[b][a][c]);
                    assert_eq!(LEVI_CIVITA[a][b][c], LEVI_CIVITA[b][c][a]);
                }
            }
        }
        assert_eq!(LEVI_CIVITA[0][1][2], 1.0);
    }

    #[test]
    fn two_mode_matrices() {
        let ps = PseudospinSet::two_mode();
        let sz = ps.s[2].to_dense();
        let tz = ps.tau[2].to_dense();
        let diag = |m: &CMatrix| (0..4).map(|k| m[(k, k)].re).collect::<Vec<_>>();
        assert_eq!(diag(&sz), vec![0.0, 0.5, -0.5, 0.0]);
        assert_eq!(diag(&tz), vec![-0.5, 0.0, 0.0, 0.5]);
        let sx = ps.s[0].to_dense();
        assert_eq!(sx[(1, 2)], C64::new(0.5, 0.0));
        assert_eq!(sx[(2, 1)], C64::new(0.5, 0.0));
        let tx = ps.tau[0].to_dense();
        assert_eq!(tx[(3, 0)], C64::new(-0.5, 0.0));
        // s acts only within {|2>,|3>}, tau only within {|1>,|4>}
        for op in &ps.s {
            for (r, c, _) in op.triplets() {
                assert!((1..=2).contains(&r) && (1..=2).contains(&c));
            }
        }
        for op in &ps.tau {
            for (r, c, _) in op.triplets() {
                assert!([0, 3].contains(&r) && [0, 3].contains(&c));
            }
        }
    }

    #[test]
    fn two_mode_basis_relations() {
        let ps = PseudospinSet::two_mode();
        let half = C64::new(0.5, 0.0);
        assert_eq!(ps.s[2].apply(&basis(1)), basis(1) * half);
        assert_eq!(ps.s[2].apply(&basis(2)), basis(2) * -half);
        assert_eq!(ps.tau[2].apply(&basis(3)), basis(3) * half);
        assert_eq!(ps.tau[2].apply(&basis(0)), basis(0) * -half);
        assert_eq!(ps.s_squared().apply(&basis(0)).norm(), 0.0);
        assert_eq!(ps.tau_squared().apply(&basis(1)).norm(), 0.0);
    }

    #[test]
    fn algebra_on_two_mode_space() {
        let r = algebra_check(&PseudospinSet::two_mode(), 1e-12).unwrap();
        assert!(r.max_deviation() <= 1e-12);
    }

    #[test]
    fn algebra_in_fock_embedding() {
        let ops = site_operators(&LatticeSpec::new(2, 2).unwrap()).unwrap();
        let ps = PseudospinSet::fock(&collective_edge_modes(&ops).unwrap());
        assert!(algebra_check(&ps, 1e-10).unwrap().max_deviation() <= 1e-10);
    }

    #[test]
    fn broken_set_names_failing_triple() {
        let mut ps = PseudospinSet::two_mode();
        ps.s[2] = ps.s[2].scale(C64::new(2.0, 0.0));
        match algebra_check(&ps, 1e-12) {
            Err(Error::Invariant { invariant, detail, .. }) => {
                assert_eq!(invariant, "pseudospin.su2");
                assert!(detail.contains("[s^"), "{detail}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quantum_number_table() {
        let table = basis_quantum_numbers(&PseudospinSet::two_mode()).unwrap();
        let expected = [(0.0, 0.0, -0.5, 0.75), (0.5, 0.75, 0.0, 0.0), (-0.5, 0.75, 0.0, 0.0), (0.0, 0.0, 0.5, 0.75)];
        for (q, e) in table.iter().zip(expected) {
            assert_eq!((q.sz, q.s2, q.tau_z, q.tau2), e);
        }
    }

    #[test]
    fn particle_hole_identities() {
        let ps = PseudospinSet::two_mode();
        let p = particle_hole_map(&ps).unwrap();
        let r = particle_hole_report(&ps, &p);
        assert!(r.s2_to_tau2 <= 1e-12);
        assert!(r.jx_commutator <= 1e-12);
        assert!(r.involution <= 1e-12);
        assert!(r.unitarity <= 1e-12);
        // P exchanges the sectors
        for k in [0, 3] {
            let image = &p * basis(k);
            assert!(image[0].norm() < 1e-12 && image[3].norm() < 1e-12);
        }
    }

    #[test]
    fn lift_reproduces_direct_embedding() {
        let ops = site_operators(&LatticeSpec::new(2, 2).unwrap()).unwrap();
        let edges = collective_edge_modes(&ops).unwrap();
        let small = PseudospinSet::two_mode();
        let big = PseudospinSet::fock(&edges);
        for a in 0..3 {
            let lifted = lift_two_mode(&small.s[a].to_dense(), &edges);
            assert!((&lifted - &big.s[a]).max_abs() < 1e-12);
            let lifted = lift_two_mode(&small.tau[a].to_dense(), &edges);
            assert!((&lifted - &big.tau[a]).max_abs() < 1e-12);
        }
        let b = two_mode_basis(&edges);
        let lifted_p = lift_two_mode(&particle_hole_map(&small).unwrap(), &edges);
        let p4 = particle_hole_map(&small).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((lifted_p.matrix_element(&b[i], &b[j]) - p4[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn jx_is_conserved() {
        for (m, n) in [(2, 2), (3, 2), (2, 3), (2, 1)] {
            let ops = site_operators(&LatticeSpec::new(m, n).unwrap()).unwrap();
            let ps = PseudospinSet::fock(&collective_edge_modes(&ops).unwrap());
            let h = manybody_h(&ops, &CouplingParams::sweet_spot(1.0));
            assert!(commutator_norm(&ps.j[0], &h).unwrap() <= 1e-12, "{m}x{n}");
        }
    }

    #[test]
    fn ground_cluster_has_both_jx_signs() {
        let rows = eigenstate_expectations(&LatticeSpec::new(2, 2).unwrap(), &CouplingParams::sweet_spot(1.0)).unwrap();
        assert_eq!(rows.len(), 16);
        let e0 = rows[0].energy;
        let ground: Vec<_> = rows.iter().filter(|r| (r.energy - e0).abs() < 1e-8).collect();
        assert!(ground.iter().any(|r| (r.jx - 0.5).abs() < 1e-8));
        assert!(ground.iter().any(|r| (r.jx + 0.5).abs() < 1e-8));
    }

    #[test]
    fn phi_states_exist_at_two_by_two() {
        let rows = eigenstate_expectations(&LatticeSpec::new(2, 2).unwrap(), &CouplingParams::sweet_spot(1.0)).unwrap();
        let flagged: Vec<_> = rows.iter().filter(|r| r.phi_flag).collect();
        assert!(flagged.iter().any(|r| r.jx > 0.0) && flagged.iter().any(|r| r.jx < 0.0), "{rows:#?}");
        for r in flagged {
            assert!((r.s2 - 0.375).abs() <= 1e-8 && (r.tau2 - 0.375).abs() <= 1e-8);
        }
    }

    #[test]
    fn phi_tilde_values() {
        let ps = PseudospinSet::two_mode();
        let [plus, minus] = phi_tilde_summary(&ps).unwrap();
        for (s, jx) in [(plus, 0.5), (minus, -0.5)] {
            assert!((s.jx - jx).abs() <= 1e-12);
            assert!(s.jx_residual <= 1e-12);
            assert!((s.s2 - 0.375).abs() <= 1e-12);
            assert!((s.tau2 - 0.375).abs() <= 1e-12);
            assert!((s.factor_entropy - LN_2).abs() <= 1e-12);
        }
    }

    #[test]
    fn basis_states_are_factor_products() {
        for k in 0..4 {
            assert!(factor_entropy(&basis(k)).abs() < 1e-15);
        }
    }
}

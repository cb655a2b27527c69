use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{anticommutator_defect, dense_eigensystem, manybody_h, site_operators, FockOperator, ManyBodyState, SiteOperators};
use crate::edge::{analytic_edge_operator, bulk_mode_operator, edge_assignment, EdgeAssignment};
use crate::error::{Error, Result};
use crate::hamiltonian::CouplingParams;
use crate::lattice::LatticeSpec;
use crate::linalg::{self, C64};
use crate::tolerances;

/// Collective `K = 0` fermions `c_{row,0} = N^{-1/2} Σ_n c_{row,n}` on the
/// two edge rows. `a_edge` is the row whose A-flavor Majorana is unpaired,
/// `b_edge` the row whose B-flavor Majorana is unpaired; `d_M` pairs them.
#[derive(Debug, Clone)]
pub struct EdgeFock {
    pub rows: EdgeAssignment,
    pub a_edge: FockOperator,
    pub b_edge: FockOperator,
}

impl EdgeFock {
    pub fn dim(&self) -> usize {
        self.a_edge.dim()
    }
}

fn collective(ops: &SiteOperators, row: usize) -> FockOperator {
    let cols = ops.spec.cols();
    let norm = C64::new(1.0 / (cols as f64).sqrt(), 0.0);
    let mut triplets = Vec::new();
    for n in 0..cols {
        let site = (row - 1) * cols + n;
        triplets.extend(ops.c[site].triplets().map(|(r, c, v)| (r, c, v * norm)));
    }
    FockOperator::from_triplets(ops.dim(), triplets)
}

/// Builds and CAR-checks the two collective edge fermions. Needs `M >= 2`.
pub fn collective_edge_modes(ops: &SiteOperators) -> Result<EdgeFock> {
    let spec = ops.spec;
    if spec.rows() < 2 {
        return Err(Error::Domain(format!("two distinct edges need at least 2 rows, got {}", spec.rows())));
    }
    let rows = edge_assignment(&spec)?;
    let a_edge = collective(ops, rows.a_row);
    let b_edge = collective(ops, rows.b_row);
    let id = ops.identity();
    let zero = FockOperator::zero(ops.dim());
    let defect = [
        anticommutator_defect(&a_edge, &a_edge.adjoint(), &id)?,
        anticommutator_defect(&b_edge, &b_edge.adjoint(), &id)?,
        anticommutator_defect(&a_edge, &b_edge, &zero)?,
        anticommutator_defect(&a_edge, &b_edge.adjoint(), &zero)?,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if defect > tolerances::OPERATOR_IDENTITY {
        return Err(Error::invariant("collective_edge_modes.car", defect, format!("{}x{}", spec.rows(), spec.cols())));
    }
    Ok(EdgeFock { rows, a_edge, b_edge })
}

/// `|1> = |Vac>`, `|2> = c_a†|Vac>`, `|3> = c_b†|Vac>`, `|4> = c_a† c_b†|Vac>`.
pub fn two_mode_basis(edges: &EdgeFock) -> [DVector<C64>; 4] {
    let mut vac = DVector::zeros(edges.dim());
    vac[0] = C64::new(1.0, 0.0);
    let ad = edges.a_edge.adjoint();
    let bd = edges.b_edge.adjoint();
    let two = ad.apply(&vac);
    let three = bd.apply(&vac);
    let four = ad.apply(&three);
    [vac, two, three, four]
}

/// Entanglement entropy between the two collective edge modes of a state
/// supported on the two-mode subspace above `|Vac>`.
///
/// The coefficients `ψ_{n_a n_b}` form a 2x2 matrix whose squared singular
/// values are the Schmidt weights.
pub fn two_mode_entropy(state: &DVector<C64>, edges: &EdgeFock) -> Result<f64> {
    let basis = two_mode_basis(edges);
    let coeffs: Vec<C64> = basis.iter().map(|b| b.dotc(state)).collect();
    let inside: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let outside = (state.norm_squared() - inside).abs();
    if outside > 1e-12 {
        return Err(Error::invariant("two_mode_entropy.support", outside, "state leaves the edge two-mode subspace"));
    }
    let m = DMatrix::from_row_slice(2, 2, &[coeffs[0], coeffs[2], coeffs[1], coeffs[3]]);
    let weights = m.singular_values();
    let total: f64 = weights.iter().map(|s| s * s).sum();
    Ok(weights
        .iter()
        .map(|s| s * s / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum())
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgePairStates {
    #[serde(skip)]
    pub hole: ManyBodyState,
    #[serde(skip)]
    pub particle: ManyBodyState,
    pub hole_entropy: f64,
    pub particle_entropy: f64,
    /// `‖d_M |M-Vac>‖`.
    pub annihilation_residual: f64,
    /// Distance between `d_M† |M-Vac>` and `(1 + c_b† c_a†)|Vac> / √2`.
    pub particle_formula_deviation: f64,
}

/// `|M-Vac> = (c_a† - c_b†)|Vac> / √2` and its partner `d_M† |M-Vac>`.
pub fn edge_pair_states(spec: &LatticeSpec) -> Result<EdgePairStates> {
    let ops = site_operators(spec)?;
    let edges = collective_edge_modes(&ops)?;
    let d = ops.mode(&analytic_edge_operator(spec)?);
    let [vac, two, three, four] = two_mode_basis(&edges);
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let hole = ManyBodyState::normalized((&two - &three) * s)?;
    let annihilation_residual = d.apply(&hole.amplitudes).norm();
    let particle = ManyBodyState::normalized(d.adjoint().apply(&hole.amplitudes))?;
    // c_b† c_a† |Vac> = -|4>
    let formula = (&vac - &four) * s;
    let particle_formula_deviation = (&particle.amplitudes - &formula).norm();
    Ok(EdgePairStates {
        hole_entropy: two_mode_entropy(&hole.amplitudes, &edges)?,
        particle_entropy: two_mode_entropy(&particle.amplitudes, &edges)?,
        hole,
        particle,
        annihilation_residual,
        particle_formula_deviation,
    })
}

#[derive(Debug, Clone)]
pub struct DVacuum {
    pub state: ManyBodyState,
    /// Normalization `Λ` of `Λ Π_j d_j |Vac>`.
    pub lambda: f64,
    /// `max_j ‖d_j |d-Vac>‖`.
    pub max_residual: f64,
}

/// Common vacuum of the bulk `K = 0` modes `d_1..d_{M-1}`.
pub fn d_vacuum(spec: &LatticeSpec) -> Result<DVacuum> {
    let ops = site_operators(spec)?;
    let modes = (1..spec.rows()).map(|m| Ok(ops.mode(&bulk_mode_operator(spec, m)?))).collect::<Result<Vec<_>>>()?;
    let mut v = ops.vacuum();
    for d in &modes {
        v = d.apply(&v);
    }
    let norm = v.norm();
    let state = ManyBodyState::normalized(v)?;
    let max_residual = modes.iter().map(|d| d.apply(&state.amplitudes).norm()).fold(0.0, f64::max);
    Ok(DVacuum {
        state,
        lambda: 1.0 / norm,
        max_residual,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingReport {
    /// Eigenstates annihilated by `d_M` that were examined.
    pub checked: usize,
    /// `max |‖d_M† ψ‖ - 1|`.
    pub max_norm_defect: f64,
    /// `max ‖H φ - E φ‖` for `φ = d_M† ψ`.
    pub max_energy_defect: f64,
}

/// For every eigenstate `ψ` with `d_M ψ = 0` (resolved inside each
/// degenerate cluster), checks that `d_M† ψ` is a normalized eigenstate of
/// the same energy.
pub fn pairing_check(spec: &LatticeSpec, p: &CouplingParams) -> Result<PairingReport> {
    let ops = site_operators(spec)?;
    let h = manybody_h(&ops, p);
    let d = ops.mode(&analytic_edge_operator(spec)?);
    let dd = d.adjoint();
    let occupation = &dd * &d;
    let (energies, vectors) = dense_eigensystem(&h)?;
    let mut report = PairingReport {
        checked: 0,
        max_norm_defect: 0.0,
        max_energy_defect: 0.0,
    };
    for range in linalg::cluster_sorted(&energies, |e| tolerances::DEGENERACY_CLUSTER * (1.0 + e.abs())) {
        let cols: Vec<DVector<C64>> = range.clone().map(|k| vectors.column(k).map(|x| C64::new(x, 0.0))).collect();
        let k = cols.len();
        let compressed = DMatrix::from_fn(k, k, |i, j| occupation.matrix_element(&cols[i], &cols[j]));
        let (occ, rot) = linalg::hermitian_eigh(&compressed)?;
        let energy = energies[range.clone()].iter().sum::<f64>() / k as f64;
        for (idx, &n) in occ.iter().enumerate() {
            if n.abs() > tolerances::ORACLE_EXPECTATION {
                continue;
            }
            let psi = cols.iter().zip(rot.column(idx).iter()).fold(DVector::zeros(h.dim()), |acc, (c, &w)| acc + c * w);
            let phi = dd.apply(&psi);
            let hphi = h.apply(&phi);
            report.checked += 1;
            report.max_norm_defect = report.max_norm_defect.max((phi.norm() - 1.0).abs());
            report.max_energy_defect = report.max_energy_defect.max((hphi - &phi * C64::new(energy, 0.0)).norm());
        }
    }
    Ok(report)
}

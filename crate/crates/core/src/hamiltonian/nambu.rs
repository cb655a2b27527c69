use serde::Serialize;

use super::CouplingParams;
use crate::lattice::LatticeSpec;
use crate::linalg::{self, CMatrix, C64};

/// Bogoliubov-de Gennes matrix in the basis `(c_1..c_L, c_1†..c_L†)`.
///
/// `H = Σ h_ij c_i† c_j + ½ Σ (D_ij c_i† c_j† + h.c.) + constant`
/// and, equivalently, `H = ½ Ψ† H_BdG Ψ + bdg_offset()` with
/// `H_BdG = [[h, D], [D†, -hᵀ]]`.
#[derive(Debug, Clone, Serialize)]
pub struct NambuForm {
    pub spec: LatticeSpec,
    #[serde(skip)]
    pub matrix: CMatrix,
    /// Constant term accompanying the normal-ordered quadratic form (`-μ` per site).
    pub offset: f64,
}

impl NambuForm {
    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// Constant `C` in `H = ½ Ψ† H_BdG Ψ + C`, i.e. `offset + ½ tr h`.
    pub fn bdg_offset(&self) -> f64 {
        let l = self.modes();
        let trace: f64 = (0..l).map(|i| self.matrix[(i, i)].re).sum();
        self.offset + 0.5 * trace
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::max_abs(&(&self.matrix - self.matrix.adjoint()))
    }
}

/// Nambu form of
/// `H = -t Σ c_r† c_{r+a} - Δ Σ c_r c_{r+a} + h.c. + μ Σ (2 c_r† c_r - 1)`.
pub fn build_nambu(spec: &LatticeSpec, p: &CouplingParams) -> NambuForm {
    let l = spec.sites();
    let mut h = CMatrix::zeros(l, l);
    let mut d = CMatrix::zeros(l, l);
    for site in 0..l {
        h[(site, site)] += C64::new(2.0 * p.mu, 0.0);
    }
    for bond in spec.bonds() {
        let (r, s) = (bond.from, bond.to);
        h[(r, s)] -= C64::new(p.t, 0.0);
        h[(s, r)] -= C64::new(p.t, 0.0);
        // -Δ c_s† c_r† = ½ (D_rs c_r† c_s† + D_sr c_s† c_r†) with D antisymmetric.
        d[(r, s)] += C64::new(p.delta, 0.0);
        d[(s, r)] -= C64::new(p.delta, 0.0);
    }
    let mut m = CMatrix::zeros(2 * l, 2 * l);
    m.view_mut((0, 0), (l, l)).copy_from(&h);
    m.view_mut((0, l), (l, l)).copy_from(&d);
    m.view_mut((l, 0), (l, l)).copy_from(&d.adjoint());
    m.view_mut((l, l), (l, l)).copy_from(&(-h.transpose()));
    NambuForm {
        spec: *spec,
        matrix: m,
        offset: -p.mu * l as f64,
    }
}

use serde::Serialize;

use super::CouplingParams;
use crate::lattice::LatticeSpec;
use crate::linalg::{self, RMatrix};

/// Real antisymmetric coupling matrix `A` with `H = (i/4) γᵀ A γ + offset`.
///
/// `γ` is ordered per lattice site as `(a, b)`, sites row-major.
#[derive(Debug, Clone, Serialize)]
pub struct MajoranaForm {
    pub spec: LatticeSpec,
    #[serde(skip)]
    pub matrix: RMatrix,
    /// Constant left over from self-closing bonds (only non-zero when `N = 1`).
    pub offset: f64,
}

impl MajoranaForm {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn spectral_norm(&self) -> f64 {
        linalg::spectral_norm(&self.matrix)
    }

    /// `max |A + Aᵀ|`; zero for every form produced by [`build_majorana`].
    pub fn antisymmetry_defect(&self) -> f64 {
        linalg::max_abs_real(&(&self.matrix + self.matrix.transpose()))
    }
}

fn add_pair(a: &mut RMatrix, j: usize, k: usize, w: f64) {
    a[(j, k)] += w;
    a[(k, j)] -= w;
}

/// Majorana representation of the square-lattice Kitaev Hamiltonian.
///
/// Per site `r` and bond `r -> s = r + a`, with `c = (a - i b)/2`:
///
/// ```text
/// μ(2c†c - 1)                    = -i μ a_r b_r
/// -t(c_r† c_s + h.c.)             = (i t / 2)(a_r b_s - b_r a_s)
/// -Δ(c_r c_s + h.c.)              = (i Δ / 2)(a_r b_s + b_r a_s)
/// ```
///
/// so `A[a_r, b_r] = -2μ`, `A[a_r, b_s] += t + Δ`, `A[b_r, a_s] += Δ - t`.
pub fn build_majorana(spec: &LatticeSpec, p: &CouplingParams) -> MajoranaForm {
    let dim = spec.majoranas();
    let mut a = RMatrix::zeros(dim, dim);
    let mut offset = 0.0;
    for site in 0..spec.sites() {
        add_pair(&mut a, 2 * site, 2 * site + 1, -2.0 * p.mu);
    }
    for bond in spec.bonds() {
        let (r, s) = (bond.from, bond.to);
        add_pair(&mut a, 2 * r, 2 * s + 1, p.t + p.delta);
        add_pair(&mut a, 2 * r + 1, 2 * s, p.delta - p.t);
        if r == s {
            // c†c + c†c = 1 - i a b: the constant the bilinear identity drops.
            offset -= p.t;
        }
    }
    MajoranaForm {
        spec: *spec,
        matrix: a,
        offset,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::brick_wall_edges;

    #[test]
    fn zero_couplings_give_zero_matrix() {
        let spec = LatticeSpec::new(3, 4).unwrap();
        let f = build_majorana(&spec, &CouplingParams::new(0.0, 0.0, 0.0));
        assert!(f.matrix.iter().all(|&x| x == 0.0));
        assert_eq!(f.offset, 0.0);
    }

    #[test]
    fn single_site_onsite_block() {
        let spec = LatticeSpec::new(1, 1).unwrap();
        let f = build_majorana(&spec, &CouplingParams::new(0.0, 0.0, 1.0));
        assert_eq!(f.matrix, RMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]));
    }

    #[test]
    fn sweet_spot_sparsity_is_brick_wall() {
        for (rows, cols) in [(3, 4), (2, 2), (1, 3), (4, 5)] {
            let spec = LatticeSpec::new(rows, cols).unwrap();
            for scale in [0.5, 1.0, -2.0] {
                let f = build_majorana(&spec, &CouplingParams::sweet_spot(scale));
                let mut expected = RMatrix::zeros(f.dim(), f.dim());
                for e in brick_wall_edges(&spec) {
                    expected[(e.a_index(), e.b_index())] = 1.0;
                    expected[(e.b_index(), e.a_index())] = 1.0;
                }
                let pattern = f.matrix.map(|x| if x != 0.0 { 1.0 } else { 0.0 });
                assert_eq!(pattern, expected, "{rows}x{cols} at {scale}");
            }
        }
    }

    #[test]
    fn self_closing_bond_cancels_onsite_at_sweet_spot() {
        let spec = LatticeSpec::new(2, 1).unwrap();
        let f = build_majorana(&spec, &CouplingParams::sweet_spot(1.0));
        assert_eq!(f.matrix[(0, 1)], 0.0);
        assert_eq!(f.matrix[(0, 3)], 2.0);
        assert_eq!(f.offset, -2.0);
    }

    proptest::proptest! {
        #[test]
        fn exactly_antisymmetric(rows in 1usize..5, cols in 1usize..5,
                                 t in -2.0f64..2.0, d in -2.0f64..2.0, mu in -2.0f64..2.0) {
            let spec = LatticeSpec::new(rows, cols).unwrap();
            let f = build_majorana(&spec, &CouplingParams::new(t, d, mu));
            proptest::prop_assert_eq!(f.antisymmetry_defect(), 0.0);
        }
    }
}

use kitaev_cylinder::edge::{analytic_edge_operator, detect_zero_modes};
use kitaev_cylinder::fock::{self, commutator_norm, site_operators};
use kitaev_cylinder::fourier::verify_block_decomposition;
use kitaev_cylinder::hamiltonian::{build_majorana, representation_equivalence};
use kitaev_cylinder::{CouplingParams, LatticeSpec};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = CouplingParams> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(t, d, mu)| CouplingParams::new(t, d, mu))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fourier_blocks_reassemble(m in 1usize..5, n in 1usize..6, p in params()) {
        let spec = LatticeSpec::new(m, n).unwrap();
        let r = verify_block_decomposition(&spec, &p).unwrap();
        let scale = 1.0 + 4.0 * (p.t.abs() + p.delta.abs() + p.mu.abs());
        prop_assert!(r.off_block_max <= 1e-10 * scale);
        prop_assert!(r.spectrum_deviation <= 1e-10 * scale);
    }

    #[test]
    fn representations_agree(m in 1usize..5, n in 1usize..5, p in params()) {
        let spec = LatticeSpec::new(m, n).unwrap();
        prop_assert!(representation_equivalence(&spec, &p).is_ok());
    }

    #[test]
    fn sweet_spot_modes_at_any_scale(m in 2usize..7, n in 1usize..7, scale in 0.1..3.0f64) {
        let spec = LatticeSpec::new(m, n).unwrap();
        let r = detect_zero_modes(&build_majorana(&spec, &CouplingParams::sweet_spot(scale)), None).unwrap();
        prop_assert_eq!(r.count, 2);
        prop_assert!(r.max_interior_weight() < 1e-10);
        prop_assert!(r.gap > 1e-3 * scale);
    }

    #[test]
    fn quadratic_ground_energy_matches_oracle(m in 1usize..4, n in 1usize..4, p in params()) {
        let spec = LatticeSpec::new(m, n).unwrap();
        let check = fock::occupation_consistency(&spec, &p).unwrap();
        prop_assert!(check.max_deviation <= 1e-8);
    }

    #[test]
    fn edge_mode_commutes_only_at_sweet_spot(mu in 0.5..1.5f64) {
        let spec = LatticeSpec::new(2, 3).unwrap();
        let ops = site_operators(&spec).unwrap();
        let d = ops.mode(&analytic_edge_operator(&spec).unwrap());
        let h = fock::manybody_h(&ops, &CouplingParams::new(1.0, 1.0, mu));
        let c = commutator_norm(&d, &h).unwrap();
        prop_assert!((c <= 1e-12) == ((mu - 1.0).abs() < 1e-12) || (mu - 1.0).abs() < 1e-6);
    }
}

//! Invariants over random diagrams, matrices and bases.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use diagramless::checks::{d_squared, euler_matches_bracket, grading_shift, psi_commutes, sign_rules_agree};
use diagramless::complex::snf::{determinant, from_i64, invariant_factors};
use diagramless::complex::homology::homology_shuffled;
use diagramless::complex::{homology, khovanov_complex, GradingScheme};
use diagramless::generate::random_diagram;
use diagramless::states::enumerate_states;
use diagramless::surface::{build_state_surface, cycle_basis, goeritz_matrix, random_cycle_basis, signature};
use diagramless::{parse_pd, EnhancedState, LinkDiagram, MarkerVector, SignRule};
use num_bigint::BigInt;
use num_traits::Signed;

fn diagram(seed: u64, k: usize) -> LinkDiagram {
    random_diagram(&mut StdRng::seed_from_u64(seed), k)
}

const NORMALIZED: GradingScheme = GradingScheme::Khovanov { normalized: true };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pd_round_trips(seed in any::<u64>(), k in 1usize..=7) {
        let d = diagram(seed, k);
        prop_assert_eq!(parse_pd(&d.to_pd()).unwrap(), d);
    }

    #[test]
    fn differential_squares_to_zero(seed in any::<u64>(), k in 1usize..=6) {
        prop_assert!(d_squared(&diagram(seed, k)).unwrap());
    }

    #[test]
    fn edges_shift_only_the_homological_grading(seed in any::<u64>(), k in 1usize..=5, alpha in any::<bool>()) {
        let rule = if alpha { SignRule::Alpha } else { SignRule::Sigma };
        prop_assert!(grading_shift(&diagram(seed, k), rule).unwrap());
    }

    #[test]
    fn relabelling_commutes(seed in any::<u64>(), k in 2usize..=5) {
        let d = diagram(seed, k);
        prop_assert!(psi_commutes(&d, SignRule::Sigma).unwrap());
        prop_assert!(psi_commutes(&d, SignRule::Alpha).unwrap());
    }

    #[test]
    fn sign_rules_are_bridged(seed in any::<u64>(), k in 1usize..=5) {
        prop_assert!(sign_rules_agree(&diagram(seed, k)).unwrap());
    }

    #[test]
    fn euler_characteristic_is_the_bracket(seed in any::<u64>(), k in 1usize..=6) {
        prop_assert!(euler_matches_bracket(&khovanov_complex(&diagram(seed, k), SignRule::Sigma).unwrap()));
    }

    #[test]
    fn homology_ignores_crossing_order(seed in any::<u64>(), k in 1usize..=5) {
        let d = diagram(seed, k);
        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(&mut StdRng::seed_from_u64(seed ^ 0x5eed));
        let a = homology(&khovanov_complex(&d, SignRule::Sigma).unwrap(), NORMALIZED).unwrap();
        let b = homology(&khovanov_complex(&d.reordered(&perm), SignRule::Sigma).unwrap(), NORMALIZED).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn homology_ignores_basis_order(seed in any::<u64>(), k in 1usize..=5) {
        let c = khovanov_complex(&diagram(seed, k), SignRule::Alpha).unwrap();
        prop_assert_eq!(homology(&c, GradingScheme::Surface).unwrap(), homology_shuffled(&c, GradingScheme::Surface, seed).unwrap());
    }

    #[test]
    fn signature_ignores_cycle_basis(seed in any::<u64>(), k in 1usize..=5) {
        let d = diagram(seed, k);
        let mut rng = StdRng::seed_from_u64(seed);
        for m in enumerate_states(&d) {
            let f = build_state_surface(&d, &EnhancedState::new(m, 0)).unwrap();
            let g = goeritz_matrix(&f, &cycle_basis(&f));
            let h = goeritz_matrix(&f, &random_cycle_basis(&f, &mut rng));
            prop_assert_eq!(signature(&g.entries), signature(&h.entries));
            prop_assert_eq!(g.size(), f.first_betti());
        }
    }

    #[test]
    fn marker_vectors_round_trip(bits in any::<u64>(), len in 1usize..=40) {
        let m = MarkerVector::from_bits(bits & ((1u64 << len) - 1), len);
        prop_assert_eq!(MarkerVector::parse(&m.to_string()).unwrap(), m);
        prop_assert_eq!(m.positives() + m.negatives(), len);
    }

    #[test]
    fn invariant_factors_divide_and_multiply_to_the_determinant(entries in prop::collection::vec(-6i64..=6, 9)) {
        let m: Vec<Vec<i64>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        let a = from_i64(&m);
        let f = invariant_factors(&a);
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
        let det = determinant(&a);
        if det != BigInt::from(0) {
            prop_assert_eq!(f.iter().product::<BigInt>(), det.abs());
        }
    }
}

#[test]
fn mirror_reverses_writhe_and_keeps_rank() {
    for seed in 0..20 {
        let d = diagram(seed, 4);
        let m = d.mirror();
        assert_eq!(m.writhe(), -d.writhe());
        let rank = |d: &LinkDiagram| homology(&khovanov_complex(d, SignRule::Sigma).unwrap(), NORMALIZED).unwrap().total_rank();
        assert_eq!(rank(&d), rank(&m));
    }
}

use dual_derham::derham::{build_c, build_d};
use dual_derham::linear::{exchange, homology_invariants, invariants_of_cokernel, smith_normal_form, IntMatrix};
use dual_derham::numtheory::{binomial, check_binomial_lemma};
use num_bigint::BigInt;
use proptest::prelude::*;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |data| {
            IntMatrix::from_data(r, c, data.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn shuffled(len: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..len).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_recomposes(m in matrix(6, 9)) {
        let snf = smith_normal_form(&m);
        prop_assert!(snf.verify(&m));
    }

    #[test]
    fn snf_handles_large_entries(m in matrix(4, 3), k in 40u32..90) {
        let big = m.scale(&(BigInt::from(3).pow(k) + 1));
        prop_assert!(smith_normal_form(&big).verify(&big));
    }

    #[test]
    fn cokernel_ignores_permutations(
        (m, rows, cols) in matrix(5, 6).prop_flat_map(|m| {
            let (r, c) = (m.rows(), m.cols());
            (Just(m), shuffled(r), shuffled(c))
        })
    ) {
        let permuted = m.permute_rows(&rows).permute_cols(&cols);
        prop_assert_eq!(invariants_of_cokernel(&m), invariants_of_cokernel(&permuted));
    }

    #[test]
    fn exchange_roundtrip(m in matrix(5, 1_000_000)) {
        prop_assert_eq!(&exchange::parse_matrix(&exchange::to_text(&m)).unwrap(), &m);
        prop_assert_eq!(&exchange::parse_matrix(&exchange::to_json(&m)).unwrap(), &m);
    }

    #[test]
    fn binomial_congruence(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), n in 2u64..80, k in 1u64..80) {
        prop_assume!(k < n);
        prop_assert!(check_binomial_lemma(p, n, k).unwrap().holds);
        prop_assert_eq!(binomial(n, k).unwrap(), binomial(n, n - k).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_blocks_match_full_homology(n in 0usize..6, r in 0usize..3, d_family in any::<bool>()) {
        let cx = if d_family { build_d(n, r) } else { build_c(n, r) };
        prop_assert!(cx.is_complex());
        for i in 0..=n {
            prop_assert_eq!(cx.homology(i).unwrap(), cx.homology_full(i).unwrap());
            let direct = homology_invariants(&cx.d(i + 1), &cx.d(i)).unwrap();
            prop_assert_eq!(cx.homology(i).unwrap(), direct);
        }
    }

    #[test]
    fn euler_characteristic_of_d_family(n in 1usize..6, r in 0usize..4) {
        // D^n(Z^r) is acyclic over Q for n >= 1
        let cx = build_d(n, r);
        for i in 0..=n {
            prop_assert_eq!(cx.homology(i).unwrap().free_rank, 0);
        }
    }
}

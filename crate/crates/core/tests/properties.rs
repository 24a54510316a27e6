use num_bigint::BigUint;
use proptest::prelude::*;

use excesslab::enumerate::{brute_force_row, bridge_count_general, min_order, structurally_zero, ExcessTable, Restriction};
use excesslab::process::{monte_carlo, run_process, run_process_observed, vertex_trajectory_oracle};
use excesslab::series::{tree_polynomial, tree_polynomial_series};
use excesslab::wright::wright_constants;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn table_rows_match_brute_force(k in 1usize..=6) {
        let row = brute_force_row(k).unwrap();
        let lmax = (k * (k - 1) / 2) as i64 - k as i64;
        let t = ExcessTable::build(k, lmax.max(-1)).unwrap();
        for (m, &c) in row.iter().enumerate().skip(k - 1) {
            prop_assert_eq!(t.count(k, m as i64 - k as i64), &BigUint::from(c));
        }
    }

    #[test]
    fn zero_pattern(k in 1usize..40, ell in -1i64..6) {
        let t = ExcessTable::build(40, 6).unwrap();
        prop_assert_eq!(t.count(k, ell) == &BigUint::from(0u32), structurally_zero(k, ell));
        if ell >= 1 {
            prop_assert_eq!(structurally_zero(k, ell), k < min_order(ell));
        }
    }

    #[test]
    fn both_sides_is_half_of_one_side_at_zero(k in 2usize..30, ell in 0i64..4) {
        let t = ExcessTable::build(30, 4).unwrap();
        let both = bridge_count_general(&t, k, ell, 0, Restriction::BothSides).unwrap();
        let one = bridge_count_general(&t, k, ell, 0, Restriction::OneSide).unwrap();
        prop_assert_eq!(one, both * BigUint::from(2u32));
    }

    #[test]
    fn restriction_shrinks_counts(k in 2usize..30, ell in 2i64..5) {
        let t = ExcessTable::build(30, 4).unwrap();
        let r0 = bridge_count_general(&t, k, ell, 0, Restriction::BothSides).unwrap();
        let r1 = bridge_count_general(&t, k, ell, 1, Restriction::BothSides).unwrap();
        prop_assert!(r1 <= r0);
    }

    #[test]
    fn tree_polynomial_routes_agree(a in 0usize..4, n in 1usize..25, y in 1u32..8) {
        prop_assert_eq!(tree_polynomial(a, n, y).unwrap(), tree_polynomial_series(a, n, y).unwrap());
    }

    #[test]
    fn wright_b_positive_ratio_bounded(l in 1usize..25) {
        let w = wright_constants(25).unwrap();
        let d = w.d(l);
        prop_assert!(d > 0.0 && d < 1.0 / (2.0 * std::f64::consts::PI));
    }

    #[test]
    fn process_invariants_and_oracle(n in 2usize..120, lmax in 0usize..5, seed in any::<u64>()) {
        let mut ok = true;
        let run = run_process_observed(n, lmax, seed, |s, _, _| ok &= s.check_invariants().is_ok()).unwrap();
        prop_assert!(ok);
        prop_assert!(run.edges <= (n * (n - 1) / 2) as u64);
        let oracle = vertex_trajectory_oracle(n, lmax, seed).unwrap();
        prop_assert_eq!(&oracle.v, &run.v);
        for traj in &oracle.trajectories {
            // excess along a vertex trajectory never decreases
            prop_assert!(traj.windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert_eq!(run, run_process(n, lmax, seed).unwrap());
    }
}

#[test]
fn monte_carlo_independent_of_thread_count() {
    let in_pool = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| serde_json::to_string(&monte_carlo(500, 3, 24, 99).unwrap()).unwrap())
    };
    assert_eq!(in_pool(1), in_pool(3));
}

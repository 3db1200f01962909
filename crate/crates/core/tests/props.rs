// Property tests for the spec-level invariants.

use proptest::prelude::*;

use airylab_core::percolation::{last_passage, WaitingMatrix};
use airylab_core::stats::ks_two_sample;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lpp_monotone_under_entry_increase(
        n in 1usize..5,
        p in 1usize..6,
        entries in proptest::collection::vec(0.0f64..10.0, 30),
        bump in 0.0f64..5.0,
        pick in 0usize..30,
    ) {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..p).map(|j| entries[(i * p + j) % entries.len()]).collect())
            .collect();
        let w = WaitingMatrix::from_rows(&rows);
        let base = last_passage(&w);
        let (i, j) = (pick % n, (pick / n) % p);
        let mut bumped = w.clone();
        bumped.set(i, j, w.get(i, j) + bump);
        prop_assert!(last_passage(&bumped) >= base - 1e-12);
    }

    #[test]
    fn ks_statistic_invariant_under_increasing_transform(
        a in proptest::collection::vec(-50.0f64..50.0, 3..40),
        b in proptest::collection::vec(-50.0f64..50.0, 3..40),
    ) {
        let d0 = ks_two_sample(&a, &b).unwrap().statistic;
        // x -> x^3 + 2x is strictly increasing on the reals
        let ta: Vec<f64> = a.iter().map(|&x| x * x * x + 2.0 * x).collect();
        let tb: Vec<f64> = b.iter().map(|&x| x * x * x + 2.0 * x).collect();
        let d1 = ks_two_sample(&ta, &tb).unwrap().statistic;
        prop_assert!((d0 - d1).abs() < 1e-15);
    }

    #[test]
    fn lpp_homogeneous_under_scaling(
        n in 1usize..4,
        p in 1usize..5,
        entries in proptest::collection::vec(0.0f64..10.0, 20),
        c in 0.1f64..10.0,
    ) {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..p).map(|j| entries[(i * p + j) % entries.len()]).collect())
            .collect();
        let w = WaitingMatrix::from_rows(&rows);
        let scaled_rows: Vec<Vec<f64>> = rows.iter()
            .map(|r| r.iter().map(|&v| c * v).collect())
            .collect();
        let ws = WaitingMatrix::from_rows(&scaled_rows);
        let lhs = last_passage(&ws);
        let rhs = c * last_passage(&w);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }
}

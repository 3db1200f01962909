// Exhaustive path-enumeration oracle for the last-passage DP, plus the
// distributional symmetry of the square model.

use airylab_core::model::validate_params;
use airylab_core::percolation::{
    last_passage, last_passage_profile, sample_lpp_batch, sample_waiting_matrix, WaitingMatrix,
};
use airylab_core::stats::{derive_seed, ks_two_sample, SampleRng};

/// Max path sum over all monotone up-right paths, by explicit recursion.
fn brute_force(w: &WaitingMatrix, i: usize, j: usize) -> f64 {
    let here = w.get(i, j);
    if i == 0 && j == 0 {
        return here;
    }
    let mut best = f64::NEG_INFINITY;
    if i > 0 {
        best = best.max(brute_force(w, i - 1, j));
    }
    if j > 0 {
        best = best.max(brute_force(w, i, j - 1));
    }
    here + best
}

#[test]
fn dp_equals_enumeration_on_all_small_grids() {
    let mut rng = SampleRng::new(314);
    for n in 1..=8usize {
        for p in 1..=8usize {
            if n + p > 9 {
                continue;
            }
            for _ in 0..20 {
                let rows: Vec<Vec<f64>> = (0..n)
                    .map(|_| (0..p).map(|_| 5.0 * rng.uniform()).collect())
                    .collect();
                let w = WaitingMatrix::from_rows(&rows);
                let dp = last_passage(&w);
                let oracle = brute_force(&w, n - 1, p - 1);
                assert!((dp - oracle).abs() < 1e-12, "{n}x{p}: dp {dp} vs oracle {oracle}");
                let profile = last_passage_profile(&w);
                for k in 0..n {
                    assert!((profile[k] - brute_force(&w, k, p - 1)).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn square_model_symmetric_under_pi_permutation() {
    // permuting pi leaves the law of Y(p,p) unchanged; two-sample KS over
    // 10^4 draws passes for at least 9 of 10 seeds
    let a = validate_params(&[1.0, 0.4, 1.5], &[0.0, 0.3, -0.1]).unwrap();
    let b = validate_params(&[1.5, 1.0, 0.4], &[0.0, 0.3, -0.1]).unwrap();
    let mut passes = 0;
    for seed in 0..10u64 {
        let sa = sample_lpp_batch(&a, 3, 3, 10_000, derive_seed(600, seed)).unwrap();
        let sb = sample_lpp_batch(&b, 3, 3, 10_000, derive_seed(601, seed)).unwrap();
        let r = ks_two_sample(&sa.values, &sb.values).unwrap();
        if r.p_value > 0.01 {
            passes += 1;
        }
    }
    assert!(passes >= 9, "{passes}/10 seeds passed");
}

#[test]
fn single_increase_never_decreases_last_passage() {
    let params = validate_params(&[1.0, 0.7, 1.2, 0.9], &[0.0, 0.2, -0.1, 0.4]).unwrap();
    let mut rng = SampleRng::new(99);
    for trial in 0..200 {
        let w = sample_waiting_matrix(&params, 4, 4, trial).unwrap();
        let base = last_passage(&w);
        let i = (rng.uniform() * 4.0) as usize % 4;
        let j = (rng.uniform() * 4.0) as usize % 4;
        let mut bumped = w.clone();
        bumped.set(i, j, w.get(i, j) + 3.0 * rng.uniform());
        assert!(last_passage(&bumped) >= base - 1e-12);
    }
}

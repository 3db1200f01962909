//! Inhomogeneous exponential last-passage percolation.
//!
//! The waiting array for Y(N, p) is an N x p grid whose row index is the
//! growth level (rate component `pihat[i]`) and whose column index runs over
//! the full parameter set (rate component `pi[j]`), so entry (i, j) is
//! exponential with rate `pihat[i] + pi[j]`. Level k then uses exactly the
//! first k pihat-parameters and all p pi-parameters, which is the pairing
//! under which Y(N, p) and the largest eigenvalue of the p x N ensemble are
//! equal in law and under which the finite correlation kernel's level
//! products close over the same parameters.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::stats::{derive_seed, SampleRng};

/// An N x p array of sampled waiting times.
#[derive(Debug, Clone)]
pub struct WaitingMatrix {
    entries: Vec<f64>,
    n: usize,
    p: usize,
    pub seed: u64,
}

impl WaitingMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.p + j]
    }

    /// Test-support constructor from explicit rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let p = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == p));
        WaitingMatrix {
            entries: rows.iter().flatten().copied().collect(),
            n,
            p,
            seed: 0,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.p + j] = v;
    }
}

/// A batch of scalar draws with its provenance.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub n: usize,
    pub p: usize,
}

/// Samples the N x p waiting array; entry (i, j) ~ Exp(pihat[i] + pi[j]),
/// deterministic in the seed. Entries are drawn row-major from a single
/// ChaCha8 stream seeded with `seed`.
pub fn sample_waiting_matrix(
    params: &ModelParams,
    n: usize,
    p: usize,
    seed: u64,
) -> Result<WaitingMatrix> {
    if n < 1 || n > p || p != params.p() {
        return Err(Error::BadDimensions { n, p });
    }
    let mut rng = SampleRng::new(seed);
    let mut entries = Vec::with_capacity(n * p);
    for i in 0..n {
        for j in 0..p {
            let rate = params.pihat()[i] + params.pi()[j];
            entries.push(rng.exponential(rate));
        }
    }
    Ok(WaitingMatrix {
        entries,
        n,
        p,
        seed,
    })
}

/// Last passage time: max over monotone up-right paths from (1,1) to (N,p)
/// of the path sum, by the standard corner-growth recurrence.
pub fn last_passage(w: &WaitingMatrix) -> f64 {
    *last_passage_profile(w).last().unwrap()
}

/// {Y(k, p)}_{k=1..N} from a single dynamic-programming sweep: entry k-1 is
/// the last-passage value to the corner of the first k rows.
pub fn last_passage_profile(w: &WaitingMatrix) -> Vec<f64> {
    let (n, p) = (w.n, w.p);
    let mut row = vec![0.0f64; p];
    let mut profile = Vec::with_capacity(n);
    for i in 0..n {
        let mut left = f64::NEG_INFINITY;
        for j in 0..p {
            let above = if i == 0 { f64::NEG_INFINITY } else { row[j] };
            let best = if i == 0 && j == 0 {
                0.0
            } else {
                above.max(left)
            };
            row[j] = w.get(i, j) + best;
            left = row[j];
        }
        profile.push(row[p - 1]);
    }
    profile
}

/// n_samples independent draws of the last passage time. Sample k uses the
/// derived seed h(seed, k), so the batch is bit-identical for any thread
/// count or execution order.
pub fn sample_lpp_batch(
    params: &ModelParams,
    n: usize,
    p: usize,
    n_samples: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if n_samples < 1 {
        return Err(Error::EmptySample);
    }
    // validate dimensions once up front
    sample_waiting_matrix(params, n, p, seed)?;
    let values: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|k| {
            let w = sample_waiting_matrix(params, n, p, derive_seed(seed, k as u64)).unwrap();
            last_passage(&w)
        })
        .collect();
    Ok(SampleBatch {
        values,
        seed,
        n,
        p,
    })
}

/// Joint profile batch: each sample is the full level profile {Y(k,p)}_k.
pub fn sample_profile_batch(
    params: &ModelParams,
    n: usize,
    p: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    sample_waiting_matrix(params, n, p, seed)?;
    Ok((0..n_samples)
        .into_par_iter()
        .map(|k| {
            let w = sample_waiting_matrix(params, n, p, derive_seed(seed, k as u64)).unwrap();
            last_passage_profile(&w)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_params;
    use crate::stats::ks_one_sample;

    #[test]
    fn single_cell_empirical_mean() {
        let params = validate_params(&[2.0], &[0.0]).unwrap();
        let n = 100_000;
        let mut sum = 0.0;
        for k in 0..n {
            let w = sample_waiting_matrix(&params, 1, 1, derive_seed(5, k)).unwrap();
            sum += w.get(0, 0);
        }
        let mean = sum / n as f64;
        // Exp(2): mean 0.5, sd 0.5; allow 3 sigma of the sample mean
        assert!((mean - 0.5).abs() < 3.0 * 0.5 / (n as f64).sqrt());
    }

    #[test]
    fn fixed_seed_reproducible() {
        let params = validate_params(&[1.0, 0.5], &[0.3, 0.0]).unwrap();
        let a = sample_waiting_matrix(&params, 2, 2, 99).unwrap();
        let b = sample_waiting_matrix(&params, 2, 2, 99).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a.get(i, j).to_bits(), b.get(i, j).to_bits());
            }
        }
    }

    #[test]
    fn rate_grid_enumeration() {
        // pihat rows, pi columns: rates[i][j] = pihat[i] + pi[j]
        let params = validate_params(&[1.0, 1.0], &[1.0, 0.0]).unwrap();
        let expected = [[2.0, 2.0], [1.0, 1.0]];
        let trials = 200_000;
        let mut sums = [[0.0f64; 2]; 2];
        for k in 0..trials {
            let w = sample_waiting_matrix(&params, 2, 2, derive_seed(7, k)).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    sums[i][j] += w.get(i, j);
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                let mean = sums[i][j] / trials as f64;
                let want = 1.0 / expected[i][j];
                assert!(
                    (mean - want).abs() < 4.0 * want / (trials as f64).sqrt(),
                    "cell ({i},{j}): mean {mean} want {want}"
                );
            }
        }
    }

    #[test]
    fn single_row_is_sum() {
        let w = WaitingMatrix::from_rows(&[vec![0.5, 1.5, 2.0, 0.25]]);
        assert!((last_passage(&w) - 4.25).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_hand_enumeration() {
        // paths: 1+2+4 = 7 and 1+3+4 = 8
        let w = WaitingMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(last_passage(&w), 8.0);
        assert_eq!(last_passage_profile(&w), vec![3.0, 8.0]);
    }

    #[test]
    fn scaling_entries_scales_result() {
        let params = validate_params(&[1.0, 0.2, 0.7], &[0.4, 0.0, -0.1]).unwrap();
        let w = sample_waiting_matrix(&params, 3, 3, 17).unwrap();
        let base = last_passage(&w);
        let mut scaled = w.clone();
        for i in 0..3 {
            for j in 0..3 {
                scaled.set(i, j, 3.5 * w.get(i, j));
            }
        }
        assert!((last_passage(&scaled) - 3.5 * base).abs() < 1e-12 * base.abs());
    }

    #[test]
    fn profile_consistency_and_growth() {
        let params = validate_params(&[1.0; 5], &[0.0; 5]).unwrap();
        for seed in 0..20 {
            let w = sample_waiting_matrix(&params, 4, 5, seed).unwrap();
            let profile = last_passage_profile(&w);
            assert_eq!(profile.len(), 4);
            assert!((profile[3] - last_passage(&w)).abs() < 1e-12);
            for k in 1..4 {
                assert!(profile[k] > profile[k - 1]);
            }
        }
    }

    #[test]
    fn batch_first_element_consistency() {
        let params = validate_params(&[1.0, 1.0], &[0.5, 0.0]).unwrap();
        let batch = sample_lpp_batch(&params, 2, 2, 1, 31).unwrap();
        let w = sample_waiting_matrix(&params, 2, 2, derive_seed(31, 0)).unwrap();
        assert_eq!(batch.values[0].to_bits(), last_passage(&w).to_bits());
    }

    #[test]
    fn one_cell_batch_is_exponential() {
        // KS against Exp(r) passes for at least 9 of 10 seeds
        let rate = 1.3;
        let params = validate_params(&[1.0], &[rate - 1.0]).unwrap();
        let mut passes = 0;
        for seed in 0..10u64 {
            let batch = sample_lpp_batch(&params, 1, 1, 10_000, 1000 + seed).unwrap();
            let r = ks_one_sample(&batch.values, |x| 1.0 - (-rate * x).exp()).unwrap();
            if r.p_value > 0.01 {
                passes += 1;
            }
        }
        assert!(passes >= 9, "{passes}/10");
    }

    #[test]
    fn batch_thread_count_invariance() {
        let params = validate_params(&[1.0, 0.8, 1.2], &[0.0, 0.1, -0.2]).unwrap();
        let whole = sample_lpp_batch(&params, 3, 3, 64, 5).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| sample_lpp_batch(&params, 3, 3, 64, 5).unwrap());
        assert_eq!(
            whole.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            serial.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }
}

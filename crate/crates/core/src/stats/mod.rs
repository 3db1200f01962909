//! Empirical distribution utilities and Kolmogorov-Smirnov testing.

pub mod rng;

pub use rng::{derive_seed, SampleRng};

use crate::error::{Error, Result};

/// Empirical CDF of a sample: right-continuous step function in [0, 1].
#[derive(Debug, Clone)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Ecdf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// F(x) = #{values <= x} / n.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.sorted.len();
        let k = self.sorted.partition_point(|&v| v <= x);
        k as f64 / n as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }
}

/// Result of a KS test.
#[derive(Debug, Clone, Copy)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

/// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
/// truncated when terms fall below 1e-12. Clamped to [0, 1].
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..10_000u32 {
        let term = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample KS: D = sup over pooled points of |F_a - F_b|, with the
/// asymptotic p-value Q(D * sqrt(n1 n2 / (n1 + n2))).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|u, v| u.partial_cmp(v).unwrap());
    ys.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let (n1, n2) = (xs.len(), ys.len());
    let (inc_x, inc_y) = (1.0 / n1 as f64, 1.0 / n2 as f64);
    let mut d: f64 = 0.0;
    let mut diff: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < n1 || j < n2 {
        // Advance every sample point sharing the current pooled value before
        // reading off the gap, so ties contribute a single evaluation point.
        let x = match (xs.get(i), ys.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        while i < n1 && xs[i] == x {
            diff += inc_x;
            i += 1;
        }
        while j < n2 && ys[j] == x {
            diff -= inc_y;
            j += 1;
        }
        d = d.max(diff.abs());
    }
    let lambda = d * ((n1 as f64 * n2 as f64) / (n1 + n2) as f64).sqrt();
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_q(lambda),
        n1,
        n2,
    })
}

/// One-sample KS against a supplied CDF. The CDF is checked for
/// monotonicity along the sorted evaluation points.
pub fn ks_one_sample<F: Fn(f64) -> f64>(a: &[f64], cdf: F) -> Result<KsResult> {
    if a.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = a.to_vec();
    xs.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let n = xs.len();
    let mut d: f64 = 0.0;
    let mut prev_f = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        if f < prev_f - 1e-9 {
            return Err(Error::NonMonotoneCdf(prev_f - f));
        }
        prev_f = prev_f.max(f);
        let lo = i as f64 / n as f64;
        let hi = (i + 1) as f64 / n as f64;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    let lambda = d * (n as f64).sqrt();
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_q(lambda),
        n1: n,
        n2: 0,
    })
}

//! The generalized Wishart ensemble: p x N complex Gaussian matrices with
//! entry variances 1/(pi[i] + pihat[j]), their spectra, and the continuous
//! Schur measure density.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::percolation::SampleBatch;
use crate::stats::{derive_seed, SampleRng};

/// A p x N complex Gaussian sample. Row i carries pi[i], column j carries
/// pihat[j]; E|X_ij|^2 = 1/(pi[i] + pihat[j]).
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    entries: Vec<Complex64>,
    rows: usize,
    cols: usize,
    pub seed: u64,
}

impl ComplexMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }
}

/// Descending-sorted spectrum of X X^*.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Draws the p x N ensemble matrix. Real and imaginary parts of entry (i, j)
/// are independent N(0, 1/(2 (pi_i + pihat_j))), drawn row-major from one
/// ChaCha8 stream, so E|X_ij|^2 = 1/(pi_i + pihat_j).
pub fn sample_gwishart(
    params: &ModelParams,
    n: usize,
    p: usize,
    seed: u64,
) -> Result<ComplexMatrix> {
    if n < 1 || n > p || p != params.p() {
        return Err(Error::BadDimensions { n, p });
    }
    let mut rng = SampleRng::new(seed);
    let mut entries = Vec::with_capacity(p * n);
    for i in 0..p {
        for j in 0..n {
            let rate = params.pi()[i] + params.pihat()[j];
            let sd = (0.5 / rate).sqrt();
            let (a, b) = rng.standard_normal_pair();
            entries.push(Complex64::new(sd * a, sd * b));
        }
    }
    Ok(ComplexMatrix {
        entries,
        rows: p,
        cols: n,
        seed,
    })
}

/// Eigenvalues of the 2m x 2m real symmetric embedding [[A, -B], [B, A]] of
/// a Hermitian M = A + iB; each eigenvalue of M appears twice.
fn hermitian_eigenvalues_embedded(m: &[Complex64], dim: usize) -> Result<Vec<f64>> {
    let mut h = DMatrix::<f64>::zeros(2 * dim, 2 * dim);
    for a in 0..dim {
        for b in 0..dim {
            let z = m[a * dim + b];
            h[(a, b)] = z.re;
            h[(dim + a, dim + b)] = z.re;
            h[(a, dim + b)] = -z.im;
            h[(dim + a, b)] = z.im;
        }
    }
    let h_norm = h.norm();
    let eig = h.clone().symmetric_eigen();
    // residual contract: ||H v - lambda v|| <= 1e-10 ||H|| per eigenpair
    let tol = 1e-10 * h_norm.max(1.0);
    for k in 0..2 * dim {
        let v = eig.eigenvectors.column(k);
        let resid = (&h * v - eig.eigenvalues[k] * v).norm();
        if resid > tol {
            return Err(Error::ConvergenceFailure {
                residual: resid,
                tol,
            });
        }
    }
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(vals.into_iter().step_by(2).collect())
}

/// Full spectrum of M = X X^*, descending. The product is formed internally;
/// eigenvalues more negative than -1e-10 ||M|| are a hard failure.
pub fn hermitian_spectrum(x: &ComplexMatrix) -> Result<Spectrum> {
    let p = x.rows;
    let n = x.cols;
    let mut m = vec![Complex64::new(0.0, 0.0); p * p];
    for a in 0..p {
        for b in 0..=a {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += x.get(a, j) * x.get(b, j).conj();
            }
            m[a * p + b] = acc;
            m[b * p + a] = acc.conj();
        }
    }
    let m_norm: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let eigenvalues = hermitian_eigenvalues_embedded(&m, p)?;
    let tol = 1e-10 * m_norm.max(1.0);
    for (k, &lam) in eigenvalues.iter().enumerate() {
        if lam < -tol {
            return Err(Error::ConvergenceFailure {
                residual: -lam,
                tol,
            });
        }
        // rank <= N: trailing eigenvalues vanish
        if k >= n && lam.abs() > tol.max(1e-9 * m_norm) {
            return Err(Error::ConvergenceFailure {
                residual: lam.abs(),
                tol,
            });
        }
    }
    Ok(Spectrum { eigenvalues })
}

/// n_samples independent draws of the largest eigenvalue, with per-sample
/// derived seeds (thread-count independent).
pub fn sample_lambda_max_batch(
    params: &ModelParams,
    n: usize,
    p: usize,
    n_samples: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if n_samples < 1 {
        return Err(Error::EmptySample);
    }
    sample_gwishart(params, n, p, seed)?;
    let values = (0..n_samples)
        .into_par_iter()
        .map(|k| {
            let x = sample_gwishart(params, n, p, derive_seed(seed, k as u64)).unwrap();
            hermitian_spectrum(&x).map(|s| s.lambda_max())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SampleBatch {
        values,
        seed,
        n,
        p,
    })
}

/// One draw of {lambda_max(X_k X_k^*)}_{k=1..p}, where X_{k+1} appends one
/// fresh column to X_k (the same underlying draws are reused across k).
/// The profile is checked to be nondecreasing, which is forced by the
/// rank-one update X_{k+1} X_{k+1}^* - X_k X_k^* being PSD.
pub fn sample_growth_profile(params: &ModelParams, p: usize, seed: u64) -> Result<Vec<f64>> {
    let x = sample_gwishart(params, p, p, seed)?;
    let mut profile = Vec::with_capacity(p);
    for k in 1..=p {
        let truncated = ComplexMatrix {
            entries: (0..p)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| x.get(i, j))
                .collect(),
            rows: p,
            cols: k,
            seed,
        };
        let spec = hermitian_spectrum(&truncated)?;
        profile.push(spec.lambda_max());
    }
    for k in 1..p {
        if profile[k] < profile[k - 1] - 1e-9 * profile[k - 1].abs().max(1.0) {
            return Err(Error::ConvergenceFailure {
                residual: profile[k - 1] - profile[k],
                tol: 0.0,
            });
        }
    }
    Ok(profile)
}

/// The continuous Schur measure density
/// f(x) = det(e^{-pi_i x_j}) det(e^{-pihat_i x_j}) / Z_{p,p}
/// with the normalizer evaluated by the closed Cauchy-determinant product
/// in log space. Zero off the positive orthant; parameters within 1e-9 of a
/// coincidence are rejected (confluent limits not implemented).
pub fn schur_density(params: &ModelParams, xs: &[f64]) -> Result<f64> {
    let p = params.p();
    assert_eq!(xs.len(), p, "need one coordinate per parameter");
    for i in 0..p {
        for j in (i + 1)..p {
            if (params.pi()[i] - params.pi()[j]).abs() < 1e-9
                || (params.pihat()[i] - params.pihat()[j]).abs() < 1e-9
            {
                return Err(Error::DegenerateParameters { tol: 1e-9 });
            }
        }
    }
    if xs.iter().any(|&x| x < 0.0) {
        return Ok(0.0);
    }
    // log |Z| and sign(Z) from Z = prod_{i<j} (pi_i - pi_j)(pihat_i - pihat_j)
    //                              / prod_{i,j} (pi_i + pihat_j)
    let mut log_z = 0.0f64;
    let mut sign_z = 1.0f64;
    for i in 0..p {
        for j in (i + 1)..p {
            let d1 = params.pi()[i] - params.pi()[j];
            let d2 = params.pihat()[i] - params.pihat()[j];
            log_z += d1.abs().ln() + d2.abs().ln();
            sign_z *= d1.signum() * d2.signum();
        }
        for j in 0..p {
            log_z -= (params.pi()[i] + params.pihat()[j]).ln();
        }
    }
    let det_of = |rates: &[f64]| -> f64 {
        let m = DMatrix::<f64>::from_fn(p, p, |i, j| (-rates[i] * xs[j]).exp());
        m.lu().determinant()
    };
    let d1 = det_of(params.pi());
    let d2 = det_of(params.pihat());
    Ok(sign_z * d1 * d2 * (-log_z).exp())
}

/// P(x_max <= x) under the continuous Schur measure, by Gauss-Legendre
/// quadrature of the ordered-sector density. Supported for p in {1, 2}.
pub fn schur_cdf_max(params: &ModelParams, x: f64, nodes: usize) -> Result<f64> {
    use crate::specfun::gauss_legendre_interval;
    if x <= 0.0 {
        return Ok(0.0);
    }
    match params.p() {
        1 => Ok((0.0f64).max(1.0 - (-(params.pi()[0] + params.pihat()[0]) * x).exp())),
        2 => {
            let (xs, ws) = gauss_legendre_interval(nodes, 0.0, x);
            let mut total = 0.0;
            for (&x1, &w1) in xs.iter().zip(&ws) {
                let (ys, vs) = gauss_legendre_interval(nodes, 0.0, x1);
                for (&x2, &w2) in ys.iter().zip(&vs) {
                    total += w1 * w2 * schur_density(params, &[x1, x2])?;
                }
            }
            Ok(total)
        }
        p => Err(Error::ProblemTooLarge { size: p, cap: 2 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_params;
    use crate::specfun::gauss_legendre_interval;
    use crate::stats::ks_one_sample;

    #[test]
    fn one_by_one_modulus_squared_is_exponential() {
        // |complex Gaussian|^2 with E|X|^2 = 1/r is Exp(r)
        let rate = 0.8;
        let params = validate_params(&[rate], &[0.0]).unwrap();
        let mut passes = 0;
        for seed in 0..10u64 {
            let draws: Vec<f64> = (0..10_000)
                .map(|k| {
                    let x = sample_gwishart(&params, 1, 1, derive_seed(50 + seed, k)).unwrap();
                    x.get(0, 0).norm_sqr()
                })
                .collect();
            let r = ks_one_sample(&draws, |v| 1.0 - (-rate * v).exp()).unwrap();
            if r.p_value > 0.01 {
                passes += 1;
            }
        }
        assert!(passes >= 9, "{passes}/10");
    }

    #[test]
    fn entry_second_moment() {
        let params = validate_params(&[1.0, 0.5], &[0.5, 0.0]).unwrap();
        let trials = 100_000;
        let mut acc = 0.0;
        for k in 0..trials {
            let x = sample_gwishart(&params, 2, 2, derive_seed(3, k)).unwrap();
            acc += x.get(1, 0).norm_sqr();
        }
        let mean = acc / trials as f64;
        let want = 1.0 / (0.5 + 0.5);
        assert!((mean - want).abs() < 4.0 * want / (trials as f64).sqrt());
    }

    #[test]
    fn gwishart_seed_reproducible() {
        let params = validate_params(&[1.0, 2.0], &[0.0, 0.25]).unwrap();
        let a = sample_gwishart(&params, 2, 2, 77).unwrap();
        let b = sample_gwishart(&params, 2, 2, 77).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a.get(i, j), b.get(i, j));
            }
        }
    }

    #[test]
    fn spectrum_rank_one() {
        // p = 2, N = 1: eigenvalues {|a|^2 + |b|^2, 0}
        let params = validate_params(&[1.0, 1.0], &[0.0, 0.0]).unwrap();
        let x = sample_gwishart(&params, 1, 2, 4).unwrap();
        let s = hermitian_spectrum(&x).unwrap();
        let want = x.get(0, 0).norm_sqr() + x.get(1, 0).norm_sqr();
        assert!((s.eigenvalues[0] - want).abs() < 1e-12 * want);
        assert!(s.eigenvalues[1].abs() < 1e-12 * want);
    }

    #[test]
    fn spectrum_trace_identity() {
        let params = validate_params(&[1.0, 0.6, 1.3, 0.9], &[0.0, 0.2, -0.1, 0.4]).unwrap();
        let x = sample_gwishart(&params, 4, 4, 123).unwrap();
        let s = hermitian_spectrum(&x).unwrap();
        let trace: f64 = (0..4)
            .map(|a| (0..4).map(|j| x.get(a, j).norm_sqr()).sum::<f64>())
            .sum();
        let sum: f64 = s.eigenvalues.iter().sum();
        assert!((sum - trace).abs() < 1e-10 * trace);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn growth_profile_monotone_and_consistent() {
        let params = validate_params(&[1.0; 6], &[0.0; 6]).unwrap();
        for seed in 0..10 {
            let profile = sample_growth_profile(&params, 6, seed).unwrap();
            assert_eq!(profile.len(), 6);
            for k in 1..6 {
                assert!(profile[k] >= profile[k - 1] - 1e-12);
            }
        }
    }

    #[test]
    fn growth_profile_p1_is_exponential_draw() {
        let params = validate_params(&[2.0], &[0.0]).unwrap();
        let profile = sample_growth_profile(&params, 1, 9).unwrap();
        let x = sample_gwishart(&params, 1, 1, 9).unwrap();
        assert!((profile[0] - x.get(0, 0).norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn schur_density_p1_closed_form() {
        let params = validate_params(&[0.7], &[0.6]).unwrap();
        let rate: f64 = 1.3;
        for x in [0.0, 0.5, 1.0, 3.0] {
            let f = schur_density(&params, &[x]).unwrap();
            assert!((f - rate * (-rate * x).exp()).abs() < 1e-12);
        }
        // integrates to one
        let (xs, ws) = gauss_legendre_interval(200, 0.0, 40.0);
        let total: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(&x, &w)| w * schur_density(&params, &[x]).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn schur_density_p2_normalization() {
        // f is the density of the ordered pair x1 >= x2, so it integrates to
        // one over the sector {20 >= x1 >= x2 >= 0} (and to 2! over the square).
        let params = validate_params(&[1.0, 2.0], &[0.0, 0.5]).unwrap();
        let (xs, ws) = gauss_legendre_interval(160, 0.0, 20.0);
        let mut sector = 0.0;
        for (&x1, &w1) in xs.iter().zip(&ws) {
            let (ys, vs) = gauss_legendre_interval(160, 0.0, x1);
            for (&x2, &w2) in ys.iter().zip(&vs) {
                sector += w1 * w2 * schur_density(&params, &[x1, x2]).unwrap();
            }
        }
        assert!((sector - 1.0).abs() < 1e-6, "sector integral {sector}");
    }

    #[test]
    fn schur_cdf_max_matches_sector_quadrature() {
        let params = validate_params(&[1.0, 2.0], &[0.0, 0.5]).unwrap();
        // at x -> infinity the cdf saturates at 1
        let far = schur_cdf_max(&params, 30.0, 160).unwrap();
        assert!((far - 1.0).abs() < 1e-6, "cdf(30) = {far}");
        // monotone in x
        let mut prev = 0.0;
        for k in 1..=12 {
            let v = schur_cdf_max(&params, k as f64 * 1.0, 120).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn schur_density_nonnegative_on_random_points() {
        let params = validate_params(&[1.0, 2.0, 3.0], &[0.0, 0.5, 1.0]).unwrap();
        let mut rng = SampleRng::new(88);
        for _ in 0..10_000 {
            let mut pt = [
                20.0 * rng.uniform(),
                20.0 * rng.uniform(),
                20.0 * rng.uniform(),
            ];
            pt.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let f = schur_density(&params, &pt).unwrap();
            assert!(f >= -1e-14, "negative density {f} at {pt:?}");
        }
    }

    #[test]
    fn schur_density_rejects_degenerate() {
        let params = validate_params(&[1.0, 1.0], &[0.0, 0.5]).unwrap();
        assert!(matches!(
            schur_density(&params, &[1.0, 0.5]),
            Err(Error::DegenerateParameters { .. })
        ));
    }

    #[test]
    fn lambda_max_batch_one_by_one_is_exponential() {
        let rate = 1.7;
        let params = validate_params(&[1.0], &[rate - 1.0]).unwrap();
        let mut passes = 0;
        for seed in 0..10u64 {
            let batch = sample_lambda_max_batch(&params, 1, 1, 10_000, 70 + seed).unwrap();
            let r = ks_one_sample(&batch.values, |x| 1.0 - (-rate * x).exp()).unwrap();
            if r.p_value > 0.01 {
                passes += 1;
            }
        }
        assert!(passes >= 9, "{passes}/10");
    }
}

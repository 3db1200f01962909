//! Model parameters and the edge scaling maps.
//!
//! Two rate vectors `pi`, `pihat` (both length p) define the percolation
//! array and the matrix ensemble. A `ScalingSpec` carries the perturbation
//! data (t, {x_i}, {y_j}) of the near-critical regime together with the
//! derived constant alpha = (1 + sqrt t)^{4/3} / t^{1/6}.

use crate::error::{Error, Result};

/// Validated rate vectors. `pi[i] + pihat[j] > 0` strictly for every pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pi: Vec<f64>,
    pihat: Vec<f64>,
}

impl ModelParams {
    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn pihat(&self) -> &[f64] {
        &self.pihat
    }

    pub fn p(&self) -> usize {
        self.pi.len()
    }

    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.pi[i] + self.pihat[j]
    }
}

/// Checks lengths and strict positivity of every pairwise sum.
pub fn validate_params(pi: &[f64], pihat: &[f64]) -> Result<ModelParams> {
    if pi.len() != pihat.len() || pi.is_empty() {
        return Err(Error::LengthMismatch {
            left: pi.len(),
            right: pihat.len(),
        });
    }
    for (i, &a) in pi.iter().enumerate() {
        for (j, &b) in pihat.iter().enumerate() {
            if !(a + b > 0.0) {
                return Err(Error::NonPositiveRate {
                    i: i + 1,
                    j: j + 1,
                    sum: a + b,
                });
            }
        }
    }
    Ok(ModelParams {
        pi: pi.to_vec(),
        pihat: pihat.to_vec(),
    })
}

/// Perturbation data for the edge scaling regime.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSpec {
    t: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    alpha: f64,
}

impl ScalingSpec {
    /// `t` strictly inside (0, 1); every x_i must exceed every y_j.
    pub fn new(t: f64, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::DegenerateT { t });
        }
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                if !(xi > yj) {
                    return Err(Error::PerturbationOrder {
                        i: i + 1,
                        j: j + 1,
                        x: xi,
                        y: yj,
                    });
                }
            }
        }
        let alpha = (1.0 + t.sqrt()).powf(4.0 / 3.0) / t.powf(1.0 / 6.0);
        Ok(ScalingSpec { t, x, y, alpha })
    }

    pub fn empty(t: f64) -> Result<Self> {
        Self::new(t, Vec::new(), Vec::new())
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn j1(&self) -> usize {
        self.x.len()
    }

    pub fn j2(&self) -> usize {
        self.y.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The critical point z0 = sqrt(t) / (1 + sqrt(t)).
    pub fn z0(&self) -> f64 {
        let s = self.t.sqrt();
        s / (1.0 + s)
    }

    /// Time-to-level rate 2 sqrt(t) (1 + sqrt(t))^2 / alpha, equal to
    /// 2 (t (1 + sqrt(t)))^{2/3}.
    pub fn beta(&self) -> f64 {
        let s = self.t.sqrt();
        2.0 * s * (1.0 + s).powi(2) / self.alpha
    }
}

/// Builds the perturbed rate vectors at size p:
/// pi_i = z0 + x_i / (alpha p^{1/3}) for i <= J1, else 1;
/// pihat_j = -z0 - y_j / (alpha p^{1/3}) for j <= J2, else 0.
pub fn build_perturbed_params(spec: &ScalingSpec, p: usize) -> Result<ModelParams> {
    if p < spec.j1().max(spec.j2()) + 1 {
        return Err(Error::BadDimensions {
            n: spec.j1().max(spec.j2()) + 1,
            p,
        });
    }
    let z0 = spec.z0();
    let scale = spec.alpha * (p as f64).powf(1.0 / 3.0);
    let pi: Vec<f64> = (0..p)
        .map(|i| {
            if i < spec.j1() {
                z0 + spec.x[i] / scale
            } else {
                1.0
            }
        })
        .collect();
    let pihat: Vec<f64> = (0..p)
        .map(|j| {
            if j < spec.j2() {
                -z0 - spec.y[j] / scale
            } else {
                0.0
            }
        })
        .collect();
    validate_params(&pi, &pihat)
}

/// A point of the edge scaling chart: integer level r, rescaled position u,
/// and the additive half of the conjugation exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCoordinates {
    pub r: usize,
    pub u: f64,
    /// r / p after taking the integer part.
    pub s1: f64,
    /// p z0 u - r ln z0; pairwise differences of this field give the real
    /// reduced conjugation exponent.
    pub conjugation_exponent: f64,
}

/// Maps (time, position) to the finite-model coordinates:
/// r = floor(t p + p^{2/3} beta time), s1 = r/p,
/// u = (1 + sqrt(s1))^2 + alpha position / p^{2/3}.
pub fn edge_coordinates(
    spec: &ScalingSpec,
    p: usize,
    time: f64,
    position: f64,
) -> Result<EdgeCoordinates> {
    let pf = p as f64;
    let r_real = (spec.t * pf + pf.powf(2.0 / 3.0) * spec.beta() * time).floor();
    if r_real < 1.0 || r_real > pf {
        return Err(Error::LevelOutOfRange {
            r: r_real as i64,
            p,
        });
    }
    let r = r_real as usize;
    let s1 = r as f64 / pf;
    let u = (1.0 + s1.sqrt()).powi(2) + spec.alpha * position / pf.powf(2.0 / 3.0);
    let z0 = spec.z0();
    Ok(EdgeCoordinates {
        r,
        u,
        s1,
        conjugation_exponent: pf * z0 * u - r as f64 * z0.ln(),
    })
}

/// Both readings of the Theorem-2 normalization of a raw last-passage value.
#[derive(Debug, Clone, Copy)]
pub struct Theorem2Scaled {
    /// Inverse of the position map of the edge chart:
    /// (raw/p - (1 + sqrt(r/p))^2) p^{2/3} / alpha. Canonical.
    pub value: f64,
    /// The literal normalization p^{-1/3} t^{1/6} (1 + sqrt t)^{4/3} (raw - sigma_s)
    /// with sigma_s = p (1 + sqrt(alpha_s))^2, kept for diagnostics.
    pub literal: f64,
    /// The level the raw value was sampled at.
    pub level: usize,
}

/// Applies both normalizations to a raw value observed at scaled time `s`.
pub fn theorem2_scaling(spec: &ScalingSpec, p: usize, s: f64, raw: f64) -> Result<Theorem2Scaled> {
    let coord = edge_coordinates(spec, p, s, 0.0)?;
    let pf = p as f64;
    let u0 = (1.0 + coord.s1.sqrt()).powi(2);
    let value = (raw / pf - u0) * pf.powf(2.0 / 3.0) / spec.alpha;

    let alpha_s = spec.t + 2.0 * (spec.t * (1.0 + spec.t.sqrt())).powf(2.0 / 3.0) * s / pf.powf(1.0 / 3.0);
    let sigma_s = pf * (1.0 + alpha_s.sqrt()).powi(2);
    let literal =
        pf.powf(-1.0 / 3.0) * spec.t.powf(1.0 / 6.0) * (1.0 + spec.t.sqrt()).powf(4.0 / 3.0) * (raw - sigma_s);

    Ok(Theorem2Scaled {
        value,
        literal,
        level: coord.r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_unit_pair() {
        let m = validate_params(&[1.0], &[1.0]).unwrap();
        assert_eq!(m.rate(0, 0), 2.0);
    }

    #[test]
    fn validate_rejects_zero_sum() {
        let err = validate_params(&[0.5], &[-0.5]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveRate { i: 1, j: 1, .. }));
    }

    #[test]
    fn validate_enumerates_all_pairwise_sums() {
        // sums: 1.0, 0.8, 1/3, 0.1333... -- all positive
        let m = validate_params(&[1.0, 1.0 / 3.0], &[0.0, -0.2]).unwrap();
        let min = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| m.rate(i, j))
            .fold(f64::INFINITY, f64::min);
        assert!((min - 0.13333333333333333).abs() < 1e-15);
    }

    #[test]
    fn validate_rejects_length_mismatch() {
        assert!(matches!(
            validate_params(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn empty_perturbation_gives_unit_rates() {
        let spec = ScalingSpec::empty(0.37).unwrap();
        let m = build_perturbed_params(&spec, 12).unwrap();
        assert!(m.pi().iter().all(|&v| v == 1.0));
        assert!(m.pihat().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn perturbed_first_entry_matches_closed_form() {
        // alpha(0.25) = (1.5)^{4/3} / (0.25)^{1/6}
        let spec = ScalingSpec::new(0.25, vec![1.0], vec![]).unwrap();
        let alpha = 1.5f64.powf(4.0 / 3.0) / 0.25f64.powf(1.0 / 6.0);
        assert!((spec.alpha() - alpha).abs() < 1e-15);
        assert!((alpha - 2.1634).abs() < 1e-4);
        let m = build_perturbed_params(&spec, 1000).unwrap();
        assert!((m.pi()[0] - (1.0 / 3.0 + 1.0 / (alpha * 10.0))).abs() < 1e-14);
        assert_eq!(m.pi()[1], 1.0);
    }

    #[test]
    fn perturbed_small_p_still_valid() {
        // the tightest rate is (x1 - y1) / (alpha p^{1/3}) = 2 / (alpha * 2) > 0
        let spec = ScalingSpec::new(0.25, vec![1.0], vec![-1.0]).unwrap();
        let m = build_perturbed_params(&spec, 8).unwrap();
        let tight = m.pi()[0] + m.pihat()[0];
        assert!((tight - 2.0 / (spec.alpha() * 2.0)).abs() < 1e-14);
    }

    #[test]
    fn spec_rejects_bad_t_and_order() {
        assert!(ScalingSpec::empty(0.0).is_err());
        assert!(ScalingSpec::empty(1.0).is_err());
        assert!(ScalingSpec::new(0.5, vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn edge_coordinates_plugin() {
        let spec = ScalingSpec::empty(0.25).unwrap();
        let c = edge_coordinates(&spec, 100, 0.0, 0.0).unwrap();
        assert_eq!(c.r, 25);
        assert!((c.s1 - 0.25).abs() < 1e-15);
        assert!((c.u - 2.25).abs() < 1e-15);
    }

    #[test]
    fn edge_coordinates_position_shift_is_linear() {
        let spec = ScalingSpec::empty(0.25).unwrap();
        let x = 1.7;
        let c = edge_coordinates(&spec, 100, 0.0, x).unwrap();
        assert!((c.u - (2.25 + spec.alpha() * x / 100f64.powf(2.0 / 3.0))).abs() < 1e-14);
    }

    #[test]
    fn beta_identity_links_the_two_forms() {
        // 2 sqrt(t) (1 + sqrt t)^2 / alpha = 2 (t (1 + sqrt t))^{2/3}
        for t in [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
            let spec = ScalingSpec::empty(t).unwrap();
            let direct = 2.0 * (t * (1.0 + t.sqrt())).powf(2.0 / 3.0);
            assert!((spec.beta() - direct).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn edge_level_at_time_one() {
        let spec = ScalingSpec::empty(0.25).unwrap();
        let c = edge_coordinates(&spec, 1000, 1.0, 0.0).unwrap();
        let expect = (250.0 + 100.0 * 2.0 * (0.25 * 1.5f64).powf(2.0 / 3.0)).floor() as usize;
        assert_eq!(c.r, expect);
    }

    #[test]
    fn edge_level_out_of_range() {
        let spec = ScalingSpec::empty(0.25).unwrap();
        assert!(matches!(
            edge_coordinates(&spec, 100, -40.0, 0.0),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            edge_coordinates(&spec, 100, 40.0, 0.0),
            Err(Error::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn edge_coordinates_monotone() {
        let spec = ScalingSpec::empty(0.4).unwrap();
        let mut prev_u = f64::NEG_INFINITY;
        for k in 0..50 {
            let c = edge_coordinates(&spec, 64, 0.0, -2.0 + 0.1 * k as f64).unwrap();
            assert!(c.u > prev_u);
            prev_u = c.u;
        }
        let mut prev_r = 0usize;
        for k in 0..20 {
            let c = edge_coordinates(&spec, 64, 0.05 * k as f64, 0.0).unwrap();
            assert!(c.r >= prev_r);
            prev_r = c.r;
        }
    }

    #[test]
    fn theorem2_centering_and_linearity() {
        let spec = ScalingSpec::empty(0.25).unwrap();
        let p = 64;
        let c = edge_coordinates(&spec, p, 0.3, 0.0).unwrap();
        let u0 = (1.0 + c.s1.sqrt()).powi(2);
        let centered = theorem2_scaling(&spec, p, 0.3, p as f64 * u0).unwrap();
        assert!(centered.value.abs() < 1e-10);
        for xi in [-5.0, -1.0, 0.5, 3.0, 5.0] {
            let raw = p as f64 * u0 + spec.alpha() * (p as f64).powf(1.0 / 3.0) * xi;
            let got = theorem2_scaling(&spec, p, 0.3, raw).unwrap();
            assert!((got.value - xi).abs() < 1e-10, "xi={xi} got {}", got.value);
        }
    }

    #[test]
    fn theorem2_literal_ratio_is_alpha_squared_t_third() {
        // The two printed normalizations differ by the factor alpha^2 t^{1/3}
        // (up to the O(1/p) centering mismatch); record the ratio of slopes.
        let spec = ScalingSpec::empty(0.25).unwrap();
        let p = 64;
        let a = theorem2_scaling(&spec, p, 0.0, 150.0).unwrap();
        let b = theorem2_scaling(&spec, p, 0.0, 151.0).unwrap();
        let slope_ratio = (b.literal - a.literal) / (b.value - a.value);
        let expect = spec.alpha().powi(2) * 0.25f64.powf(1.0 / 3.0);
        assert!(
            (slope_ratio - expect).abs() < 1e-8,
            "ratio {slope_ratio} vs {expect}"
        );
    }

    #[test]
    fn conjugation_exponent_reduced_form() {
        let spec = ScalingSpec::empty(0.25).unwrap();
        let p = 100;
        let a = edge_coordinates(&spec, p, 0.0, 0.7).unwrap();
        let b = edge_coordinates(&spec, p, 0.5, -0.3).unwrap();
        let z0 = spec.z0();
        let pairwise = p as f64 * z0 * (a.u - b.u) - (a.r as f64 - b.r as f64) * z0.ln();
        assert!(((a.conjugation_exponent - b.conjugation_exponent) - pairwise).abs() < 1e-9);
    }
}

//! Airy function of the first kind on the real line.
//!
//! Three regimes, each independently verifiable against the others on
//! overlap windows:
//!   * |x| <= 6: Maclaurin series of the two ODE solutions,
//!   * x > 6: exponential asymptotic expansion at optimal truncation,
//!   * x < -6: steepest-descent contour quadrature through the saddles
//!     +-i sqrt(|x|) (switching to the oscillatory asymptotic expansion
//!     below -7.5 where it reaches machine accuracy).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::quad::gauss_legendre_interval;

/// Ai(0) = 3^{-2/3} / Gamma(2/3).
pub const AI_ZERO: f64 = 0.355028053887817239261;
/// Ai'(0) = -3^{-1/3} / Gamma(1/3).
pub const AI_PRIME_ZERO: f64 = -0.258819403792806798405;

const SERIES_SWITCH: f64 = 6.0;
const NEG_ASYMPTOTIC_SWITCH: f64 = -7.5;
const SUPPORT: f64 = 200.0;

/// Ai(x) for |x| <= 200.
///
/// Absolute error below 1e-12 for |x| <= 10, relative error below 1e-10
/// on the exponentially small tail beyond.
pub fn airy_ai(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > SUPPORT {
        return Err(Error::OutOfRange { x, max: SUPPORT });
    }
    if x.abs() <= SERIES_SWITCH {
        Ok(ai_series(x))
    } else if x > 0.0 {
        Ok(ai_asymptotic_pos(x))
    } else if x <= NEG_ASYMPTOTIC_SWITCH {
        Ok(ai_asymptotic_neg(-x))
    } else {
        Ok(ai_contour_neg(-x))
    }
}

/// Maclaurin series Ai(x) = Ai(0) f(x) + Ai'(0) g(x) where f, g solve
/// y'' = x y with (f, f')(0) = (1, 0) and (g, g')(0) = (0, 1).
pub(crate) fn ai_series(x: f64) -> f64 {
    let x3 = x * x * x;
    let mut f_term = 1.0;
    let mut f_sum = 1.0;
    let mut g_term = x;
    let mut g_sum = x;
    for k in 1..=80 {
        let kf = k as f64;
        f_term *= x3 / ((3.0 * kf) * (3.0 * kf - 1.0));
        g_term *= x3 / ((3.0 * kf + 1.0) * (3.0 * kf));
        f_sum += f_term;
        g_sum += g_term;
        if f_term.abs() < 1e-18 && g_term.abs() < 1e-18 {
            break;
        }
    }
    AI_ZERO * f_sum + AI_PRIME_ZERO * g_sum
}

/// Coefficient ratio u_k / u_{k-1} of the Airy asymptotic series.
fn u_ratio(k: f64) -> f64 {
    (6.0 * k - 1.0) * (6.0 * k - 3.0) * (6.0 * k - 5.0) / (216.0 * k * (2.0 * k - 1.0))
}

/// x > 0: Ai(x) = e^{-zeta} / (2 sqrt(pi) x^{1/4}) * sum_k (-1)^k u_k zeta^{-k},
/// summed to its smallest term.
pub(crate) fn ai_asymptotic_pos(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut sign = -1.0;
    for k in 1..200 {
        let next = term * u_ratio(k as f64) / zeta;
        if next >= term {
            break;
        }
        term = next;
        sum += sign * term;
        sign = -sign;
        if term < 1e-18 {
            break;
        }
    }
    (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.powf(0.25)) * sum
}

/// z > 0: oscillatory expansion of Ai(-z), machine accurate for z >= 7.5.
pub(crate) fn ai_asymptotic_neg(z: f64) -> f64 {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    // t_k = u_k zeta^{-k}; even terms feed the cosine series, odd the sine.
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut term = 1.0;
    let mut even_sign = 1.0;
    let mut odd_sign = 1.0;
    let mut k = 0usize;
    loop {
        if k % 2 == 0 {
            even += even_sign * term;
            even_sign = -even_sign;
        } else {
            odd += odd_sign * term;
            odd_sign = -odd_sign;
        }
        let next = term * u_ratio((k + 1) as f64) / zeta;
        if next >= term || k > 200 {
            break;
        }
        term = next;
        k += 1;
        if term < 1e-18 {
            break;
        }
    }
    let phase = zeta - std::f64::consts::FRAC_PI_4;
    (phase.cos() * even + phase.sin() * odd) / (std::f64::consts::PI.sqrt() * z.powf(0.25))
}

/// z > 0: Ai(-z) by quadrature of (1/2 pi i) int e^{t^3/3 + z t} dt along the
/// steepest-descent path: incoming ray to -i sqrt(z), vertical segment
/// through the origin, outgoing ray from +i sqrt(z).
pub(crate) fn ai_contour_neg(z: f64) -> f64 {
    let sq = z.sqrt();
    let phi_exp = |t: Complex64| (t * t * t / 3.0 + z * t).exp();
    let mut total = Complex64::new(0.0, 0.0);

    // Rays: |integrand| = exp(-(sqrt(3)/2) sqrt(z) s^2 - s^3/3).
    let s_max = (42.0 / (0.866 * sq)).sqrt().min(6.0).max(2.5);
    let ray_panels = 10;
    let dir_out = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    let dir_in = dir_out.conj();
    let top = Complex64::new(0.0, sq);
    let bottom = Complex64::new(0.0, -sq);
    for j in 0..ray_panels {
        let a = s_max * (j as f64 / ray_panels as f64).powi(2);
        let b = s_max * ((j + 1) as f64 / ray_panels as f64).powi(2);
        let (xs, ws) = gauss_legendre_interval(16, a, b);
        for (&s, &w) in xs.iter().zip(&ws) {
            // incoming: from infinity e^{-i pi/3} down to -i sqrt(z)
            total -= dir_in * w * phi_exp(bottom + dir_in * s);
            // outgoing: from +i sqrt(z) out to infinity e^{+i pi/3}
            total += dir_out * w * phi_exp(top + dir_out * s);
        }
    }

    // Vertical segment: phase z y - y^3/3 oscillates with rate <= z.
    let wavelength = 2.0 * std::f64::consts::PI / z.max(1.0);
    let panel_len = (2.2 * wavelength).min(0.5);
    let panels = ((2.0 * sq) / panel_len).ceil() as usize;
    for j in 0..panels {
        let a = -sq + 2.0 * sq * j as f64 / panels as f64;
        let b = -sq + 2.0 * sq * (j + 1) as f64 / panels as f64;
        let (ys, ws) = gauss_legendre_interval(16, a, b);
        for (&y, &w) in ys.iter().zip(&ws) {
            total += Complex64::new(0.0, w) * phi_exp(Complex64::new(0.0, y));
        }
    }

    (total / Complex64::new(0.0, 2.0 * std::f64::consts::PI)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from the 50-term Maclaurin oracle (small x) and the
    // optimally truncated asymptotic expansions (large |x|), cross-checked
    // against each other in the overlap tests below.
    #[test]
    fn ai_at_zero() {
        assert!((airy_ai(0.0).unwrap() - 0.355028053887817).abs() < 1e-12);
    }

    #[test]
    fn ai_known_points() {
        // series region
        assert!((airy_ai(1.0).unwrap() - 0.135292416312881).abs() < 1e-12);
        assert!((airy_ai(-1.0).unwrap() - 0.535560883292352).abs() < 1e-12);
        assert!((airy_ai(2.0).unwrap() - 0.034924130423274).abs() < 1e-12);
        // asymptotic region
        let ai17 = airy_ai(17.0).unwrap();
        assert!(((ai17 - 7.05019729838861e-22) / 7.05019729838861e-22).abs() < 1e-10);
    }

    #[test]
    fn ai_positive_monotone_decreasing() {
        let mut prev = airy_ai(0.0).unwrap();
        for i in 1..=100 {
            let v = airy_ai(i as f64 * 0.1).unwrap();
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
    }

    #[test]
    fn ai_first_zero_near_minus_2_338() {
        // bisection on the series oracle
        let (mut lo, mut hi) = (-2.5, -2.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if ai_series(mid) * ai_series(lo) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((root + 2.338107410459767).abs() < 1e-9);
        assert!(airy_ai(root).unwrap().abs() < 1e-9);
    }

    #[test]
    fn two_method_overlap_positive() {
        // window [x_switch - 1, x_switch + 1] around the positive switch
        let mut x = 5.0;
        while x <= 7.0 {
            let a = ai_series(x);
            let b = ai_asymptotic_pos(x);
            assert!((a - b).abs() < 1e-10, "x={x}: {a} vs {b}");
            x += 0.125;
        }
    }

    #[test]
    fn two_method_overlap_negative() {
        // series vs contour on [-7, -5], contour vs asymptotic on [-9, -7]
        let mut x = 5.0;
        while x <= 7.0 {
            let a = ai_series(-x);
            let b = ai_contour_neg(x);
            assert!((a - b).abs() < 1e-10, "x={}: {a} vs {b}", -x);
            x += 0.125;
        }
        let mut z = 7.0f64;
        while z <= 9.0 {
            let a = ai_contour_neg(z);
            let b = ai_asymptotic_neg(z);
            assert!((a - b).abs() < 1e-10, "x={}: {a} vs {b}", -z);
            z += 0.125;
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(airy_ai(250.0).is_err());
        assert!(airy_ai(f64::NAN).is_err());
    }
}

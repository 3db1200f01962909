//! The extended Airy kernel and its generalization with two sets of
//! parameters, each available through two independent representations:
//! the lambda-integral of Airy products and the double contour integral
//! over the wedge pair (gamma, Gamma).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::KernelOnGrid;
use crate::model::ScalingSpec;
use crate::specfun::quad::{gauss_legendre_interval, wedge_contour, ContourSpec, Orientation, QuadratureRule};
use crate::specfun::airy_ai;

const POSITION_MIN: f64 = -12.0;
const POSITION_MAX: f64 = 100.0;
const MAX_TIME_GAP: f64 = 4.0;
const MIN_BACKWARD_GAP: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct LimitKernelConfig {
    /// Truncation of the positive lambda integral.
    pub lambda_truncation: f64,
    pub lambda_nodes_per_panel: usize,
    pub wedge_truncation: f64,
    pub wedge_panels: usize,
    pub wedge_nodes_per_panel: usize,
}

impl Default for LimitKernelConfig {
    fn default() -> Self {
        LimitKernelConfig {
            lambda_truncation: 40.0,
            lambda_nodes_per_panel: 20,
            wedge_truncation: 12.0,
            wedge_panels: 24,
            wedge_nodes_per_panel: 16,
        }
    }
}

fn check_window(t1: f64, x: f64, t2: f64, y: f64) -> Result<()> {
    let dt = t1 - t2;
    if dt.abs() > MAX_TIME_GAP {
        return Err(Error::UnsupportedWindow(format!(
            "|t1 - t2| = {} exceeds {MAX_TIME_GAP}",
            dt.abs()
        )));
    }
    if dt < 0.0 && dt.abs() < MIN_BACKWARD_GAP {
        return Err(Error::UnsupportedWindow(format!(
            "backward time gap {} below {MIN_BACKWARD_GAP}; the lambda tail cannot be truncated within the Airy support",
            dt.abs()
        )));
    }
    for pos in [x, y] {
        if !(POSITION_MIN..=POSITION_MAX).contains(&pos) {
            return Err(Error::UnsupportedWindow(format!(
                "position {pos} outside [{POSITION_MIN}, {POSITION_MAX}]"
            )));
        }
    }
    Ok(())
}

/// Lambda nodes/weights for the time gap dt = t1 - t2. For dt >= 0 the
/// integral runs over [0, L] with panels graded toward 0; for dt < 0 it runs
/// over [lambda_min, 0] with panels short enough to resolve the Airy
/// oscillation, where exp(-|lambda_min| |dt|) < 1e-11 bounds the tail.
fn lambda_grid(dt: f64, cfg: &LimitKernelConfig) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    if dt >= 0.0 {
        let l = cfg.lambda_truncation;
        let panels = 16;
        for j in 0..panels {
            let a = l * (j as f64 / panels as f64).powi(2);
            let b = l * ((j + 1) as f64 / panels as f64).powi(2);
            let (xs, ws) = gauss_legendre_interval(cfg.lambda_nodes_per_panel, a, b);
            nodes.extend(xs);
            weights.extend(ws);
        }
    } else {
        let lambda_min = -(26.0 / dt.abs()).min(150.0);
        let panel_len = 0.5;
        let panels = (lambda_min.abs() / panel_len).ceil() as usize;
        for j in 0..panels {
            let a = lambda_min + lambda_min.abs() * j as f64 / panels as f64;
            let b = lambda_min + lambda_min.abs() * (j + 1) as f64 / panels as f64;
            let (xs, ws) = gauss_legendre_interval(12, a, b.min(0.0));
            nodes.extend(xs);
            weights.extend(ws);
        }
    }
    (nodes, weights)
}

/// Extended Airy kernel by the lambda integral:
/// for t1 >= t2, int_0^inf e^{-lambda (t1-t2)} Ai(y+lambda) Ai(x+lambda);
/// for t1 < t2 the negative of the same integrand over (-inf, 0].
pub fn extended_airy(t1: f64, x: f64, t2: f64, y: f64) -> Result<f64> {
    extended_airy_with(t1, x, t2, y, &LimitKernelConfig::default())
}

pub fn extended_airy_with(t1: f64, x: f64, t2: f64, y: f64, cfg: &LimitKernelConfig) -> Result<f64> {
    check_window(t1, x, t2, y)?;
    let dt = t1 - t2;
    let (nodes, weights) = lambda_grid(dt, cfg);
    let sign = if dt >= 0.0 { 1.0 } else { -1.0 };
    let mut acc = 0.0;
    for (&l, &w) in nodes.iter().zip(&weights) {
        acc += w * (-l * dt).exp() * airy_ai(y + l)? * airy_ai(x + l)?;
    }
    Ok(sign * acc)
}

/// The wedge pair of the limit kernel: gamma (right-opening, traversed top
/// to bottom) and Gamma (left-opening, bottom to top), with v_Gamma < v_gamma.
#[derive(Debug, Clone)]
pub struct LimitContours {
    pub gamma: QuadratureRule,
    pub big_gamma: QuadratureRule,
    pub v_gamma: f64,
    pub v_big_gamma: f64,
}

impl LimitContours {
    pub fn new(v_big_gamma: f64, v_gamma: f64, cfg: &LimitKernelConfig) -> Result<Self> {
        if v_big_gamma >= v_gamma {
            return Err(Error::BadContours {
                v_big: v_big_gamma,
                v_small: v_gamma,
            });
        }
        let mut gamma_spec = ContourSpec::wedge(v_gamma, std::f64::consts::FRAC_PI_3, Orientation::Down);
        gamma_spec.truncation_radius = cfg.wedge_truncation;
        gamma_spec.panels = cfg.wedge_panels;
        gamma_spec.nodes_per_panel = cfg.wedge_nodes_per_panel;
        let mut big_spec = ContourSpec::wedge(
            v_big_gamma,
            2.0 * std::f64::consts::FRAC_PI_3,
            Orientation::Up,
        );
        big_spec.truncation_radius = cfg.wedge_truncation;
        big_spec.panels = cfg.wedge_panels;
        big_spec.nodes_per_panel = cfg.wedge_nodes_per_panel;
        Ok(LimitContours {
            gamma: wedge_contour(&gamma_spec)?,
            big_gamma: wedge_contour(&big_spec)?,
            v_gamma,
            v_big_gamma,
        })
    }

    /// Default vertex placement for the perturbation integrand: the sigma
    /// poles x_i - t1 must lie right of gamma and the tau poles y_j - t2
    /// left of Gamma, i.e. max_j(y_j) - t2 < v_Gamma < v_gamma < min_i(x_i) - t1.
    pub fn for_spec(spec: &ScalingSpec, t1: f64, t2: f64, cfg: &LimitKernelConfig) -> Result<Self> {
        let lo = spec
            .y()
            .iter()
            .fold(f64::NEG_INFINITY, |m, &v| m.max(v))
            .max(f64::NEG_INFINITY)
            - t2;
        let hi = spec.x().iter().fold(f64::INFINITY, |m, &v| m.min(v)) - t1;
        let (v_big, v_gamma) = match (lo.is_finite(), hi.is_finite()) {
            (false, false) => (-0.5, 0.5),
            (true, false) => (lo + 0.6, lo + 1.2),
            (false, true) => (hi - 1.2, hi - 0.6),
            (true, true) => {
                if lo >= hi {
                    return Err(Error::ContourInfeasible(format!(
                        "max_j y_j - t2 = {lo} must be < min_i x_i - t1 = {hi}"
                    )));
                }
                (lo + 0.4 * (hi - lo), lo + 0.6 * (hi - lo))
            }
        };
        Self::new(v_big, v_gamma, cfg)
    }
}

/// Double contour representation of the extended Airy kernel (valid for
/// t1 >= t2): (1/(2 pi i)^2) int_gamma int_Gamma
/// e^{y tau - tau^3/3 - x sigma + sigma^3/3} / (tau - sigma + t2 - t1).
pub fn extended_airy_contour(
    t1: f64,
    x: f64,
    t2: f64,
    y: f64,
    contours: &LimitContours,
) -> Result<f64> {
    if t1 < t2 {
        return Err(Error::UnsupportedWindow(
            "contour identity requires t1 >= t2".into(),
        ));
    }
    check_window(t1, x, t2, y)?;
    if contours.v_big_gamma >= contours.v_gamma {
        return Err(Error::BadContours {
            v_big: contours.v_big_gamma,
            v_small: contours.v_gamma,
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (&tau, &wt) in contours.big_gamma.nodes.iter().zip(&contours.big_gamma.weights) {
        let tau_part = (y * tau - tau * tau * tau / 3.0).exp() * wt;
        for (&sig, &ws) in contours.gamma.nodes.iter().zip(&contours.gamma.weights) {
            let sig_part = (sig * sig * sig / 3.0 - x * sig).exp() * ws;
            let denom = tau - sig + (t2 - t1);
            acc += tau_part * sig_part / denom;
        }
    }
    let val = acc / (Complex64::new(0.0, 2.0 * std::f64::consts::PI)).powi(2);
    realize(val)
}

fn realize(val: Complex64) -> Result<f64> {
    if val.im.abs() > 1e-8 * (1.0 + val.re.abs()) {
        return Err(Error::BadGeometry(format!(
            "imaginary residue {} too large for value {}",
            val.im, val.re
        )));
    }
    Ok(val.re)
}

/// The rational-product bracket of the perturbation integrand,
/// prod_i (t2+tau-x_i)/(t1+sigma-x_i) * prod_j (t1+sigma-y_j)/(t2+tau-y_j) - 1,
/// which vanishes where tau + t2 = sigma + t1.
fn bracket(spec: &ScalingSpec, t1: f64, t2: f64, sigma: Complex64, tau: Complex64) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    for &xi in spec.x() {
        prod *= (t2 + tau - xi) / (t1 + sigma - xi);
    }
    for &yj in spec.y() {
        prod *= (t1 + sigma - yj) / (t2 + tau - yj);
    }
    prod - 1.0
}

/// bracket / (tau + t2 - sigma - t1) with the removable singularity at the
/// Cauchy point extended by a symmetric difference in tau (h = 1e-4).
fn bracket_over_denominator(
    spec: &ScalingSpec,
    t1: f64,
    t2: f64,
    sigma: Complex64,
    tau: Complex64,
) -> Complex64 {
    let denom = tau + t2 - sigma - t1;
    if denom.norm() < 1e-6 {
        let h = 1e-4;
        (bracket(spec, t1, t2, sigma, tau + h) - bracket(spec, t1, t2, sigma, tau - h)) / (2.0 * h)
    } else {
        bracket(spec, t1, t2, sigma, tau) / denom
    }
}

/// Second term of the two-parameter-set kernel: the double contour integral
/// carrying the rational bracket. Empty parameter sets give exactly zero.
pub fn perturbation_term(
    t1: f64,
    x: f64,
    t2: f64,
    y: f64,
    spec: &ScalingSpec,
    contours: &LimitContours,
) -> Result<f64> {
    if spec.j1() == 0 && spec.j2() == 0 {
        return Ok(0.0);
    }
    check_feasible(spec, t1, t2, contours)?;
    check_window(t1, x, t2, y)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&tau, &wt) in contours.big_gamma.nodes.iter().zip(&contours.big_gamma.weights) {
        let tau_part = (y * tau - tau * tau * tau / 3.0).exp() * wt;
        for (&sig, &ws) in contours.gamma.nodes.iter().zip(&contours.gamma.weights) {
            let sig_part = (sig * sig * sig / 3.0 - x * sig).exp() * ws;
            acc += tau_part * sig_part * bracket_over_denominator(spec, t1, t2, sig, tau);
        }
    }
    let val = acc / (Complex64::new(0.0, 2.0 * std::f64::consts::PI)).powi(2);
    realize(val)
}

fn check_feasible(spec: &ScalingSpec, t1: f64, t2: f64, contours: &LimitContours) -> Result<()> {
    for &yj in spec.y() {
        if yj - t2 >= contours.v_big_gamma {
            return Err(Error::ContourInfeasible(format!(
                "tau pole y - t2 = {} not left of Gamma vertex {}",
                yj - t2,
                contours.v_big_gamma
            )));
        }
    }
    for &xi in spec.x() {
        if xi - t1 <= contours.v_gamma {
            return Err(Error::ContourInfeasible(format!(
                "sigma pole x - t1 = {} not right of gamma vertex {}",
                xi - t1,
                contours.v_gamma
            )));
        }
    }
    Ok(())
}

/// The finite-rank expansion of the perturbation: the multi-sum over index
/// subsets with k1 + k2 >= 1 of
/// (-1)^{k2} (tau+t2-sigma-t1)^{k1+k2-1}
///   / [prod_l (sigma+t1-x_{i_l}) prod_l' (tau+t2-y_{j_l'})],
/// integrated against the same exponential weight. Serves as the independent
/// oracle for `perturbation_term`.
pub fn finite_rank_expansion(
    t1: f64,
    x: f64,
    t2: f64,
    y: f64,
    spec: &ScalingSpec,
    contours: &LimitContours,
) -> Result<f64> {
    let (j1, j2) = (spec.j1(), spec.j2());
    if j1 == 0 && j2 == 0 {
        return Ok(0.0);
    }
    check_feasible(spec, t1, t2, contours)?;
    check_window(t1, x, t2, y)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&tau, &wt) in contours.big_gamma.nodes.iter().zip(&contours.big_gamma.weights) {
        let tau_part = (y * tau - tau * tau * tau / 3.0).exp() * wt;
        for (&sig, &ws) in contours.gamma.nodes.iter().zip(&contours.gamma.weights) {
            let sig_part = (sig * sig * sig / 3.0 - x * sig).exp() * ws;
            let d = tau + t2 - sig - t1;
            let mut term_sum = Complex64::new(0.0, 0.0);
            for mask1 in 0..(1usize << j1) {
                for mask2 in 0..(1usize << j2) {
                    let k1 = mask1.count_ones() as i32;
                    let k2 = mask2.count_ones() as i32;
                    if k1 + k2 == 0 {
                        continue;
                    }
                    let mut denom = Complex64::new(1.0, 0.0);
                    for (l, &xi) in spec.x().iter().enumerate() {
                        if mask1 & (1 << l) != 0 {
                            denom *= sig + t1 - xi;
                        }
                    }
                    for (l, &yj) in spec.y().iter().enumerate() {
                        if mask2 & (1 << l) != 0 {
                            denom *= tau + t2 - yj;
                        }
                    }
                    let sign = if k2 % 2 == 0 { 1.0 } else { -1.0 };
                    term_sum += sign * d.powi(k1 + k2 - 1) / denom;
                }
            }
            acc += tau_part * sig_part * term_sum;
        }
    }
    let val = acc / (Complex64::new(0.0, 2.0 * std::f64::consts::PI)).powi(2);
    realize(val)
}

/// K_{Ai;X,Y}(t1, x; t2, y): extended Airy kernel plus the perturbation term,
/// with default contour placement for the parameter sets.
pub fn extended_airy_two_params(
    t1: f64,
    x: f64,
    t2: f64,
    y: f64,
    spec: &ScalingSpec,
) -> Result<f64> {
    Ok(extended_airy_two_params_with_residue(t1, x, t2, y, spec)?.0)
}

/// Same as `extended_airy_two_params` but also reports the imaginary
/// residue discarded when realizing the double contour integral.
pub fn extended_airy_two_params_with_residue(
    t1: f64,
    x: f64,
    t2: f64,
    y: f64,
    spec: &ScalingSpec,
) -> Result<(f64, f64)> {
    let cfg = LimitKernelConfig::default();
    let base = extended_airy_with(t1, x, t2, y, &cfg)?;
    if spec.j1() == 0 && spec.j2() == 0 {
        return Ok((base, 0.0));
    }
    let contours = LimitContours::for_spec(spec, t1, t2, &cfg)?;
    check_feasible(spec, t1, t2, &contours)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&tau, &wt) in contours.big_gamma.nodes.iter().zip(&contours.big_gamma.weights) {
        let tau_part = (y * tau - tau * tau * tau / 3.0).exp() * wt;
        for (&sig, &ws) in contours.gamma.nodes.iter().zip(&contours.gamma.weights) {
            let sig_part = (sig * sig * sig / 3.0 - x * sig).exp() * ws;
            acc += tau_part * sig_part * bracket_over_denominator(spec, t1, t2, sig, tau);
        }
    }
    let val = acc / (Complex64::new(0.0, 2.0 * std::f64::consts::PI)).powi(2);
    Ok((base + realize(val)?, val.im.abs()))
}

/// Grid evaluator for the limit kernel, used by the Nystrom layer. Caches
/// nothing across blocks; within a block the Airy tables and the
/// sigma/tau node products are shared across all entries.
pub struct LimitKernel {
    spec: ScalingSpec,
    times: Vec<f64>,
    cfg: LimitKernelConfig,
}

impl LimitKernel {
    pub fn new(spec: ScalingSpec, times: Vec<f64>) -> Self {
        LimitKernel {
            spec,
            times,
            cfg: LimitKernelConfig::default(),
        }
    }

    pub fn with_config(spec: ScalingSpec, times: Vec<f64>, cfg: LimitKernelConfig) -> Self {
        LimitKernel { spec, times, cfg }
    }

    fn lambda_part(&self, dt: f64, xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
        let (nodes, weights) = lambda_grid(dt, &self.cfg);
        let sign = if dt >= 0.0 { 1.0 } else { -1.0 };
        let ax: Vec<Vec<f64>> = xs
            .par_iter()
            .map(|&x| nodes.iter().map(|&l| airy_ai(x + l)).collect::<Result<Vec<f64>>>())
            .collect::<Result<Vec<_>>>()?;
        let ay: Vec<Vec<f64>> = ys
            .par_iter()
            .map(|&y| nodes.iter().map(|&l| airy_ai(y + l)).collect::<Result<Vec<f64>>>())
            .collect::<Result<Vec<_>>>()?;
        let decay: Vec<f64> = nodes
            .iter()
            .zip(&weights)
            .map(|(&l, &w)| w * (-l * dt).exp())
            .collect();
        let cols = ys.len();
        let mut out = vec![0.0; xs.len() * cols];
        out.par_chunks_mut(cols).enumerate().for_each(|(a, row)| {
            for (b, slot) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for l in 0..decay.len() {
                    acc += decay[l] * ax[a][l] * ay[b][l];
                }
                *slot = sign * acc;
            }
        });
        Ok(out)
    }

    fn perturbation_part(&self, t1: f64, t2: f64, xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
        let contours = LimitContours::for_spec(&self.spec, t1, t2, &self.cfg)?;
        check_feasible(&self.spec, t1, t2, &contours)?;
        // R[sigma][tau] = w_sigma w_tau e^{sigma^3/3 - tau^3/3} * bracket/denominator
        let ns = contours.gamma.len();
        let nt = contours.big_gamma.len();
        let mut r = vec![Complex64::new(0.0, 0.0); ns * nt];
        for (si, (&sig, &ws)) in contours
            .gamma
            .nodes
            .iter()
            .zip(&contours.gamma.weights)
            .enumerate()
        {
            let sig_part = (sig * sig * sig / 3.0).exp() * ws;
            for (ti, (&tau, &wt)) in contours
                .big_gamma
                .nodes
                .iter()
                .zip(&contours.big_gamma.weights)
                .enumerate()
            {
                let tau_part = (-tau * tau * tau / 3.0).exp() * wt;
                r[si * nt + ti] =
                    sig_part * tau_part * bracket_over_denominator(&self.spec, t1, t2, sig, tau);
            }
        }
        // G[a][tau] = sum_sigma e^{-x_a sigma} R[sigma][tau]
        let g: Vec<Vec<Complex64>> = xs
            .par_iter()
            .map(|&x| {
                let ex: Vec<Complex64> =
                    contours.gamma.nodes.iter().map(|&s| (-x * s).exp()).collect();
                (0..nt)
                    .map(|ti| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for si in 0..ns {
                            acc += ex[si] * r[si * nt + ti];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let ey: Vec<Vec<Complex64>> = ys
            .iter()
            .map(|&y| contours.big_gamma.nodes.iter().map(|&t| (y * t).exp()).collect())
            .collect();
        let norm = (Complex64::new(0.0, 2.0 * std::f64::consts::PI)).powi(2);
        let cols = ys.len();
        let mut out = vec![0.0; xs.len() * cols];
        let mut worst_imag = 0.0f64;
        for a in 0..xs.len() {
            for b in 0..cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for ti in 0..nt {
                    acc += ey[b][ti] * g[a][ti];
                }
                let val = acc / norm;
                worst_imag = worst_imag.max(val.im.abs());
                out[a * cols + b] = val.re;
            }
        }
        let max_abs = out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if worst_imag > 1e-8 * (1.0 + max_abs) {
            return Err(Error::BadGeometry(format!(
                "imaginary residue {worst_imag} exceeds tolerance"
            )));
        }
        Ok(out)
    }
}

impl KernelOnGrid for LimitKernel {
    fn times(&self) -> &[f64] {
        &self.times
    }

    fn block(&self, i: usize, xs: &[f64], j: usize, ys: &[f64]) -> Result<Vec<f64>> {
        let (t1, t2) = (self.times[i], self.times[j]);
        for &pos in xs.iter().chain(ys) {
            check_window(t1, pos.clamp(POSITION_MIN, POSITION_MAX), t2, 0.0)?;
        }
        let mut out = self.lambda_part(t1 - t2, xs, ys)?;
        if self.spec.j1() + self.spec.j2() > 0 {
            let pert = self.perturbation_part(t1, t2, xs, ys)?;
            for (o, p) in out.iter_mut().zip(pert) {
                *o += p;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Series-oracle value of Ai'(0)^2 - 0 * Ai(0)^2 = int_0^inf Ai(lambda)^2.
    const DIAGONAL_IDENTITY: f64 =
        crate::specfun::AI_PRIME_ZERO * crate::specfun::AI_PRIME_ZERO;

    #[test]
    fn static_diagonal_identity() {
        let got = extended_airy(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(
            (got - DIAGONAL_IDENTITY).abs() < 1e-8,
            "got {got}, identity {DIAGONAL_IDENTITY}"
        );
    }

    #[test]
    fn static_kernel_symmetric() {
        let a = extended_airy(0.3, 0.7, 0.3, -0.4).unwrap();
        let b = extended_airy(0.3, -0.4, 0.3, 0.7).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn forward_kernel_decays_for_large_positions() {
        let v = extended_airy(1.0, 8.0, 0.0, 8.0).unwrap();
        assert!(v.abs() < 1e-6, "got {v}");
    }

    #[test]
    fn contour_representation_matches_lambda_integral() {
        let contours = LimitContours::new(-0.5, 0.5, &LimitKernelConfig::default()).unwrap();
        let got = extended_airy_contour(0.0, 0.0, 0.0, 0.0, &contours).unwrap();
        assert!(
            (got - DIAGONAL_IDENTITY).abs() < 1e-6,
            "contour {got} vs {DIAGONAL_IDENTITY}"
        );
    }

    #[test]
    fn contour_deformation_invariance() {
        let cfg = LimitKernelConfig::default();
        let a = LimitContours::new(-0.5, 0.5, &cfg).unwrap();
        let b = LimitContours::new(-0.5, 0.75, &cfg).unwrap();
        let (t1, x, t2, y) = (0.4, 0.3, 0.1, -0.2);
        let va = extended_airy_contour(t1, x, t2, y, &a).unwrap();
        let vb = extended_airy_contour(t1, x, t2, y, &b).unwrap();
        assert!((va - vb).abs() < 1e-8, "{va} vs {vb}");
    }

    #[test]
    fn contour_requires_ordered_vertices() {
        let cfg = LimitKernelConfig::default();
        assert!(matches!(
            LimitContours::new(0.5, -0.5, &cfg),
            Err(Error::BadContours { .. })
        ));
    }

    #[test]
    fn empty_spec_perturbation_is_zero() {
        let spec = ScalingSpec::empty(0.25).unwrap();
        let contours = LimitContours::new(-0.5, 0.5, &LimitKernelConfig::default()).unwrap();
        assert_eq!(perturbation_term(0.0, 0.3, 0.0, 0.1, &spec, &contours).unwrap(), 0.0);
        assert_eq!(
            finite_rank_expansion(0.0, 0.3, 0.0, 0.1, &spec, &contours).unwrap(),
            0.0
        );
        assert_eq!(
            extended_airy_two_params(0.0, 0.3, 0.0, 0.1, &spec).unwrap(),
            extended_airy(0.0, 0.3, 0.0, 0.1).unwrap()
        );
    }

    #[test]
    fn far_pole_perturbation_first_order_decay() {
        // x1 -> +infinity: the rank-one term collapses to Ai(x) Ai(y) / x1
        // (the sigma pole factor 1/(sigma - x1) ~ -1/x1 against the two Airy
        // contour integrals), so the perturbation decays algebraically.
        let cfg = LimitKernelConfig::default();
        let contours = LimitContours::new(-0.5, 0.5, &cfg).unwrap();
        let leading = |x1: f64| crate::specfun::AI_ZERO * crate::specfun::AI_ZERO / x1;
        for x1 in [50.0, 200.0] {
            let spec = ScalingSpec::new(0.25, vec![x1], vec![]).unwrap();
            let v = perturbation_term(0.0, 0.0, 0.0, 0.0, &spec, &contours).unwrap();
            assert!(
                (v - leading(x1)).abs() < 3.0 / (x1 * x1),
                "x1={x1}: {v} vs leading {}",
                leading(x1)
            );
        }
    }

    #[test]
    fn remark_one_expansion_agrees_rank_one() {
        let spec = ScalingSpec::new(0.25, vec![1.5], vec![]).unwrap();
        let cfg = LimitKernelConfig::default();
        let contours = LimitContours::for_spec(&spec, 0.0, 0.0, &cfg).unwrap();
        for (x, y) in [(0.0, 0.0), (0.5, -0.3), (-1.0, 1.0)] {
            let a = perturbation_term(0.0, x, 0.0, y, &spec, &contours).unwrap();
            let b = finite_rank_expansion(0.0, x, 0.0, y, &spec, &contours).unwrap();
            assert!((a - b).abs() < 1e-6, "({x},{y}): {a} vs {b}");
        }
    }

    #[test]
    fn perturbed_kernel_not_symmetric() {
        let spec = ScalingSpec::new(0.25, vec![1.0], vec![]).unwrap();
        let a = extended_airy_two_params(0.0, 0.8, 0.0, -0.2, &spec).unwrap();
        let b = extended_airy_two_params(0.0, -0.2, 0.0, 0.8, &spec).unwrap();
        assert!((a - b).abs() > 1e-8, "perturbed kernel unexpectedly symmetric: {a} vs {b}");
    }

    #[test]
    fn infeasible_contours_reported() {
        let spec = ScalingSpec::new(0.25, vec![0.5], vec![0.0]).unwrap();
        // t1 - t2 = 1.0 shifts the sigma pole to -0.5, left of the tau pole 0.
        assert!(matches!(
            LimitContours::for_spec(&spec, 1.0, 0.0, &LimitKernelConfig::default()),
            Err(Error::ContourInfeasible(_))
        ));
    }

    #[test]
    fn backward_branch_reference_value() {
        // K(0, 0.2; 0.6, -0.1); reference from independent adaptive
        // quadrature of the lambda integral (abs err < 5e-14)
        let got = extended_airy(0.0, 0.2, 0.6, -0.1).unwrap();
        assert!(
            (got - (-0.26486970093269013)).abs() < 1e-9,
            "got {got}"
        );
    }

    #[test]
    fn block_evaluator_matches_scalar_path() {
        let spec = ScalingSpec::new(0.25, vec![2.0], vec![-2.0]).unwrap();
        let kernel = LimitKernel::new(spec.clone(), vec![0.0, 0.5]);
        let xs = [-1.0, 0.5];
        let ys = [0.2, 1.4];
        for (i, j) in [(0, 0), (0, 1), (1, 0)] {
            let block = kernel.block(i, &xs, j, &ys).unwrap();
            for (a, &x) in xs.iter().enumerate() {
                for (b, &y) in ys.iter().enumerate() {
                    let t1 = [0.0, 0.5][i];
                    let t2 = [0.0, 0.5][j];
                    let scalar = extended_airy(t1, x, t2, y).unwrap()
                        + perturbation_term(
                            t1,
                            x,
                            t2,
                            y,
                            &spec,
                            &LimitContours::for_spec(&spec, t1, t2, &LimitKernelConfig::default())
                                .unwrap(),
                        )
                        .unwrap();
                    assert!(
                        (block[a * 2 + b] - scalar).abs() < 1e-9,
                        "block ({i},{j}) entry ({a},{b})"
                    );
                }
            }
        }
    }
}

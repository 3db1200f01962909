//! The finite-p correlation kernel
//!
//!   K(r, u; s, v) = (1/(2 pi i)^2) oint_C dz oint_C' dw  e^{w v - z u} / (w - z)
//!       * prod_{k<=r} (z + pihat_k) / prod_{l<=s} (w + pihat_l)
//!       * prod_i (w - pi_i) / (z - pi_i)
//!     - Psi_{r,s}(u, v),
//!
//! with C around every pi_i, C' around every -pihat_l (l <= s), the two
//! contours disjoint and mutually non-containing, and its edge-scaled
//! conjugated version. Every node evaluation is accumulated in log
//! magnitude: at p = 200 the raw integrand magnitudes exceed e^{300}.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{KernelOnGrid, KernelSlice};
use crate::model::{build_perturbed_params, edge_coordinates, ModelParams, ScalingSpec};
use crate::specfun::quad::{
    arc_contour, circle_contour, wedge_contour, ContourSpec, Orientation, QuadratureRule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourStrategy {
    /// Disjoint disks around the two parameter clusters. Robust at small p;
    /// catastrophically ill-conditioned at edge scale.
    Circles,
    /// Saddle-anchored wedge pair closed by circular arcs around the bulk
    /// parameters; the geometry the scaled kernel requires.
    Wedge,
}

#[derive(Debug, Clone)]
pub struct FiniteKernelConfig {
    pub circle_nodes: usize,
    pub wedge_panels: usize,
    pub wedge_nodes_per_panel: usize,
    pub arc_nodes: usize,
}

impl Default for FiniteKernelConfig {
    fn default() -> Self {
        FiniteKernelConfig {
            circle_nodes: 256,
            wedge_panels: 24,
            wedge_nodes_per_panel: 16,
            arc_nodes: 96,
        }
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Psi_{r,s}(u, v): zero unless r < s and u < v, otherwise the positively
/// oriented loop integral of e^{w (v-u)} prod_{k=r+1}^{s} 1/(w + pihat_k)
/// around all the poles.
pub fn psi_rs(params: &ModelParams, r: usize, s: usize, u: f64, v: f64) -> f64 {
    psi_rs_with(params, r, s, u, v, 192)
}

pub fn psi_rs_with(params: &ModelParams, r: usize, s: usize, u: f64, v: f64, nodes: usize) -> f64 {
    if r >= s || u >= v {
        return 0.0;
    }
    match psi_rs_log(&params.pihat()[r..s], v - u, nodes) {
        Some(log) => log.exp(),
        None => 0.0,
    }
}

/// ln Psi for the pole multiset `pihat_slice` and gap d = v - u; None when
/// the value vanishes. A single repeated pole -a of order q has the closed
/// form e^{-a d} d^{q-1} / (q-1)!; distinct poles fall back to the circle
/// rule (adequate at the small scales where they occur).
fn psi_rs_log(pihat_slice: &[f64], d: f64, nodes: usize) -> Option<f64> {
    if pihat_slice.is_empty() || d <= 0.0 {
        return None;
    }
    let q = pihat_slice.len();
    let lo = pihat_slice.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let hi = pihat_slice.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    if hi - lo < 1e-12 {
        let a = 0.5 * (hi + lo);
        if q == 1 {
            return Some(-a * d);
        }
        return Some(-a * d + (q as f64 - 1.0) * d.ln() - ln_factorial(q - 1));
    }
    // mixed poles: shifted trapezoid in log space
    let center = Complex64::new(-0.5 * (hi + lo), 0.0);
    let radius = 0.5 * (hi - lo) + 0.5;
    let rule = circle_contour(center, radius, nodes.max(64));
    let exps: Vec<Complex64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&w, &wgt)| {
            let mut e = w * d + wgt.ln();
            for &ph in pihat_slice {
                e -= (w + ph).ln();
            }
            e
        })
        .collect();
    let m = exps.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
    let sum: Complex64 = exps.iter().map(|&e| (e - m).exp()).sum();
    let val = sum / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    if val.re <= 0.0 {
        return None;
    }
    Some(m + val.re.ln())
}

/// The closed z- and w-contours for one (r, s) evaluation.
struct FiniteContours {
    z_rule: QuadratureRule,
    w_rule: QuadratureRule,
}

/// Grouped parameter multiset: (value, multiplicity) pairs, so bulk products
/// like (z - 1)^{p - J1} cost one log.
fn group(values: &[f64]) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in values {
        match out.iter_mut().find(|(w, _)| *w == v) {
            Some((_, m)) => *m += 1,
            None => out.push((v, 1)),
        }
    }
    out
}

/// Composite wedge geometry: the z-contour is a right-opening wedge at
/// `v_z` (half-angle pi/3) closed by the arc of radius sqrt(3) (c_z - v_z)
/// around the far z-pole c_z; the w-contour mirrors it, left-opening at
/// `v_w` with its arc around the far w-pole. With ray length 2 (c - v) the
/// junctions land exactly at polar angle +-pi/2 from the arc centers, so
/// each closed path is seamless.
fn build_wedge_pair(
    z_poles: &[f64],
    w_poles: &[f64],
    v_z: f64,
    v_w: f64,
    cfg: &FiniteKernelConfig,
) -> Result<FiniteContours> {
    let z_min = z_poles.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let z_max = z_poles.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let w_min = w_poles.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let w_max = w_poles.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    if !(w_max < v_w && v_w < v_z && v_z < z_min) {
        return Err(Error::ContourInfeasible(format!(
            "need max w-pole {w_max} < v_w {v_w} < v_z {v_z} < min z-pole {z_min}"
        )));
    }
    let g_z = z_max - v_z;
    let g_w = v_w - w_min;
    let mut z_spec = ContourSpec::wedge(v_z, std::f64::consts::FRAC_PI_3, Orientation::Down);
    z_spec.truncation_radius = 2.0 * g_z;
    z_spec.panels = cfg.wedge_panels;
    z_spec.nodes_per_panel = cfg.wedge_nodes_per_panel;
    let mut z_rule = wedge_contour(&z_spec)?;
    let z_arc = arc_contour(
        Complex64::new(z_max, 0.0),
        3.0f64.sqrt() * g_z,
        -std::f64::consts::FRAC_PI_2,
        std::f64::consts::FRAC_PI_2,
        cfg.arc_nodes,
    );
    z_rule.nodes.extend(z_arc.nodes);
    z_rule.weights.extend(z_arc.weights);

    let mut w_spec = ContourSpec::wedge(v_w, 2.0 * std::f64::consts::FRAC_PI_3, Orientation::Up);
    w_spec.truncation_radius = 2.0 * g_w;
    w_spec.panels = cfg.wedge_panels;
    w_spec.nodes_per_panel = cfg.wedge_nodes_per_panel;
    let mut w_rule = wedge_contour(&w_spec)?;
    let w_arc = arc_contour(
        Complex64::new(w_min, 0.0),
        3.0f64.sqrt() * g_w,
        std::f64::consts::FRAC_PI_2,
        3.0 * std::f64::consts::FRAC_PI_2,
        cfg.arc_nodes,
    );
    w_rule.nodes.extend(w_arc.nodes);
    w_rule.weights.extend(w_arc.weights);
    Ok(FiniteContours { z_rule, w_rule })
}

fn build_circle_pair(
    z_poles: &[f64],
    w_poles: &[f64],
    cfg: &FiniteKernelConfig,
) -> Result<FiniteContours> {
    let z_min = z_poles.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let z_max = z_poles.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let w_min = w_poles.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let w_max = w_poles.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let gap = z_min - w_max;
    if gap <= 0.0 {
        return Err(Error::ContourInfeasible(format!(
            "clusters not separable by disjoint disks: min z-pole {z_min} <= max w-pole {w_max}"
        )));
    }
    let mid = 0.5 * (z_min + w_max);
    let c_z = 0.5 * (z_min + z_max);
    let c_w = 0.5 * (w_min + w_max);
    let r_z = c_z - (mid + 0.25 * gap);
    let r_w = (mid - 0.25 * gap) - c_w;
    Ok(FiniteContours {
        z_rule: circle_contour(Complex64::new(c_z, 0.0), r_z, cfg.circle_nodes),
        w_rule: circle_contour(Complex64::new(c_w, 0.0), r_w, cfg.circle_nodes),
    })
}

fn build_contours(
    params: &ModelParams,
    s: usize,
    strategy: ContourStrategy,
    saddle_vertices: Option<(f64, f64)>,
    cfg: &FiniteKernelConfig,
) -> Result<FiniteContours> {
    let z_poles: Vec<f64> = params.pi().to_vec();
    let w_poles: Vec<f64> = params.pihat()[..s].iter().map(|&v| -v).collect();
    match strategy {
        ContourStrategy::Circles => build_circle_pair(&z_poles, &w_poles, cfg),
        ContourStrategy::Wedge => {
            let z_min = z_poles.iter().fold(f64::INFINITY, |m, &v| m.min(v));
            let w_max = w_poles.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
            let gap = z_min - w_max;
            if gap <= 0.0 {
                return Err(Error::ContourInfeasible(format!(
                    "no gap between clusters: min z-pole {z_min}, max w-pole {w_max}"
                )));
            }
            let (v_z, v_w) = match saddle_vertices {
                // saddle-anchored vertices, when they land inside the gap
                Some((vz, vw)) if w_max < vw && vw < vz && vz < z_min => (vz, vw),
                _ => (w_max + 2.0 * gap / 3.0, w_max + gap / 3.0),
            };
            build_wedge_pair(&z_poles, &w_poles, v_z, v_w, cfg)
        }
    }
}

/// Per-node, position-independent log factors of one contour (weight folded
/// in), so a grid of positions reuses the O(p) parameter products.
struct NodeBook {
    nodes: Vec<Complex64>,
    base: Vec<Complex64>,
}

fn z_book(rule: &QuadratureRule, params: &ModelParams, r: usize) -> NodeBook {
    let pihat_groups = group(&params.pihat()[..r]);
    let pi_groups = group(params.pi());
    let base = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&z, &w)| {
            let mut acc = w.ln();
            for &(v, m) in &pihat_groups {
                acc += (m as f64) * (z + v).ln();
            }
            for &(v, m) in &pi_groups {
                acc -= (m as f64) * (z - v).ln();
            }
            acc
        })
        .collect();
    NodeBook {
        nodes: rule.nodes.clone(),
        base,
    }
}

fn w_book(rule: &QuadratureRule, params: &ModelParams, s: usize) -> NodeBook {
    let pihat_groups = group(&params.pihat()[..s]);
    let pi_groups = group(params.pi());
    let base = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&w, &wgt)| {
            let mut acc = wgt.ln();
            for &(v, m) in &pihat_groups {
                acc -= (m as f64) * (w + v).ln();
            }
            for &(v, m) in &pi_groups {
                acc += (m as f64) * (w - v).ln();
            }
            acc
        })
        .collect();
    NodeBook {
        nodes: rule.nodes.clone(),
        base,
    }
}

/// Log-stabilized double contour sums on a position grid. With
///   A_i(a) = base_z(i) - z_i us[a]   and   B_j(b) = base_w(j) + w_j vs[b],
/// entry (a, b) is (1/(2 pi i)^2) sum_ij e^{A_i + B_j + sa[a] + sb[b]} / (w_j - z_i),
/// where sa/sb carry the (additively split) conjugation exponent, folded
/// into the node exponents before any summation. Exponent books are
/// max-shifted per grid line so every summand has modulus <= 1.
fn contour_grid(
    zb: &NodeBook,
    wb: &NodeBook,
    us: &[f64],
    vs: &[f64],
    sa: &[f64],
    sb: &[f64],
) -> Result<Vec<Complex64>> {
    use rayon::prelude::*;
    let (nz, nw) = (zb.nodes.len(), wb.nodes.len());
    // per-u inner sums G[a][j] = sum_i e^{A_i(a) - M1_a} / (w_j - z_i)
    let g: Vec<(f64, Vec<Complex64>)> = us
        .par_iter()
        .map(|&u| {
            let az: Vec<Complex64> = zb
                .base
                .iter()
                .zip(&zb.nodes)
                .map(|(&b, &z)| b - z * u)
                .collect();
            let m1 = az.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
            let ez: Vec<Complex64> = az.iter().map(|&e| (e - m1).exp()).collect();
            let row: Vec<Complex64> = (0..nw)
                .map(|j| {
                    let wnode = wb.nodes[j];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..nz {
                        acc += ez[i] / (wnode - zb.nodes[i]);
                    }
                    acc
                })
                .collect();
            (m1, row)
        })
        .collect();
    let ew: Vec<(f64, Vec<Complex64>)> = vs
        .iter()
        .map(|&v| {
            let bw: Vec<Complex64> = wb
                .base
                .iter()
                .zip(&wb.nodes)
                .map(|(&b, &w)| b + w * v)
                .collect();
            let m2 = bw.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
            (m2, bw.iter().map(|&e| (e - m2).exp()).collect())
        })
        .collect();
    let norm = Complex64::new(0.0, 2.0 * std::f64::consts::PI).powi(2);
    let mut out = vec![Complex64::new(0.0, 0.0); us.len() * vs.len()];
    for (a, (m1, grow)) in g.iter().enumerate() {
        for (b, (m2, ewb)) in ew.iter().enumerate() {
            let log_scale = m1 + m2 + sa[a] + sb[b];
            if log_scale > 600.0 {
                return Err(Error::OverflowGuard(log_scale));
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..nw {
                acc += ewb[j] * grow[j];
            }
            out[a * vs.len() + b] = acc / norm * log_scale.exp();
        }
    }
    Ok(out)
}

fn contour_part(
    zb: &NodeBook,
    wb: &NodeBook,
    u_scaled: f64,
    v_scaled: f64,
    shift: f64,
) -> Result<Complex64> {
    Ok(contour_grid(zb, wb, &[u_scaled], &[v_scaled], &[shift], &[0.0])?[0])
}

/// Theorem-3 kernel at raw positions. Levels in [1, p]; positions
/// nonnegative (the point process lives on the positive half-line).
pub fn finite_kernel(
    params: &ModelParams,
    r: usize,
    u: f64,
    s: usize,
    v: f64,
    strategy: ContourStrategy,
    cfg: &FiniteKernelConfig,
) -> Result<f64> {
    let p = params.p();
    if r < 1 || r > p || s < 1 || s > p {
        return Err(Error::LevelOutOfRange {
            r: r.max(s) as i64,
            p,
        });
    }
    if u < 0.0 || v < 0.0 {
        return Err(Error::UnsupportedWindow(format!(
            "finite-kernel positions must be nonnegative (got {u}, {v})"
        )));
    }
    let contours = build_contours(params, s, strategy, None, cfg)?;
    let zb = z_book(&contours.z_rule, params, r);
    let wb = w_book(&contours.w_rule, params, s);
    let val = contour_part(&zb, &wb, u, v, 0.0)?;
    if val.im.abs() > 1e-8 * (1.0 + val.re.abs()) {
        return Err(Error::BadGeometry(format!(
            "imaginary residue {} on finite kernel",
            val.im
        )));
    }
    Ok(val.re - psi_rs_with(params, r, s, u, v, cfg.circle_nodes))
}

/// Edge-scaled, conjugated finite kernel on scaled coordinates:
/// (alpha / p^{2/3}) e^{Delta} K_p(r, u; s, v) with
/// Delta = p z0 (u - v) - (r - s) ln z0.
pub struct ScaledFiniteKernel {
    spec: ScalingSpec,
    p: usize,
    params: ModelParams,
    times: Vec<f64>,
    strategy: ContourStrategy,
    cfg: FiniteKernelConfig,
}

impl ScaledFiniteKernel {
    pub fn new(
        spec: ScalingSpec,
        p: usize,
        times: Vec<f64>,
        strategy: ContourStrategy,
    ) -> Result<Self> {
        let params = build_perturbed_params(&spec, p)?;
        Ok(ScaledFiniteKernel {
            spec,
            p,
            params,
            times,
            strategy,
            cfg: FiniteKernelConfig::default(),
        })
    }

    pub fn with_config(mut self, cfg: FiniteKernelConfig) -> Self {
        self.cfg = cfg;
        self
    }

    /// Saddle-anchored vertex pair: v_z = z0 + m / (alpha p^{1/3}) with m in
    /// the pole gap (midpoint of (max y, min x); +-1 offsets when one set is
    /// empty), and v_w between v_z and the w-cluster.
    fn saddle_vertices(&self) -> (f64, f64) {
        let scale = self.spec.alpha() * (self.p as f64).powf(1.0 / 3.0);
        let min_x = self.spec.x().iter().fold(f64::INFINITY, |m, &v| m.min(v));
        let max_y = self
            .spec
            .y()
            .iter()
            .fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        let m = match (self.spec.j1() > 0, self.spec.j2() > 0) {
            (true, true) => 0.5 * (min_x + max_y),
            (true, false) => min_x - 1.0,
            (false, true) => max_y + 1.0,
            (false, false) => 0.0,
        };
        let m_w = if self.spec.j2() > 0 {
            0.5 * (m + max_y)
        } else {
            m - 1.0
        };
        let z0 = self.spec.z0();
        (z0 + m / scale, z0 + m_w / scale)
    }

    /// Kernel values on the scaled grid (times[i], xs) x (times[j], ys),
    /// with the conjugation exponent folded into each node exponent. The
    /// exponent splits additively, Delta = (p z0 u - r ln z0) - (p z0 v - s ln z0),
    /// so the grid evaluation factorizes over rows and columns.
    pub fn slice(&self, i: usize, xs: &[f64], j: usize, ys: &[f64]) -> Result<KernelSlice> {
        let pf = self.p as f64;
        let (t1, t2) = (self.times[i], self.times[j]);
        let ca = edge_coordinates(&self.spec, self.p, t1, 0.0)?;
        let cb = edge_coordinates(&self.spec, self.p, t2, 0.0)?;
        let (r, s) = (ca.r, cb.r);
        let contours = build_contours(
            &self.params,
            s,
            self.strategy,
            Some(self.saddle_vertices()),
            &self.cfg,
        )?;
        let zb = z_book(&contours.z_rule, &self.params, r);
        let wb = w_book(&contours.w_rule, &self.params, s);
        let z0 = self.spec.z0();
        let prefactor = self.spec.alpha() / pf.powf(2.0 / 3.0) * pf;
        let us: Vec<f64> = xs
            .iter()
            .map(|&x| edge_coordinates(&self.spec, self.p, t1, x).map(|c| c.u))
            .collect::<Result<_>>()?;
        let vs: Vec<f64> = ys
            .iter()
            .map(|&y| edge_coordinates(&self.spec, self.p, t2, y).map(|c| c.u))
            .collect::<Result<_>>()?;
        let us_scaled: Vec<f64> = us.iter().map(|&u| pf * u).collect();
        let vs_scaled: Vec<f64> = vs.iter().map(|&v| pf * v).collect();
        let sa: Vec<f64> = us.iter().map(|&u| pf * z0 * u - r as f64 * z0.ln()).collect();
        let sb: Vec<f64> = vs
            .iter()
            .map(|&v| -(pf * z0 * v - s as f64 * z0.ln()))
            .collect();
        let raw = contour_grid(&zb, &wb, &us_scaled, &vs_scaled, &sa, &sb)?;
        let mut values = vec![0.0; xs.len() * ys.len()];
        let mut worst_imag = 0.0f64;
        for (ai, &u) in us.iter().enumerate() {
            for (bi, &v) in vs.iter().enumerate() {
                let main = raw[ai * vs.len() + bi];
                worst_imag = worst_imag.max(main.im.abs() * prefactor);
                let mut val = prefactor * main.re;
                if r < s && u < v {
                    if let Some(log_psi) = psi_rs_log(
                        &self.params.pihat()[r..s],
                        pf * (v - u),
                        self.cfg.circle_nodes,
                    ) {
                        // alpha/p^{2/3} * e^{Delta} * p * Psi(pu, pv)
                        let delta = sa[ai] + sb[bi];
                        let log_term = (self.spec.alpha() / pf.powf(2.0 / 3.0)).ln()
                            + pf.ln()
                            + delta
                            + log_psi;
                        if log_term > 600.0 {
                            return Err(Error::OverflowGuard(log_term));
                        }
                        val -= log_term.exp();
                    }
                }
                values[ai * vs.len() + bi] = val;
            }
        }
        Ok(KernelSlice {
            rows: xs.len(),
            cols: ys.len(),
            values,
            max_imag_residue: worst_imag,
            conjugation: format!("exp(p z0 (u - v) - (r - s) ln z0), z0 = {z0}"),
        })
    }
}

impl KernelOnGrid for ScaledFiniteKernel {
    fn times(&self) -> &[f64] {
        &self.times
    }

    fn block(&self, i: usize, xs: &[f64], j: usize, ys: &[f64]) -> Result<Vec<f64>> {
        let slice = self.slice(i, xs, j, ys)?;
        if !slice.residue_ok() {
            return Err(Error::BadGeometry(format!(
                "imaginary residue {} on scaled finite kernel",
                slice.max_imag_residue
            )));
        }
        Ok(slice.values)
    }
}

/// The Theorem-3 kernel as a grid evaluator over raw (level, position)
/// coordinates; `times()` reports the levels as reals.
pub struct RawFiniteKernel {
    params: ModelParams,
    levels: Vec<usize>,
    level_times: Vec<f64>,
    strategy: ContourStrategy,
    cfg: FiniteKernelConfig,
}

impl RawFiniteKernel {
    pub fn new(params: ModelParams, levels: Vec<usize>, strategy: ContourStrategy) -> Self {
        let level_times = levels.iter().map(|&r| r as f64).collect();
        RawFiniteKernel {
            params,
            levels,
            level_times,
            strategy,
            cfg: FiniteKernelConfig::default(),
        }
    }
}

impl KernelOnGrid for RawFiniteKernel {
    fn times(&self) -> &[f64] {
        &self.level_times
    }

    fn block(&self, i: usize, xs: &[f64], j: usize, ys: &[f64]) -> Result<Vec<f64>> {
        let (r, s) = (self.levels[i], self.levels[j]);
        let contours = build_contours(&self.params, s, self.strategy, None, &self.cfg)?;
        let zb = z_book(&contours.z_rule, &self.params, r);
        let wb = w_book(&contours.w_rule, &self.params, s);
        let sa = vec![0.0; xs.len()];
        let sb = vec![0.0; ys.len()];
        let raw = contour_grid(&zb, &wb, xs, ys, &sa, &sb)?;
        let mut out = vec![0.0; xs.len() * ys.len()];
        let mut worst_imag = 0.0f64;
        let mut max_abs = 0.0f64;
        for (a, &u) in xs.iter().enumerate() {
            for (b, &v) in ys.iter().enumerate() {
                let val = raw[a * ys.len() + b];
                worst_imag = worst_imag.max(val.im.abs());
                let k = val.re - psi_rs_with(&self.params, r, s, u, v, self.cfg.circle_nodes);
                max_abs = max_abs.max(k.abs());
                out[a * ys.len() + b] = k;
            }
        }
        if worst_imag > 1e-8 * (1.0 + max_abs) {
            return Err(Error::BadGeometry(format!(
                "imaginary residue {worst_imag} on finite kernel block"
            )));
        }
        Ok(out)
    }
}

/// Scalar convenience wrapper around `ScaledFiniteKernel::slice`.
pub fn scaled_finite_kernel(
    spec: &ScalingSpec,
    p: usize,
    time1: f64,
    pos1: f64,
    time2: f64,
    pos2: f64,
    strategy: ContourStrategy,
) -> Result<f64> {
    let kernel = ScaledFiniteKernel::new(spec.clone(), p, vec![time1, time2], strategy)?;
    let slice = kernel.slice(0, &[pos1], 1, &[pos2])?;
    if !slice.residue_ok() {
        return Err(Error::BadGeometry(format!(
            "imaginary residue {}",
            slice.max_imag_residue
        )));
    }
    Ok(slice.values[0])
}

//! Quadrature primitives: Gauss-Legendre panels, wedge (two-ray) contours
//! and circle contours for complex integrals.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// Nodes and weights for a complex line integral: integral f = sum w_i f(z_i).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    pub description: String,
}

impl QuadratureRule {
    pub fn integrate<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same path traversed backwards.
    pub fn reversed(&self) -> QuadratureRule {
        QuadratureRule {
            nodes: self.nodes.iter().rev().copied().collect(),
            weights: self.weights.iter().rev().map(|w| -w).collect(),
            description: format!("{} (reversed)", self.description),
        }
    }
}

/// Gauss-Legendre nodes/weights on [-1, 1], by Newton iteration on P_n.
/// Exact for polynomials of degree <= 2n - 1. Cached per n.
pub fn gauss_legendre_raw(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && n <= 512, "gauss_legendre supports 1 <= n <= 512");
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }

    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n(x) = 0.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n and P_n'.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                // one polishing step after convergence
            }
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        // recompute weight at the center node
        let mut p0 = 1.0;
        let mut p1 = 0.0;
        for k in 2..=n {
            let kf = k as f64;
            let p2 = (-(kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (0.0 * p1 - p0) / (0.0 - 1.0);
        weights[n / 2] = 2.0 / (dp * dp);
    }
    cache.lock().unwrap().insert(n, (nodes.clone(), weights.clone()));
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to the real interval [a, b].
pub fn gauss_legendre_interval(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre_raw(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|&x| mid + half * x).collect(),
        ws.iter().map(|&w| w * half).collect(),
    )
}

/// The standard rule on [-1, 1], packaged as a (real-node) complex rule.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    let (xs, ws) = gauss_legendre_raw(n);
    QuadratureRule {
        nodes: xs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        weights: ws.iter().map(|&w| Complex64::new(w, 0.0)).collect(),
        description: format!("gauss-legendre n={n} on [-1,1]"),
    }
}

/// Path orientation for wedge contours; circles are always counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Gamma-style: from angle -theta at infinity, through the vertex, out at +theta.
    Up,
    /// gamma-style: from +theta at infinity, through the vertex, out at -theta.
    Down,
    Counterclockwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourKind {
    RayWedge,
    Circle,
    Composite,
}

/// Declarative description of a contour piece.
#[derive(Debug, Clone)]
pub struct ContourSpec {
    pub kind: ContourKind,
    pub vertex: Complex64,
    /// Half-opening angle of the ray pair (pi/3 for gamma, 2pi/3 for Gamma).
    pub angle: f64,
    pub truncation_radius: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub orientation: Orientation,
}

impl ContourSpec {
    pub fn wedge(vertex: f64, angle: f64, orientation: Orientation) -> Self {
        ContourSpec {
            kind: ContourKind::RayWedge,
            vertex: Complex64::new(vertex, 0.0),
            angle,
            truncation_radius: 12.0,
            panels: 24,
            nodes_per_panel: 16,
            orientation,
        }
    }
}

/// Quadratically graded panel breakpoints on [0, r]: dense near 0.
fn graded_breakpoints(r: f64, panels: usize) -> Vec<f64> {
    (0..=panels)
        .map(|j| r * (j as f64 / panels as f64).powi(2))
        .collect()
}

/// Builds nodes/weights along {vertex + s e^{+i theta}} U {vertex + s e^{-i theta}},
/// s in (0, truncation_radius], with the requested orientation and graded
/// panels concentrating nodes near the vertex.
pub fn wedge_contour(spec: &ContourSpec) -> Result<QuadratureRule> {
    if spec.kind != ContourKind::RayWedge {
        return Err(Error::BadGeometry("wedge_contour requires RayWedge kind".into()));
    }
    if !(spec.angle > 0.0 && spec.angle < std::f64::consts::PI) {
        return Err(Error::BadGeometry(format!("wedge angle {} outside (0, pi)", spec.angle)));
    }
    if spec.truncation_radius <= 0.0 {
        return Err(Error::BadGeometry("truncation_radius must be positive".into()));
    }
    if spec.panels * spec.nodes_per_panel > 100_000 {
        return Err(Error::BadGeometry("node budget exceeded".into()));
    }
    let (first_dir, second_dir) = match spec.orientation {
        Orientation::Down => (
            Complex64::from_polar(1.0, spec.angle),
            Complex64::from_polar(1.0, -spec.angle),
        ),
        Orientation::Up => (
            Complex64::from_polar(1.0, -spec.angle),
            Complex64::from_polar(1.0, spec.angle),
        ),
        Orientation::Counterclockwise => {
            return Err(Error::BadGeometry("wedge orientation must be Up or Down".into()))
        }
    };
    let brk = graded_breakpoints(spec.truncation_radius, spec.panels);
    let mut nodes = Vec::with_capacity(2 * spec.panels * spec.nodes_per_panel);
    let mut weights = Vec::with_capacity(nodes.capacity());
    // Incoming ray: s from truncation to 0, so dz = -dir * ds.
    for w in brk.windows(2).rev() {
        let (xs, ws) = gauss_legendre_interval(spec.nodes_per_panel, w[0], w[1]);
        for (s, wgt) in xs.iter().rev().zip(ws.iter().rev()) {
            nodes.push(spec.vertex + first_dir * *s);
            weights.push(-first_dir * *wgt);
        }
    }
    // Outgoing ray: s from 0 to truncation.
    for w in brk.windows(2) {
        let (xs, ws) = gauss_legendre_interval(spec.nodes_per_panel, w[0], w[1]);
        for (s, wgt) in xs.iter().zip(ws.iter()) {
            nodes.push(spec.vertex + second_dir * *s);
            weights.push(second_dir * *wgt);
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        description: format!(
            "wedge vertex={} angle={:.4} r={} {:?}",
            spec.vertex, spec.angle, spec.truncation_radius, spec.orientation
        ),
    })
}

/// Counterclockwise trapezoid rule on a circle; spectrally accurate for
/// integrands analytic in an annulus around the path.
pub fn circle_contour(center: Complex64, radius: f64, n: usize) -> QuadratureRule {
    assert!(radius > 0.0 && n >= 8);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let step = 2.0 * std::f64::consts::PI / n as f64;
    for k in 0..n {
        let theta = step * (k as f64 + 0.5);
        let e = Complex64::from_polar(1.0, theta);
        nodes.push(center + radius * e);
        weights.push(Complex64::new(0.0, 1.0) * radius * e * step);
    }
    QuadratureRule {
        nodes,
        weights,
        description: format!("circle center={center} r={radius} n={n}"),
    }
}

/// Arc of a circle from angle a to angle b (counterclockwise when b > a),
/// integrated with Gauss-Legendre in the angle.
pub fn arc_contour(center: Complex64, radius: f64, a: f64, b: f64, n: usize) -> QuadratureRule {
    let (ths, ws) = gauss_legendre_interval(n, a, b);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (&th, &w) in ths.iter().zip(&ws) {
        let e = Complex64::from_polar(1.0, th);
        nodes.push(center + radius * e);
        weights.push(Complex64::new(0.0, 1.0) * radius * e * w);
    }
    QuadratureRule {
        nodes,
        weights,
        description: format!("arc center={center} r={radius} [{a:.3},{b:.3}] n={n}"),
    }
}

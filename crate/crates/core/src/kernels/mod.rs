//! Correlation kernels: the extended Airy kernel, its two-parameter-set
//! generalization (by two independent formulas), the finite-p kernel with
//! its Psi correction, and the scaled/conjugated finite kernel.

pub mod extended;
pub mod finite;

pub use extended::{
    extended_airy, extended_airy_contour, extended_airy_two_params,
    extended_airy_two_params_with_residue, finite_rank_expansion, perturbation_term,
    LimitContours, LimitKernel, LimitKernelConfig,
};
pub use finite::{
    finite_kernel, psi_rs, scaled_finite_kernel, ContourStrategy, FiniteKernelConfig,
    RawFiniteKernel, ScaledFiniteKernel,
};

use crate::error::Result;

/// A kernel sampled over time/position grids, as consumed by the Nystrom
/// discretization. `block` returns the row-major value matrix
/// K(time_i, xs[a]; time_j, ys[b]).
pub trait KernelOnGrid: Sync {
    fn times(&self) -> &[f64];
    fn block(&self, i: usize, xs: &[f64], j: usize, ys: &[f64]) -> Result<Vec<f64>>;

    fn eval(&self, i: usize, x: f64, j: usize, y: f64) -> Result<f64> {
        Ok(self.block(i, &[x], j, &[y])?[0])
    }
}

/// A kernel evaluated on a position grid, with the conjugation metadata and
/// the largest imaginary residue discarded when realizing contour values.
#[derive(Debug, Clone)]
pub struct KernelSlice {
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
    pub max_imag_residue: f64,
    pub conjugation: String,
}

impl KernelSlice {
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.cols + b]
    }

    /// Contour integrands here are conjugate-symmetric, so residues beyond
    /// quadrature noise indicate a broken contour.
    pub fn residue_ok(&self) -> bool {
        let max = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.max_imag_residue <= 1e-8 * (1.0 + max)
    }
}

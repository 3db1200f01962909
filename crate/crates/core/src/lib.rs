//! Numerical laboratory for inhomogeneous exponential last-passage
//! percolation, the generalized Wishart ensemble, the extended Airy kernel
//! with two sets of parameters, and the Fredholm-determinant gap
//! probabilities connecting them.

pub mod ensemble;
pub mod error;
pub mod fredholm;
pub mod kernels;
pub mod model;
pub mod percolation;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};

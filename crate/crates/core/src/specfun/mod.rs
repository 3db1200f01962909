//! Special functions and quadrature primitives.

pub mod airy;
pub mod quad;

pub use airy::{airy_ai, AI_PRIME_ZERO, AI_ZERO};
pub use quad::{
    arc_contour, circle_contour, gauss_legendre, gauss_legendre_interval, gauss_legendre_raw,
    wedge_contour, ContourKind, ContourSpec, Orientation, QuadratureRule,
};

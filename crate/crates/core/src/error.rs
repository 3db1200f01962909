use thiserror::Error;

/// Errors surfaced by the model, sampling, quadrature and determinant layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("pi[{i}] + pihat[{j}] = {sum} is not strictly positive")]
    NonPositiveRate { i: usize, j: usize, sum: f64 },
    #[error("parameter vectors must have equal nonzero length (got {left} and {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("scaling parameter t = {t} must lie strictly inside (0, 1)")]
    DegenerateT { t: f64 },
    #[error("perturbation sets must satisfy x[{i}] > y[{j}] (got {x} <= {y})")]
    PerturbationOrder { i: usize, j: usize, x: f64, y: f64 },
    #[error("level r = {r} outside [1, {p}]; time too extreme for this p")]
    LevelOutOfRange { r: i64, p: usize },
    #[error("dimensions invalid: N = {n} must satisfy 1 <= N <= p = {p}")]
    BadDimensions { n: usize, p: usize },
    #[error("parameters within {tol} of each other; confluent limits not implemented")]
    DegenerateParameters { tol: f64 },
    #[error("eigensolver residual {residual} exceeded tolerance {tol}")]
    ConvergenceFailure { residual: f64, tol: f64 },
    #[error("argument {x} outside supported range |x| <= {max}")]
    OutOfRange { x: f64, max: f64 },
    #[error("contour geometry invalid: {0}")]
    BadGeometry(String),
    #[error("kernel arguments outside supported window: {0}")]
    UnsupportedWindow(String),
    #[error("contour vertices must satisfy v_Gamma < v_gamma (got {v_big} >= {v_small})")]
    BadContours { v_big: f64, v_small: f64 },
    #[error("contour placement infeasible: {0}")]
    ContourInfeasible(String),
    #[error("log-magnitude {0} exceeds 600 even after stabilization")]
    OverflowGuard(f64),
    #[error("estimated tail contribution {tail} at truncation exceeds 1e-8")]
    TruncationInsufficient { tail: f64 },
    #[error("node doubling changed determinant by {delta} > {tol}")]
    NonConvergent { delta: f64, tol: f64 },
    #[error("empty sample")]
    EmptySample,
    #[error("supplied cdf decreases by {0} (> 1e-9)")]
    NonMonotoneCdf(f64),
    #[error("problem size {size} exceeds cap {cap}")]
    ProblemTooLarge { size: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

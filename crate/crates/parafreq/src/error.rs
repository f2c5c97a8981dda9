//! Crate-wide error type.
//!
//! Diagnostics are carried as `f64` regardless of the working scalar so the
//! error type stays object-simple and printable.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("time {t} is outside the flow window (t1 = {t1}, guard = {guard})")]
    TimeOutOfWindow { t: f64, t1: f64, guard: f64 },

    #[error("operation not available on this background: {op}")]
    UnsupportedBackground { op: &'static str },

    #[error(
        "kernel non-positive at node {node} (K = {value:e}); raise mode count or smoothing eps"
    )]
    KernelNotPositive { node: f64, value: f64 },

    #[error("quadrature node within {dist:e} of a sphere pole")]
    NodeSingularity { dist: f64 },

    #[error("field representation does not match background ({expected} expected, got {got})")]
    ReprMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("polynomial degree {degree} exceeds cap {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },

    #[error("Dirichlet dual forms disagree: |{primal} - {dual}| = {gap:e} > tol {tol:e}")]
    DualFormMismatch {
        primal: f64,
        dual: f64,
        gap: f64,
        tol: f64,
    },

    #[error("solution L2 norm vanished (I = {i_value:e}) at t = {t}")]
    ZeroSolution { i_value: f64, t: f64 },

    #[error("frequency is not stationary at t = {t} (|U'| = {u_prime:e} > {tol:e})")]
    NotStationary { t: f64, u_prime: f64, tol: f64 },

    #[error("frequency decreased on [{t_lo}, {t_hi}]: forward difference {drop:e} < -tol {tol:e}")]
    MonotonicityViolation {
        t_lo: f64,
        t_hi: f64,
        drop: f64,
        tol: f64,
    },

    #[error("bound `{name}` violated at sample {sample}: lhs = {lhs:e} < rhs = {rhs:e}")]
    BoundViolation {
        name: &'static str,
        sample: usize,
        lhs: f64,
        rhs: f64,
    },

    #[error("mass matrix ill-conditioned (cond ~ {cond:e}); use the Hermite basis")]
    IllConditioned { cond: f64 },

    #[error("config error: {message}")]
    Config { message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(message: impl Into<String>) -> Self {
        Error::Config {
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

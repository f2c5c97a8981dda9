//! Spectral toolkit for parabolic frequency functionals on model Ricci-flow
//! backgrounds.
//!
//! Three closed-form flows (static Gaussian soliton on R^n, flat circle,
//! round shrinking 2-sphere) carry exact conjugate heat kernels, drift
//! Laplacians, and per-mode heat propagators. On top of them the crate
//! computes the frequency functionals
//!
//! ```text
//! I(t) = int u^2 dnu,   D(t) = -tau int |grad u|^2 dnu,
//! U(t) = exp(int_a^t (1 - kappa)/tau) * D(t) / I(t)
//! ```
//!
//! and verifies, at desk scale, frequency monotonicity and its equality
//! case, the backwards-uniqueness bound, the weighted Hessian identity, the
//! derivative bounds for perturbed heat operators, and the Galerkin spectrum
//! of the Ornstein-Uhlenbeck operator.
//!
//! The numerical core is generic over the scalar (see [`scalar::Real`]);
//! the aliases at the crate root pin `f64`, which is what the default
//! tolerance table assumes. The `parafreq` binary drives experiments and
//! writes deterministic CSV traces and JSON reports.

pub mod backgrounds;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod frequency;
pub mod kernel;
pub mod linalg;
pub mod ouspec;
pub mod poly;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod spectral;
pub mod tol;

pub use error::{Error, Result};
pub use scalar::Real;

/// Concrete `f64` aliases for the generic core.
pub type Background = backgrounds::FlowBackground<f64>;
pub type Geometry = backgrounds::GeometrySnapshot<f64>;
pub type Field = spectral::SpectralField<f64>;
pub type Quadrature = spectral::WeightedQuadrature<f64>;
pub type Kernel = kernel::KernelData<f64>;
pub type KernelOptions = kernel::KernelParams<f64>;
pub type Solution = evolve::HeatSolution<f64>;
pub type Trace = frequency::FrequencyTrace<f64>;
pub type TraceOptions = frequency::TraceConfig<f64>;
pub type ToleranceTable = tol::Tolerances<f64>;

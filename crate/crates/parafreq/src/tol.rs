//! Single tolerance table, keyed by check name.
//!
//! Scale-aware checks multiply a base entry by a magnitude factor such as
//! `(1 + |U(a)| + tau(a))`; raw absolute tolerances fail once tau or the
//! solution magnitude spans decades. `PARAFREQ_TOLERANCE_SCALE` multiplies
//! the whole table at the CLI boundary.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<S> {
    /// Monotonicity slack base, scaled by `(1 + |U(a)|)`.
    pub monotonicity: S,
    /// Agreement of the two Dirichlet forms, scaled by `(1 + |D|)`.
    pub dual_form: S,
    /// Self-adjointness residual for in-truncation fields.
    pub self_adjointness: S,
    /// Eigenfunction residual in the frequency equality case.
    pub equality_residual: S,
    /// Stationarity gate `|U'| <=` for the equality case.
    pub stationary_u_prime: S,
    /// Weighted Hessian identity residual.
    pub hessian_identity: S,
    /// `log(I)' = 2 e^{-corr} U / tau` residual (finite-difference limited).
    pub log_i_identity: S,
    /// `I' = 2D/tau` residual base, scaled by `(1 + |I|)`.
    pub i_prime_identity: S,
    /// Multiplicative slack on the backwards-uniqueness lower bound.
    pub backwards_bound: S,
    /// Per-sample slack base for the three derivative bounds, scaled by
    /// `(1 + |U| + tau(a))`.
    pub general_bounds: S,
    /// Multiplicative slack on the integrated perturbed bound.
    pub corollary_bound: S,
    /// Cauchy-Schwarz gap floor (gap must exceed the negative of this).
    pub cauchy_schwarz: S,
    /// Unit-mass residual of the kernel measure.
    pub mass: S,
    /// Eigenvalue error in the Ornstein-Uhlenbeck Galerkin spectrum.
    pub ou_spectrum: S,
    /// Ornstein-Uhlenbeck eigenfunction residual.
    pub ou_eigen: S,
    /// Commutator identity residual.
    pub commutator: S,
    /// Hermite ODE residual (relative to the largest coefficient).
    pub hermite_ode: S,
    /// `U <= 0` slack.
    pub u_nonpositive: S,
    /// Mass-matrix condition limit before `IllConditioned`.
    pub mass_matrix_cond: S,
}

impl<S: Real> Default for Tolerances<S> {
    fn default() -> Self {
        Tolerances {
            monotonicity: S::of(1e-8),
            dual_form: S::of(1e-8),
            self_adjointness: S::of(1e-8),
            equality_residual: S::of(1e-7),
            stationary_u_prime: S::of(1e-6),
            hessian_identity: S::of(1e-7),
            log_i_identity: S::of(1e-5),
            i_prime_identity: S::of(1e-5),
            backwards_bound: S::of(1e-6),
            general_bounds: S::of(1e-5),
            corollary_bound: S::of(1e-5),
            cauchy_schwarz: S::of(1e-10),
            mass: S::of(1e-8),
            ou_spectrum: S::of(1e-8),
            ou_eigen: S::of(1e-9),
            commutator: S::of(1e-10),
            hermite_ode: S::of(1e-9),
            u_nonpositive: S::of(1e-10),
            mass_matrix_cond: S::of(1e12),
        }
    }
}

impl<S: Real> Tolerances<S> {
    /// Multiply every entry (except the condition limit) by `k`.
    pub fn scaled(mut self, k: S) -> Self {
        self.monotonicity = self.monotonicity * k;
        self.dual_form = self.dual_form * k;
        self.self_adjointness = self.self_adjointness * k;
        self.equality_residual = self.equality_residual * k;
        self.stationary_u_prime = self.stationary_u_prime * k;
        self.hessian_identity = self.hessian_identity * k;
        self.log_i_identity = self.log_i_identity * k;
        self.i_prime_identity = self.i_prime_identity * k;
        self.backwards_bound = self.backwards_bound * k;
        self.general_bounds = self.general_bounds * k;
        self.corollary_bound = self.corollary_bound * k;
        self.cauchy_schwarz = self.cauchy_schwarz * k;
        self.mass = self.mass * k;
        self.ou_spectrum = self.ou_spectrum * k;
        self.ou_eigen = self.ou_eigen * k;
        self.commutator = self.commutator * k;
        self.hermite_ode = self.hermite_ode * k;
        self.u_nonpositive = self.u_nonpositive * k;
        self
    }

    /// Lookup by check name (the table key used in reports).
    pub fn get(&self, name: &str) -> Option<S> {
        Some(match name {
            "monotonicity" => self.monotonicity,
            "dual-form" => self.dual_form,
            "self-adjointness" => self.self_adjointness,
            "equality-residual" => self.equality_residual,
            "stationary-u-prime" => self.stationary_u_prime,
            "hessian-identity" => self.hessian_identity,
            "log-i-identity" => self.log_i_identity,
            "i-prime-identity" => self.i_prime_identity,
            "backwards-bound" => self.backwards_bound,
            "general-bounds" => self.general_bounds,
            "corollary-bound" => self.corollary_bound,
            "cauchy-schwarz" => self.cauchy_schwarz,
            "mass" => self.mass,
            "ou-spectrum" => self.ou_spectrum,
            "ou-eigen" => self.ou_eigen,
            "commutator" => self.commutator,
            "hermite-ode" => self.hermite_ode,
            "u-nonpositive" => self.u_nonpositive,
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_multiplies_entries() {
        let t: Tolerances<f64> = Tolerances::default().scaled(10.0);
        assert_eq!(t.monotonicity, 1e-7);
        assert_eq!(t.get("hessian-identity"), Some(1e-6));
        assert_eq!(t.mass_matrix_cond, 1e12);
    }

    #[test]
    fn lookup_covers_known_names() {
        let t: Tolerances<f64> = Tolerances::default();
        for name in [
            "monotonicity",
            "dual-form",
            "self-adjointness",
            "equality-residual",
            "hessian-identity",
            "log-i-identity",
            "backwards-bound",
            "general-bounds",
            "corollary-bound",
            "cauchy-schwarz",
            "mass",
            "ou-spectrum",
            "commutator",
        ] {
            assert!(t.get(name).is_some(), "missing tolerance for {name}");
        }
        assert!(t.get("nonsense").is_none());
    }
}

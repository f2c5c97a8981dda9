//! Spectral theory of the Ornstein-Uhlenbeck operator (the drift Laplacian of
//! the shrinking Gaussian soliton): Hermite polynomials in the derivative
//! normalization `e^{x^2} D^k e^{-x^2}`, Hermite's ODE, the commutator
//! identity `[L_f, d/dx] = (1/(2 tau)) d/dx`, eigenfunction residuals, and
//! the Galerkin spectrum `{-k/(2 tau)}` on polynomial spaces.

use crate::backgrounds::FlowBackground;
use crate::error::{Error, Result};
use crate::kernel::KernelParams;
use crate::linalg::generalized_sym_eigen;
use crate::poly::Poly1;
use crate::scalar::Real;
use crate::spectral::{build_quadrature, WeightedQuadrature};
use crate::tol::Tolerances;

/// Largest supported Hermite degree.
pub const MAX_HERMITE_DEGREE: usize = 20;

/// Hermite polynomial in the derivative normalization: leading coefficient
/// `(-2)^k`, alternating parity.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitePoly<S> {
    pub k: usize,
    pub poly: Poly1<S>,
}

/// `h_k = e^{x^2} D^k e^{-x^2}` via the recurrence `h_{k+1} = h_k' - 2x h_k`
/// (one symbolic differentiation per step).
pub fn hermite<S: Real>(k: usize) -> Result<HermitePoly<S>> {
    if k > MAX_HERMITE_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: k,
            cap: MAX_HERMITE_DEGREE,
        });
    }
    let mut h = Poly1::constant(S::one());
    for _ in 0..k {
        h = h.derivative().sub(&h.mul_x().scale(S::two()));
    }
    Ok(HermitePoly { k, poly: h })
}

/// Max residual coefficient of Hermite's ODE `v'' - 2x v' + 2k v = 0`,
/// relative to the largest coefficient of `v`.
pub fn hermite_ode_residual<S: Real>(h: &HermitePoly<S>) -> S {
    let v = &h.poly;
    let residual = v
        .derivative()
        .derivative()
        .sub(&v.derivative().mul_x().scale(S::two()))
        .add(&v.scale(S::two() * S::of_usize(h.k)));
    residual.max_abs_coeff() / v.max_abs_coeff().max(S::one())
}

/// Drift Laplacian of the shrinking Gaussian soliton acting on a 1-D
/// polynomial: `L_f p = p'' - (x / (2 tau)) p'`.
pub fn ou_apply<S: Real>(p: &Poly1<S>, tau: S) -> Poly1<S> {
    p.derivative()
        .derivative()
        .sub(&p.derivative().mul_x().scale(S::one() / (S::two() * tau)))
}

/// Scaled Hermite eigenfunction `p_k(x) = h_k(x / sqrt(4 tau))`.
pub fn scaled_hermite<S: Real>(k: usize, tau: S) -> Result<Poly1<S>> {
    let h = hermite::<S>(k)?;
    Ok(h.poly.scale_arg(S::one() / (S::of(4.0) * tau).sqrt()))
}

fn l2_norm<S: Real>(p: &Poly1<S>, q: &WeightedQuadrature<S>) -> S {
    q.integrate_fn(|n| {
        let v = p.eval(n[0]);
        v * v
    })
    .sqrt()
}

/// `||L_f p_k + (k / 2 tau) p_k|| / ||p_k||` in `L^2(dnu)`; the scaled
/// Hermite polynomials are exact eigenfunctions, so this is pure roundoff.
pub fn ou_eigen_residual<S: Real>(k: usize, tau: S, q: &WeightedQuadrature<S>) -> Result<S> {
    let p = scaled_hermite(k, tau)?;
    let lam = S::of_usize(k) / (S::two() * tau);
    let r = ou_apply(&p, tau).add(&p.scale(lam));
    Ok(l2_norm(&r, q) / l2_norm(&p, q))
}

/// `||L_f(du) - d(L_f u) - (1/(2 tau)) du||` in `L^2(dnu)` for a 1-D
/// polynomial `u` (the commutator identity behind the spectrum computation).
pub fn commutator_residual<S: Real>(u: &Poly1<S>, tau: S, q: &WeightedQuadrature<S>) -> S {
    let du = u.derivative();
    let r = ou_apply(&du, tau)
        .sub(&ou_apply(u, tau).derivative())
        .sub(&du.scale(S::one() / (S::two() * tau)));
    l2_norm(&r, q)
}

/// Basis for the Galerkin space of polynomials of degree `<= N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GalerkinBasis {
    /// Scaled Hermite polynomials (dnu-orthogonal; the default).
    Hermite,
    /// Raw monomials (ill-conditioned mass matrix at moderate N).
    Monomial,
}

/// Weak-form spectrum of the Ornstein-Uhlenbeck operator on polynomials of
/// degree `<= n`: assemble `A_ij = -int e_i' e_j' dnu`, `M_ij = int e_i e_j
/// dnu`, and solve the symmetric generalized eigenproblem. Eigenvalues come
/// back sorted descending and equal `{-j/(2 tau)}` for `j <= n`.
pub fn galerkin_spectrum<S: Real>(
    tau: S,
    n: usize,
    basis: GalerkinBasis,
    tol: &Tolerances<S>,
) -> Result<Vec<S>> {
    if n > MAX_HERMITE_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: n,
            cap: MAX_HERMITE_DEGREE,
        });
    }
    let bg = FlowBackground::gaussian(1, S::zero(), [S::zero(); 3])?;
    let q = build_quadrature(&bg, -tau, n + 4, &KernelParams::default())?;
    let polys: Vec<Poly1<S>> = (0..=n)
        .map(|j| match basis {
            GalerkinBasis::Hermite => scaled_hermite(j, tau),
            GalerkinBasis::Monomial => {
                let mut coeffs = vec![S::zero(); j + 1];
                coeffs[j] = S::one();
                Ok(Poly1::new(coeffs))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let derivs: Vec<Poly1<S>> = polys.iter().map(|p| p.derivative()).collect();
    let dim = n + 1;
    let mut a = vec![vec![S::zero(); dim]; dim];
    let mut m = vec![vec![S::zero(); dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let stiff = q.integrate_fn(|node| derivs[i].eval(node[0]) * derivs[j].eval(node[0]));
            let mass = q.integrate_fn(|node| polys[i].eval(node[0]) * polys[j].eval(node[0]));
            a[i][j] = -stiff;
            a[j][i] = -stiff;
            m[i][j] = mass;
            m[j][i] = mass;
        }
    }
    generalized_sym_eigen(&a, &m, tol.mass_matrix_cond)
}

//! Bases, quadrature, and spectral calculus.
//!
//! Fourier series on the circle, zonal Legendre series on the sphere, and
//! multi-index polynomials on the Gaussian soliton. Integration against the
//! conjugate heat kernel measure uses scaled Gauss-Hermite (R^n), uniform
//! trapezoid (circle, spectrally exact for periodic data), and Gauss-Legendre
//! in cos(theta) (sphere). Quadratures are rebuilt per time sample; the
//! measure is time-dependent and each slice stays spectrally exact.

use crate::backgrounds::{BackgroundKind, FlowBackground, GeometrySnapshot};
use crate::error::{Error, Result};
use crate::kernel::KernelData;
use crate::poly::{PolyN, MAX_AXES};
use crate::scalar::Real;

/// Default Gauss-Hermite order per axis on the Gaussian soliton.
pub const DEFAULT_GAUSS_HERMITE_ORDER: usize = 40;
/// Default uniform node count on the circle.
pub const DEFAULT_CIRCLE_NODES: usize = 256;
/// Default Gauss-Legendre node count on the sphere.
pub const DEFAULT_SPHERE_NODES: usize = 64;
/// Cap on polynomial total degree (Gauss-Hermite exactness budget).
pub const MAX_POLY_TOTAL_DEGREE: usize = 12;

/// Default quadrature order for a background.
pub fn default_order<S: Real>(bg: &FlowBackground<S>) -> usize {
    match bg.kind {
        BackgroundKind::GaussianSoliton => DEFAULT_GAUSS_HERMITE_ORDER,
        BackgroundKind::FlatCircle => DEFAULT_CIRCLE_NODES,
        BackgroundKind::ShrinkingSphere => DEFAULT_SPHERE_NODES,
    }
}

// ---------------------------------------------------------------------------
// Gauss rules
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre<S: Real>(n: usize) -> (Vec<S>, Vec<S>) {
    assert!(n >= 1);
    let mut nodes = vec![S::zero(); n];
    let mut weights = vec![S::zero(); n];
    let nf = S::of_usize(n);
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi-style initial guess, then Newton.
        let mut z = (S::PI() * (S::of_usize(i) + S::of(0.75)) / (nf + S::half())).cos();
        let mut pp = S::zero();
        for _ in 0..100 {
            let mut p1 = S::one();
            let mut p2 = S::zero();
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = S::of_usize(j);
                p1 = ((S::two() * jf + S::one()) * z * p2 - jf * p3) / (jf + S::one());
            }
            pp = nf * (z * p1 - p2) / (z * z - S::one());
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= S::epsilon() * (S::one() + z.abs()) {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = S::two() / ((S::one() - z * z) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss-Hermite nodes and weights for the weight `exp(-y^2)` on the line.
///
/// Uses the orthonormal Hermite-function recurrence (no overflow) with the
/// classic asymptotic initial guesses, refined by Newton.
pub fn gauss_hermite<S: Real>(n: usize) -> (Vec<S>, Vec<S>) {
    assert!(n >= 1);
    let mut nodes = vec![S::zero(); n];
    let mut weights = vec![S::zero(); n];
    let pim4 = S::one() / S::PI().sqrt().sqrt();
    let nf = S::of_usize(n);
    let m = (n + 1) / 2;
    let mut z = S::zero();
    for i in 0..m {
        z = match i {
            0 => {
                let a = (S::two() * nf + S::one()).sqrt();
                a - S::of(1.85575) * (S::two() * nf + S::one()).powf(-S::one() / S::of(6.0))
            }
            1 => z - S::of(1.14) * nf.powf(S::of(0.426)) / z,
            2 => S::of(1.86) * z - S::of(0.86) * nodes[0],
            3 => S::of(1.91) * z - S::of(0.91) * nodes[1],
            _ => S::two() * z - nodes[i - 2],
        };
        let mut pp = S::zero();
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = S::zero();
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = S::of_usize(j + 1);
                p1 = z * (S::two() / jf).sqrt() * p2 - (S::of_usize(j) / jf).sqrt() * p3;
            }
            pp = (S::two() * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= S::epsilon() * (S::one() + z.abs()) {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        let w = S::two() / (pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        // middle node is exactly zero by symmetry
        nodes[n / 2] = S::zero();
    }
    (nodes, weights)
}

// ---------------------------------------------------------------------------
// Series evaluation helpers
// ---------------------------------------------------------------------------

/// Evaluate a real trigonometric series and its first two derivatives at `x`.
///
/// `u(x) = sum_k cos_c[k] cos(k w x) + sin_c[k] sin(k w x)`.
pub fn trig_series_eval<S: Real>(cos_c: &[S], sin_c: &[S], omega: S, x: S) -> (S, S, S) {
    let n = cos_c.len().max(sin_c.len());
    let (s1, c1) = (omega * x).sin_cos();
    let mut ck = S::one();
    let mut sk = S::zero();
    let mut val = S::zero();
    let mut d1 = S::zero();
    let mut d2 = S::zero();
    for k in 0..n {
        let a = cos_c.get(k).copied().unwrap_or(S::zero());
        let b = sin_c.get(k).copied().unwrap_or(S::zero());
        let kw = S::of_usize(k) * omega;
        val = val + a * ck + b * sk;
        d1 = d1 + kw * (b * ck - a * sk);
        d2 = d2 - kw * kw * (a * ck + b * sk);
        let cn = ck * c1 - sk * s1;
        let sn = sk * c1 + ck * s1;
        ck = cn;
        sk = sn;
    }
    (val, d1, d2)
}

/// Evaluate a Legendre series and its first two mu-derivatives at `mu`.
///
/// Derivatives use the pole-regular recurrences
/// `P'_{l+1} = (2l+1) P_l + P'_{l-1}` and its derivative.
pub fn legendre_series_eval<S: Real>(coeffs: &[S], mu: S) -> (S, S, S) {
    let n = coeffs.len();
    if n == 0 {
        return (S::zero(), S::zero(), S::zero());
    }
    let mut p_prev = S::one(); // P_0
    let mut dp_prev = S::zero();
    let mut ddp_prev = S::zero();
    let mut val = coeffs[0];
    let mut d1 = S::zero();
    let mut d2 = S::zero();
    if n == 1 {
        return (val, d1, d2);
    }
    let mut p = mu; // P_1
    let mut dp = S::one();
    let mut ddp = S::zero();
    val = val + coeffs[1] * p;
    d1 = d1 + coeffs[1] * dp;
    for l in 1..(n - 1) {
        let lf = S::of_usize(l);
        let two_l1 = S::two() * lf + S::one();
        let p_next = (two_l1 * mu * p - lf * p_prev) / (lf + S::one());
        let dp_next = two_l1 * p + dp_prev;
        let ddp_next = two_l1 * dp + ddp_prev;
        p_prev = p;
        dp_prev = dp;
        ddp_prev = ddp;
        p = p_next;
        dp = dp_next;
        ddp = ddp_next;
        let c = coeffs[l + 1];
        val = val + c * p;
        d1 = d1 + c * dp;
        d2 = d2 + c * ddp;
    }
    (val, d1, d2)
}

/// Single Legendre polynomial value `P_l(mu)`.
pub fn legendre_p<S: Real>(l: usize, mu: S) -> S {
    let mut coeffs = vec![S::zero(); l + 1];
    coeffs[l] = S::one();
    legendre_series_eval(&coeffs, mu).0
}

// ---------------------------------------------------------------------------
// Spectral fields
// ---------------------------------------------------------------------------

/// Coefficient representation of a scalar field on a background.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldRepr<S> {
    /// Circle: `sum_k cos[k] cos(2 pi k x / L) + sin[k] sin(2 pi k x / L)`.
    Fourier { cos: Vec<S>, sin: Vec<S> },
    /// Sphere (zonal): `sum_l coeffs[l] P_l(cos theta)`.
    Legendre { coeffs: Vec<S> },
    /// Gaussian soliton: multi-index polynomial in Cartesian coordinates.
    Poly { poly: PolyN<S> },
}

impl<S> FieldRepr<S> {
    pub fn kind_name(&self) -> &'static str {
        match self {
            FieldRepr::Fourier { .. } => "fourier",
            FieldRepr::Legendre { .. } => "legendre",
            FieldRepr::Poly { .. } => "poly",
        }
    }
}

/// A scalar field stored as coefficients in the background's eigenbasis
/// (or as polynomial coefficients on R^n).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<S> {
    pub bg: FlowBackground<S>,
    pub repr: FieldRepr<S>,
}

fn expected_repr(kind: BackgroundKind) -> &'static str {
    match kind {
        BackgroundKind::GaussianSoliton => "poly",
        BackgroundKind::FlatCircle => "fourier",
        BackgroundKind::ShrinkingSphere => "legendre",
    }
}

impl<S: Real> SpectralField<S> {
    pub fn new(bg: FlowBackground<S>, repr: FieldRepr<S>) -> Result<Self> {
        let want = expected_repr(bg.kind);
        if repr.kind_name() != want {
            return Err(Error::ReprMismatch {
                expected: want,
                got: repr.kind_name(),
            });
        }
        if let FieldRepr::Poly { poly } = &repr {
            let deg = poly.total_degree();
            if deg > MAX_POLY_TOTAL_DEGREE {
                return Err(Error::DegreeTooLarge {
                    degree: deg,
                    cap: MAX_POLY_TOTAL_DEGREE,
                });
            }
        }
        Ok(SpectralField { bg, repr })
    }

    pub fn fourier(bg: FlowBackground<S>, cos: Vec<S>, sin: Vec<S>) -> Result<Self> {
        Self::new(bg, FieldRepr::Fourier { cos, sin })
    }

    pub fn legendre(bg: FlowBackground<S>, coeffs: Vec<S>) -> Result<Self> {
        Self::new(bg, FieldRepr::Legendre { coeffs })
    }

    pub fn poly(bg: FlowBackground<S>, poly: PolyN<S>) -> Result<Self> {
        Self::new(bg, FieldRepr::Poly { poly })
    }

    pub fn constant(bg: FlowBackground<S>, c: S) -> Self {
        let repr = match bg.kind {
            BackgroundKind::GaussianSoliton => FieldRepr::Poly {
                poly: PolyN::constant(bg.dim, c),
            },
            BackgroundKind::FlatCircle => FieldRepr::Fourier {
                cos: vec![c],
                sin: vec![S::zero()],
            },
            BackgroundKind::ShrinkingSphere => FieldRepr::Legendre { coeffs: vec![c] },
        };
        SpectralField { bg, repr }
    }

    /// Stored truncation order.
    pub fn truncation(&self) -> usize {
        match &self.repr {
            FieldRepr::Fourier { cos, sin } => cos.len().max(sin.len()).saturating_sub(1),
            FieldRepr::Legendre { coeffs } => coeffs.len().saturating_sub(1),
            FieldRepr::Poly { poly } => poly.total_degree(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            FieldRepr::Fourier { cos, sin } => {
                cos.iter().all(|&c| c == S::zero()) && sin.iter().all(|&c| c == S::zero())
            }
            FieldRepr::Legendre { coeffs } => coeffs.iter().all(|&c| c == S::zero()),
            FieldRepr::Poly { poly } => poly.is_zero(),
        }
    }

    /// Pointwise evaluation. Node layout: Cartesian coordinates on R^n,
    /// `[x, 0, 0]` on the circle, `[cos theta, 0, 0]` on the sphere.
    pub fn eval(&self, node: &[S; MAX_AXES]) -> S {
        match &self.repr {
            FieldRepr::Fourier { cos, sin } => {
                let omega = S::two() * S::PI() / self.bg.circle_length;
                trig_series_eval(cos, sin, omega, node[0]).0
            }
            FieldRepr::Legendre { coeffs } => legendre_series_eval(coeffs, node[0]).0,
            FieldRepr::Poly { poly } => poly.eval(node),
        }
    }

    pub fn scale(&self, k: S) -> Self {
        let repr = match &self.repr {
            FieldRepr::Fourier { cos, sin } => FieldRepr::Fourier {
                cos: cos.iter().map(|&c| c * k).collect(),
                sin: sin.iter().map(|&c| c * k).collect(),
            },
            FieldRepr::Legendre { coeffs } => FieldRepr::Legendre {
                coeffs: coeffs.iter().map(|&c| c * k).collect(),
            },
            FieldRepr::Poly { poly } => FieldRepr::Poly {
                poly: poly.scale(k),
            },
        };
        SpectralField { bg: self.bg, repr }
    }
}

/// Pointwise evaluation of a field at a list of nodes.
pub fn synthesize<S: Real>(u: &SpectralField<S>, nodes: &[[S; MAX_AXES]]) -> Result<Vec<S>> {
    let want = expected_repr(u.bg.kind);
    if u.repr.kind_name() != want {
        return Err(Error::ReprMismatch {
            expected: want,
            got: u.repr.kind_name(),
        });
    }
    Ok(nodes.iter().map(|n| u.eval(n)).collect())
}

// ---------------------------------------------------------------------------
// Differentials
// ---------------------------------------------------------------------------

/// Precomputed derivative data of a field, background-specific.
#[derive(Debug, Clone)]
pub enum Differentials<S> {
    /// Partials and second partials of the polynomial.
    Poly {
        dim: usize,
        grad: Vec<PolyN<S>>,
        hess: Vec<Vec<PolyN<S>>>,
        lap: PolyN<S>,
    },
    /// Fourier coefficients of the field itself (derivatives evaluated on
    /// the fly from the series).
    Fourier { cos: Vec<S>, sin: Vec<S>, omega: S },
    /// Legendre coefficients of the field.
    Legendre { coeffs: Vec<S> },
}

impl<S: Real> SpectralField<S> {
    pub fn differentials(&self) -> Differentials<S> {
        match &self.repr {
            FieldRepr::Poly { poly } => {
                let dim = poly.dim;
                let grad: Vec<PolyN<S>> = (0..dim).map(|a| poly.partial(a)).collect();
                let hess: Vec<Vec<PolyN<S>>> = (0..dim)
                    .map(|a| (0..dim).map(|b| grad[a].partial(b)).collect())
                    .collect();
                let lap = poly.laplacian();
                Differentials::Poly {
                    dim,
                    grad,
                    hess,
                    lap,
                }
            }
            FieldRepr::Fourier { cos, sin } => Differentials::Fourier {
                cos: cos.clone(),
                sin: sin.clone(),
                omega: S::two() * S::PI() / self.bg.circle_length,
            },
            FieldRepr::Legendre { coeffs } => Differentials::Legendre {
                coeffs: coeffs.clone(),
            },
        }
    }
}

impl<S: Real> Differentials<S> {
    /// Reference-chart first-derivative data at a node:
    /// gradient components on R^n, `u'` on the circle, `du/dmu` on the sphere.
    pub fn first_at(&self, node: &[S; MAX_AXES]) -> [S; MAX_AXES] {
        match self {
            Differentials::Poly { dim, grad, .. } => {
                let mut out = [S::zero(); MAX_AXES];
                for a in 0..*dim {
                    out[a] = grad[a].eval(node);
                }
                out
            }
            Differentials::Fourier { cos, sin, omega } => {
                let (_, d1, _) = trig_series_eval(cos, sin, *omega, node[0]);
                [d1, S::zero(), S::zero()]
            }
            Differentials::Legendre { coeffs } => {
                let (_, d1, _) = legendre_series_eval(coeffs, node[0]);
                [d1, S::zero(), S::zero()]
            }
        }
    }

    /// `|grad u|^2_{g(t)}` at a node. The metric scale enters as
    /// `|grad u|^2 = scale^{-1} |grad_ref u|^2_ref`.
    pub fn grad_sq_at(&self, geo: &GeometrySnapshot<S>, node: &[S; MAX_AXES]) -> S {
        self.grad_dot_at(self, geo, node)
    }

    /// `<grad u, grad v>_{g(t)}` at a node.
    pub fn grad_dot_at(
        &self,
        other: &Differentials<S>,
        geo: &GeometrySnapshot<S>,
        node: &[S; MAX_AXES],
    ) -> S {
        match (self, other) {
            (Differentials::Poly { dim, .. }, Differentials::Poly { .. }) => {
                let a = self.first_at(node);
                let b = other.first_at(node);
                (0..*dim).map(|i| a[i] * b[i]).fold(S::zero(), |s, x| s + x)
            }
            (Differentials::Fourier { .. }, Differentials::Fourier { .. }) => {
                let a = self.first_at(node)[0];
                let b = other.first_at(node)[0];
                a * b / geo.scale
            }
            (Differentials::Legendre { .. }, Differentials::Legendre { .. }) => {
                // d_theta u = -sin(theta) du/dmu, so
                // <grad u, grad v>_g = (1 - mu^2) u_mu v_mu / c.
                let mu = node[0];
                let a = self.first_at(node)[0];
                let b = other.first_at(node)[0];
                (S::one() - mu * mu) * a * b / geo.scale
            }
            _ => S::nan(),
        }
    }

    /// Squared Frobenius norm of the Hessian with respect to `g(t)`.
    pub fn hess_sq_at(&self, geo: &GeometrySnapshot<S>, node: &[S; MAX_AXES]) -> S {
        match self {
            Differentials::Poly { dim, hess, .. } => {
                let mut s = S::zero();
                for a in 0..*dim {
                    for b in 0..*dim {
                        let h = hess[a][b].eval(node);
                        s = s + h * h;
                    }
                }
                s
            }
            Differentials::Fourier { cos, sin, omega } => {
                let (_, _, d2) = trig_series_eval(cos, sin, *omega, node[0]);
                d2 * d2
            }
            Differentials::Legendre { coeffs } => {
                // Orthonormal-frame components on the round sphere scaled by c:
                //   theta-theta: (1/c)(d^2_theta u),  phi-phi: (1/c)(cot theta d_theta u)
                // with d^2_theta u = -mu u_mu + (1-mu^2) u_mumu and
                // cot(theta) d_theta u = -mu u_mu (pole-regular).
                let mu = node[0];
                let (_, d1, d2) = legendre_series_eval(coeffs, mu);
                let c = geo.scale;
                let htt = (-mu * d1 + (S::one() - mu * mu) * d2) / c;
                let hpp = (-mu * d1) / c;
                htt * htt + hpp * hpp
            }
        }
    }

    /// Laplace-Beltrami of the underlying field as a new coefficient field.
    pub fn laplacian_field(
        &self,
        bg: &FlowBackground<S>,
        geo: &GeometrySnapshot<S>,
    ) -> SpectralField<S> {
        match self {
            Differentials::Poly { lap, .. } => SpectralField {
                bg: *bg,
                repr: FieldRepr::Poly { poly: lap.clone() },
            },
            Differentials::Fourier { cos, sin, omega } => {
                let lam = |k: usize| {
                    let kw = S::of_usize(k) * *omega;
                    -kw * kw
                };
                SpectralField {
                    bg: *bg,
                    repr: FieldRepr::Fourier {
                        cos: cos.iter().enumerate().map(|(k, &c)| lam(k) * c).collect(),
                        sin: sin.iter().enumerate().map(|(k, &c)| lam(k) * c).collect(),
                    },
                }
            }
            Differentials::Legendre { coeffs } => {
                let c = geo.scale;
                SpectralField {
                    bg: *bg,
                    repr: FieldRepr::Legendre {
                        coeffs: coeffs
                            .iter()
                            .enumerate()
                            .map(|(l, &cl)| {
                                let lf = S::of_usize(l);
                                -(lf * (lf + S::one())) / c * cl
                            })
                            .collect(),
                    },
                }
            }
        }
    }
}

/// Nodal evaluator for `|grad u|^2_{g(t)}`.
pub struct GradSquared<S> {
    diffs: Differentials<S>,
    geo: GeometrySnapshot<S>,
}

impl<S: Real> GradSquared<S> {
    pub fn eval(&self, node: &[S; MAX_AXES]) -> S {
        self.diffs.grad_sq_at(&self.geo, node)
    }
}

/// Spectral differentiation: `|grad u|^2` as a nodal evaluator plus the
/// Laplace-Beltrami image of `u` as a coefficient field.
pub fn differentiate<S: Real>(
    u: &SpectralField<S>,
    t: S,
) -> Result<(GradSquared<S>, SpectralField<S>)> {
    let want = expected_repr(u.bg.kind);
    if u.repr.kind_name() != want {
        return Err(Error::ReprMismatch {
            expected: want,
            got: u.repr.kind_name(),
        });
    }
    let geo = u.bg.geometry(t)?;
    let diffs = u.differentials();
    let lap = diffs.laplacian_field(&u.bg, &geo);
    Ok((GradSquared { diffs, geo }, lap))
}

// ---------------------------------------------------------------------------
// Weighted quadrature
// ---------------------------------------------------------------------------

/// Nodes and positive weights evaluating `integral . dnu` at a fixed time.
#[derive(Debug, Clone)]
pub struct WeightedQuadrature<S> {
    pub t: S,
    pub nodes: Vec<[S; MAX_AXES]>,
    pub weights: Vec<S>,
    pub order: usize,
}

impl<S: Real> WeightedQuadrature<S> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weighted sum of precomputed nodal values.
    pub fn integrate(&self, values: &[S]) -> S {
        debug_assert_eq!(values.len(), self.weights.len());
        self.weights
            .iter()
            .zip(values.iter())
            .map(|(&w, &v)| w * v)
            .sum()
    }

    pub fn integrate_fn(&self, f: impl Fn(&[S; MAX_AXES]) -> S) -> S {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(n, &w)| w * f(n))
            .sum()
    }

    pub fn total_mass(&self) -> S {
        self.weights.iter().copied().sum()
    }

    /// L^2(dnu) inner product of two fields.
    pub fn inner(&self, u: &SpectralField<S>, v: &SpectralField<S>) -> S {
        self.integrate_fn(|n| u.eval(n) * v.eval(n))
    }

    /// L^2(dnu) norm of a field.
    pub fn norm(&self, u: &SpectralField<S>) -> S {
        self.inner(u, u).sqrt()
    }
}

/// Build the `dnu`-quadrature at time `t` from pre-built kernel data.
///
/// Gaussian soliton: tensorized Gauss-Hermite under `x = x1 + sqrt(4 tau) y`,
/// exact for polynomial integrands of total degree `<= 2 order - 1`.
/// Circle: uniform trapezoid nodes with weights `K dx`. Sphere: Gauss-Legendre
/// in `mu = cos theta` with weights `K * 2 pi c * w_gl`.
pub fn quadrature_from_kernel<S: Real>(
    kd: &KernelData<S>,
    order: usize,
) -> Result<WeightedQuadrature<S>> {
    if order < 4 {
        return Err(Error::config(format!(
            "quadrature order >= 4 required, got {order}"
        )));
    }
    let bg = &kd.bg;
    let t = kd.t;
    let geo = bg.geometry(t)?;
    match bg.kind {
        BackgroundKind::GaussianSoliton => {
            let (y, w) = gauss_hermite::<S>(order);
            let sqrt_pi = S::PI().sqrt();
            let shift = (S::of(4.0) * geo.tau).sqrt();
            let dim = bg.dim;
            let mut nodes = Vec::with_capacity(order.pow(dim as u32));
            let mut weights = Vec::with_capacity(order.pow(dim as u32));
            let mut idx = vec![0usize; dim];
            loop {
                let mut node = [S::zero(); MAX_AXES];
                let mut weight = S::one();
                for a in 0..dim {
                    node[a] = bg.center[a] + shift * y[idx[a]];
                    weight = weight * w[idx[a]] / sqrt_pi;
                }
                nodes.push(node);
                weights.push(weight);
                // odometer over the tensor grid
                let mut a = 0;
                loop {
                    if a == dim {
                        break;
                    }
                    idx[a] += 1;
                    if idx[a] < order {
                        break;
                    }
                    idx[a] = 0;
                    a += 1;
                }
                if a == dim {
                    break;
                }
            }
            Ok(WeightedQuadrature {
                t,
                nodes,
                weights,
                order,
            })
        }
        BackgroundKind::FlatCircle => {
            let l = bg.circle_length;
            let dx = l / S::of_usize(order);
            let mut nodes = Vec::with_capacity(order);
            let mut weights = Vec::with_capacity(order);
            for j in 0..order {
                let x = S::of_usize(j) * dx;
                let k = kd.k_at(&[x, S::zero(), S::zero()])?;
                nodes.push([x, S::zero(), S::zero()]);
                weights.push(k * dx);
            }
            Ok(WeightedQuadrature {
                t,
                nodes,
                weights,
                order,
            })
        }
        BackgroundKind::ShrinkingSphere => {
            let (mu, w) = gauss_legendre::<S>(order);
            let ring = S::two() * S::PI() * geo.scale;
            let mut nodes = Vec::with_capacity(order);
            let mut weights = Vec::with_capacity(order);
            for i in 0..order {
                let node = [mu[i], S::zero(), S::zero()];
                let k = kd.k_at(&node)?;
                nodes.push(node);
                weights.push(k * ring * w[i]);
            }
            Ok(WeightedQuadrature {
                t,
                nodes,
                weights,
                order,
            })
        }
    }
}

/// Convenience: build kernel data and the quadrature in one call.
pub fn build_quadrature<S: Real>(
    bg: &FlowBackground<S>,
    t: S,
    order: usize,
    params: &crate::kernel::KernelParams<S>,
) -> Result<WeightedQuadrature<S>> {
    let kd = crate::kernel::kernel_at(bg, t, params)?;
    quadrature_from_kernel(&kd, order)
}

// ---------------------------------------------------------------------------
// Analysis (projection back onto coefficients)
// ---------------------------------------------------------------------------

/// Project uniform-grid samples on the circle onto Fourier coefficients up to
/// mode `kmax` (exact for band-limited data with `2 kmax < values.len()`).
pub fn analyze_fourier<S: Real>(
    bg: &FlowBackground<S>,
    values: &[S],
    kmax: usize,
) -> Result<SpectralField<S>> {
    if bg.kind != BackgroundKind::FlatCircle {
        return Err(Error::ReprMismatch {
            expected: expected_repr(bg.kind),
            got: "fourier",
        });
    }
    let m = values.len();
    let omega = S::two() * S::PI() / S::of_usize(m);
    let mut cos_c = vec![S::zero(); kmax + 1];
    let mut sin_c = vec![S::zero(); kmax + 1];
    for k in 0..=kmax {
        let mut ac = S::zero();
        let mut as_ = S::zero();
        for (j, &v) in values.iter().enumerate() {
            let ang = omega * S::of_usize(k) * S::of_usize(j);
            ac = ac + v * ang.cos();
            as_ = as_ + v * ang.sin();
        }
        let norm = if k == 0 {
            S::one() / S::of_usize(m)
        } else {
            S::two() / S::of_usize(m)
        };
        cos_c[k] = ac * norm;
        sin_c[k] = as_ * norm;
    }
    sin_c[0] = S::zero();
    SpectralField::fourier(*bg, cos_c, sin_c)
}

/// Project 1-D Gaussian-soliton samples at the quadrature nodes onto a
/// polynomial of degree `<= dmax`, via the dnu-orthogonal scaled Hermite
/// basis (exact for in-truncation polynomial data).
pub fn analyze_hermite_1d<S: Real>(
    bg: &FlowBackground<S>,
    q: &WeightedQuadrature<S>,
    values: &[S],
    dmax: usize,
) -> Result<SpectralField<S>> {
    if bg.kind != BackgroundKind::GaussianSoliton || bg.dim != 1 {
        return Err(Error::ReprMismatch {
            expected: expected_repr(bg.kind),
            got: "poly",
        });
    }
    let tau = bg.geometry(q.t)?.tau;
    let mut total = crate::poly::Poly1::zero();
    for j in 0..=dmax {
        // basis centred at the kernel point
        let pj = crate::ouspec::scaled_hermite(j, tau)?;
        let mut num = S::zero();
        let mut den = S::zero();
        for (i, node) in q.nodes.iter().enumerate() {
            let w = q.weights[i];
            let pv = pj.eval(node[0] - bg.center[0]);
            num = num + w * values[i] * pv;
            den = den + w * pv * pv;
        }
        total = total.add(&pj.scale(num / den));
    }
    let poly = PolyN::from_poly1(1, 0, &total).shift_axis(0, bg.center[0]);
    SpectralField::poly(*bg, poly)
}

/// Project sphere samples at Gauss-Legendre nodes onto Legendre coefficients.
pub fn analyze_legendre<S: Real>(
    bg: &FlowBackground<S>,
    gl_nodes: &[S],
    gl_weights: &[S],
    values: &[S],
    lmax: usize,
) -> Result<SpectralField<S>> {
    if bg.kind != BackgroundKind::ShrinkingSphere {
        return Err(Error::ReprMismatch {
            expected: expected_repr(bg.kind),
            got: "legendre",
        });
    }
    let mut coeffs = vec![S::zero(); lmax + 1];
    for (l, c) in coeffs.iter_mut().enumerate() {
        let mut acc = S::zero();
        for ((&mu, &w), &v) in gl_nodes.iter().zip(gl_weights).zip(values) {
            acc = acc + w * v * legendre_p(l, mu);
        }
        // <P_l, P_l> = 2/(2l+1) on [-1, 1]
        *c = acc * (S::two() * S::of_usize(l) + S::one()) / S::two();
    }
    SpectralField::legendre(*bg, coeffs)
}

//! Conjugate heat kernel K, potential f, drift Laplacian, and the
//! Bakry-Emery bound kappa(t), per background.
//!
//! K solves `d/dt K = -Delta K + R K` and limits to a delta at the centre as
//! `t -> t1`; the potential is defined from it by
//! `K = (4 pi tau)^{-n/2} e^{-f}`. On the Gaussian soliton everything is in
//! closed form; on the circle K is the wrapped Gaussian (cross-checked
//! against its Fourier representation); on the sphere K is evolved per zonal
//! mode with closed-form inner integrals from a heat-smoothed delta at
//! `t_ref = t1 - eps`, then normalized to unit mass.

use crate::backgrounds::{BackgroundKind, FlowBackground, GeometrySnapshot};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{legendre_series_eval, Differentials, SpectralField, WeightedQuadrature};

/// Construction parameters for kernel data.
///
/// `for_window` pins the sphere smoothing and the time guard to the window
/// start `a`, which keeps one fixed kernel (one terminal condition) across a
/// whole trace and matches the convention that correction integrals start
/// at `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams<S> {
    /// Minimum allowed backwards time (guard below `t1`).
    pub window_guard: S,
    /// Sphere delta smoothing; `None` resolves to `1e-3 * tau(t)` at build.
    pub sphere_eps: Option<S>,
    /// Zonal mode truncation for the sphere kernel.
    pub sphere_modes: usize,
    /// Fourier truncation of the circle kernel's spectral representation.
    pub circle_modes: usize,
}

impl<S: Real> Default for KernelParams<S> {
    fn default() -> Self {
        KernelParams {
            window_guard: S::zero(),
            sphere_eps: None,
            sphere_modes: 64,
            circle_modes: 512,
        }
    }
}

impl<S: Real> KernelParams<S> {
    /// Defaults for experiments on the window `[a, b]`: guard and sphere
    /// smoothing both `1e-3 * (t1 - a)`.
    pub fn for_window(bg: &FlowBackground<S>, a: S) -> Self {
        let eps = S::of(1e-3) * (bg.t1 - a);
        KernelParams {
            window_guard: eps,
            sphere_eps: Some(eps),
            ..KernelParams::default()
        }
    }

    pub fn with_sphere_eps(mut self, eps: S) -> Self {
        self.sphere_eps = Some(eps);
        self
    }

    pub fn with_sphere_modes(mut self, modes: usize) -> Self {
        self.sphere_modes = modes;
        self
    }
}

#[derive(Debug, Clone)]
enum Detail<S> {
    Gaussian,
    Circle {
        /// wrapping half-width: images m in [-m_wrap, m_wrap]
        m_wrap: i64,
        /// Fourier representation of K (the cross-check side)
        spectral: SpectralField<S>,
    },
    Sphere {
        /// Legendre coefficients of K, normalized to unit mass
        coeffs: Vec<S>,
    },
}

/// Kernel data frozen at one time.
#[derive(Debug, Clone)]
pub struct KernelData<S> {
    pub bg: FlowBackground<S>,
    pub t: S,
    pub tau: S,
    pub scale: S,
    /// Sphere delta smoothing actually used (zero elsewhere).
    pub smoothing_eps: S,
    detail: Detail<S>,
}

/// Build kernel data for `bg` at time `t`.
pub fn kernel_at<S: Real>(
    bg: &FlowBackground<S>,
    t: S,
    params: &KernelParams<S>,
) -> Result<KernelData<S>> {
    let geo = bg.geometry(t)?;
    if geo.tau < params.window_guard {
        return Err(Error::TimeOutOfWindow {
            t: t.to_f64().unwrap_or(f64::NAN),
            t1: bg.t1.to_f64().unwrap_or(f64::NAN),
            guard: params.window_guard.to_f64().unwrap_or(f64::NAN),
        });
    }
    match bg.kind {
        BackgroundKind::GaussianSoliton => Ok(KernelData {
            bg: *bg,
            t,
            tau: geo.tau,
            scale: geo.scale,
            smoothing_eps: S::zero(),
            detail: Detail::Gaussian,
        }),
        BackgroundKind::FlatCircle => {
            let l = bg.circle_length;
            // images until the farthest Gaussian tail drops below 1e-16 of
            // the central amplitude
            let spread = (S::of(166.0) * geo.tau).sqrt(); // sqrt(4 tau * ln 1e18)
            let m_wrap = ((l / S::two() + spread) / l)
                .ceil()
                .to_i64()
                .unwrap_or(1)
                .max(1)
                + 1;
            let spectral = circle_spectral_kernel(bg, geo.tau, params.circle_modes)?;
            Ok(KernelData {
                bg: *bg,
                t,
                tau: geo.tau,
                scale: geo.scale,
                smoothing_eps: S::zero(),
                detail: Detail::Circle { m_wrap, spectral },
            })
        }
        BackgroundKind::ShrinkingSphere => {
            let eps = params.sphere_eps.unwrap_or_else(|| S::of(1e-3) * geo.tau);
            if !(eps > S::zero()) || geo.tau < eps {
                return Err(Error::TimeOutOfWindow {
                    t: t.to_f64().unwrap_or(f64::NAN),
                    t1: bg.t1.to_f64().unwrap_or(f64::NAN),
                    guard: eps.to_f64().unwrap_or(f64::NAN),
                });
            }
            let c_t1 = bg.initial_scale - S::two() * bg.t1;
            let c_ref = c_t1 + S::two() * eps;
            let c_t = geo.scale;
            // effective spectral time: smoothing at t_ref plus the closed-form
            // integral int_t^{t_ref} ds/c = (1/2) ln(c(t)/c(t_ref))
            let theta = eps / c_t1 + (c_t / c_ref).ln() * S::half();
            let lmax = params.sphere_modes;
            let norm = S::one() / (S::of(4.0) * S::PI() * c_t);
            let coeffs: Vec<S> = (0..=lmax)
                .map(|l| {
                    let lf = S::of_usize(l);
                    let decay = (-(lf * (lf + S::one())) * theta).exp();
                    (S::two() * lf + S::one()) * decay * norm
                })
                .collect();
            let kd = KernelData {
                bg: *bg,
                t,
                tau: geo.tau,
                scale: geo.scale,
                smoothing_eps: eps,
                detail: Detail::Sphere { coeffs },
            };
            // positivity probe on a dense mu grid (quadrature nodes are
            // checked again at build time via k_at)
            let probes = 256;
            for j in 0..=probes {
                let mu = S::of(-1.0) + S::two() * S::of_usize(j) / S::of_usize(probes);
                kd.k_at(&[mu, S::zero(), S::zero()])?;
            }
            Ok(kd)
        }
    }
}

fn circle_spectral_kernel<S: Real>(
    bg: &FlowBackground<S>,
    tau: S,
    max_modes: usize,
) -> Result<SpectralField<S>> {
    let l = bg.circle_length;
    let x1 = bg.center[0];
    let omega = S::two() * S::PI() / l;
    // modes beyond exp(-xi^2 tau) < 1e-18 are dropped
    let needed = ((S::of(41.5) / tau).sqrt() / omega)
        .ceil()
        .to_usize()
        .unwrap_or(max_modes);
    let kmax = (needed + 2).min(max_modes);
    let mut cos_c = vec![S::zero(); kmax + 1];
    let mut sin_c = vec![S::zero(); kmax + 1];
    cos_c[0] = S::one() / l;
    for k in 1..=kmax {
        let xi = omega * S::of_usize(k);
        let amp = (S::two() / l) * (-xi * xi * tau).exp();
        cos_c[k] = amp * (xi * x1).cos();
        sin_c[k] = amp * (xi * x1).sin();
    }
    SpectralField::fourier(*bg, cos_c, sin_c)
}

impl<S: Real> KernelData<S> {
    fn geo(&self) -> GeometrySnapshot<S> {
        GeometrySnapshot {
            t: self.t,
            tau: self.tau,
            scale: self.scale,
            scalar_curvature: match self.bg.kind {
                BackgroundKind::ShrinkingSphere => S::two() / self.scale,
                _ => S::zero(),
            },
        }
    }

    /// `K` at a node. Sphere evaluations error with `KernelNotPositive` if the
    /// truncated series dips non-positive (smoothing too aggressive).
    pub fn k_at(&self, node: &[S; 3]) -> Result<S> {
        match &self.detail {
            Detail::Gaussian => {
                let n = self.bg.dim;
                let four_tau = S::of(4.0) * self.tau;
                let mut d2 = S::zero();
                for a in 0..n {
                    let d = node[a] - self.bg.center[a];
                    d2 = d2 + d * d;
                }
                let pref = (S::of(4.0) * S::PI() * self.tau).powf(-S::of_usize(n) / S::two());
                Ok(pref * (-d2 / four_tau).exp())
            }
            Detail::Circle { m_wrap, .. } => Ok(self.circle_k_derivs(node[0], *m_wrap).0),
            Detail::Sphere { coeffs } => {
                let (k, _, _) = legendre_series_eval(coeffs, node[0]);
                if !(k > S::zero()) {
                    return Err(Error::KernelNotPositive {
                        node: node[0].to_f64().unwrap_or(f64::NAN),
                        value: k.to_f64().unwrap_or(f64::NAN),
                    });
                }
                Ok(k)
            }
        }
    }

    /// Wrapped-Gaussian K and its first two x-derivatives on the circle.
    fn circle_k_derivs(&self, x: S, m_wrap: i64) -> (S, S, S) {
        let l = self.bg.circle_length;
        let tau = self.tau;
        let four_tau = S::of(4.0) * tau;
        let pref = (S::of(4.0) * S::PI() * tau).powf(-S::half());
        // reduce x - x1 into [-L/2, L/2)
        let mut d = x - self.bg.center[0];
        d = d - l * (d / l).round();
        let mut k = S::zero();
        let mut k1 = S::zero();
        let mut k2 = S::zero();
        let mut m = -m_wrap;
        while m <= m_wrap {
            let dm = d + l * S::of(m as f64);
            let g = pref * (-dm * dm / four_tau).exp();
            k = k + g;
            k1 = k1 - g * dm / (S::two() * tau);
            k2 = k2 + g * (dm * dm / (four_tau * tau) - S::one() / (S::two() * tau));
            m += 1;
        }
        (k, k1, k2)
    }

    /// Potential `f = -log K - (n/2) log(4 pi tau)`.
    pub fn f_at(&self, node: &[S; 3]) -> Result<S> {
        match &self.detail {
            Detail::Gaussian => {
                let mut d2 = S::zero();
                for a in 0..self.bg.dim {
                    let d = node[a] - self.bg.center[a];
                    d2 = d2 + d * d;
                }
                Ok(d2 / (S::of(4.0) * self.tau))
            }
            _ => {
                let k = self.k_at(node)?;
                let n = S::of_usize(self.bg.dim);
                Ok(-k.ln() - n * (S::of(4.0) * S::PI() * self.tau).ln() / S::two())
            }
        }
    }

    /// `<grad f, grad u>_{g(t)}` at a node, given the differentials of `u`.
    pub fn grad_f_dot_grad(&self, du: &Differentials<S>, node: &[S; 3]) -> Result<S> {
        let geo = self.geo();
        match &self.detail {
            Detail::Gaussian => {
                let g = du.first_at(node);
                let mut acc = S::zero();
                for a in 0..self.bg.dim {
                    let fa = (node[a] - self.bg.center[a]) / (S::two() * self.tau);
                    acc = acc + fa * g[a];
                }
                Ok(acc)
            }
            Detail::Circle { m_wrap, .. } => {
                let (k, k1, _) = self.circle_k_derivs(node[0], *m_wrap);
                let fp = -k1 / k;
                Ok(fp * du.first_at(node)[0] / geo.scale)
            }
            Detail::Sphere { coeffs } => {
                // <grad f, grad u>_g = -(1 - mu^2) K_mu u_mu / (c K)
                let mu = node[0];
                let (k, k1, _) = legendre_series_eval(coeffs, mu);
                if !(k > S::zero()) {
                    return Err(Error::KernelNotPositive {
                        node: mu.to_f64().unwrap_or(f64::NAN),
                        value: k.to_f64().unwrap_or(f64::NAN),
                    });
                }
                let umu = du.first_at(node)[0];
                Ok(-(S::one() - mu * mu) * k1 * umu / (geo.scale * k))
            }
        }
    }

    /// `Ric_f(grad u, grad u)` at a node.
    ///
    /// On the Gaussian soliton `Ric_f = g/(2 tau)` exactly; on the circle
    /// `Ric_f = f'' dx^2`; on the sphere the gradient of a zonal function
    /// points along `e_theta`, so only the theta-theta eigenvalue acts.
    pub fn ric_f_on_grad(&self, du: &Differentials<S>, node: &[S; 3]) -> Result<S> {
        let geo = self.geo();
        let grad_sq = du.grad_sq_at(&geo, node);
        match &self.detail {
            Detail::Gaussian => Ok(grad_sq / (S::two() * self.tau)),
            Detail::Circle { m_wrap, .. } => {
                let (k, k1, k2) = self.circle_k_derivs(node[0], *m_wrap);
                let fpp = -k2 / k + (k1 / k) * (k1 / k);
                Ok(fpp * grad_sq)
            }
            Detail::Sphere { .. } => {
                let (e_tt, _) = self.sphere_ricf_eigen(node)?;
                Ok(e_tt * grad_sq)
            }
        }
    }

    /// The two eigenvalues of `Ric_f` relative to `g` on the sphere:
    /// `(1/c)(1 + dd_theta f)` and `(1/c)(1 + cot(theta) d_theta f)`,
    /// written pole-regularly in `mu = cos theta`.
    fn sphere_ricf_eigen(&self, node: &[S; 3]) -> Result<(S, S)> {
        let coeffs = match &self.detail {
            Detail::Sphere { coeffs } => coeffs,
            _ => {
                return Err(Error::UnsupportedBackground {
                    op: "sphere_ricf_eigen on non-sphere background",
                })
            }
        };
        let mu = node[0];
        let one_minus = S::one() - mu * mu;
        if one_minus.abs() < S::of(1e-8) {
            return Err(Error::NodeSingularity {
                dist: one_minus.abs().to_f64().unwrap_or(0.0),
            });
        }
        let (k, k1, k2) = legendre_series_eval(coeffs, mu);
        if !(k > S::zero()) {
            return Err(Error::KernelNotPositive {
                node: mu.to_f64().unwrap_or(f64::NAN),
                value: k.to_f64().unwrap_or(f64::NAN),
            });
        }
        // dd_theta f = (mu K_mu - (1-mu^2) K_mumu)/K + (1-mu^2)(K_mu/K)^2
        let ddtheta_f = (mu * k1 - one_minus * k2) / k + one_minus * (k1 / k) * (k1 / k);
        // cot(theta) d_theta f = mu K_mu / K
        let cot_dtheta_f = mu * k1 / k;
        let c = self.scale;
        Ok(((S::one() + ddtheta_f) / c, (S::one() + cot_dtheta_f) / c))
    }

    /// Largest eigenvalue of `Ric_f` relative to `g(t)` at a node.
    pub fn ric_f_max_eigen(&self, node: &[S; 3]) -> Result<S> {
        match &self.detail {
            Detail::Gaussian => Ok(S::one() / (S::two() * self.tau)),
            Detail::Circle { m_wrap, .. } => {
                let (k, k1, k2) = self.circle_k_derivs(node[0], *m_wrap);
                Ok(-k2 / k + (k1 / k) * (k1 / k))
            }
            Detail::Sphere { .. } => {
                let (a, b) = self.sphere_ricf_eigen(node)?;
                Ok(a.max(b))
            }
        }
    }

    /// Spectral representation of K: the Fourier cross-check side of the
    /// wrapped Gaussian on the circle, the defining Legendre series on the
    /// sphere. None on the Gaussian soliton (closed form only).
    pub fn spectral_k(&self) -> Option<SpectralField<S>> {
        match &self.detail {
            Detail::Circle { spectral, .. } => Some(spectral.clone()),
            Detail::Sphere { coeffs } => {
                Some(SpectralField::legendre(self.bg, coeffs.clone()).expect("zonal repr"))
            }
            Detail::Gaussian => None,
        }
    }

    /// `Delta K / K` at a node (drives the measure evolution).
    pub fn laplacian_k_over_k(&self, node: &[S; 3]) -> Result<S> {
        match &self.detail {
            Detail::Gaussian => {
                // Delta K / K = |x-x1|^2/(4 tau^2) - n/(2 tau)
                let mut d2 = S::zero();
                for a in 0..self.bg.dim {
                    let d = node[a] - self.bg.center[a];
                    d2 = d2 + d * d;
                }
                Ok(d2 / (S::of(4.0) * self.tau * self.tau)
                    - S::of_usize(self.bg.dim) / (S::two() * self.tau))
            }
            Detail::Circle { m_wrap, .. } => {
                let (k, _, k2) = self.circle_k_derivs(node[0], *m_wrap);
                Ok(k2 / k)
            }
            Detail::Sphere { coeffs } => {
                let mu = node[0];
                let (k, _, _) = legendre_series_eval(coeffs, mu);
                let lap: Vec<S> = coeffs
                    .iter()
                    .enumerate()
                    .map(|(l, &c)| {
                        let lf = S::of_usize(l);
                        -(lf * (lf + S::one())) / self.scale * c
                    })
                    .collect();
                let (lk, _, _) = legendre_series_eval(&lap, mu);
                Ok(lk / k)
            }
        }
    }
}

/// Apply the drift Laplacian `L_f u = Delta u - <grad f, grad u>` at the
/// quadrature nodes.
pub fn drift_apply<S: Real>(
    kd: &KernelData<S>,
    u: &SpectralField<S>,
    q: &WeightedQuadrature<S>,
) -> Result<Vec<S>> {
    let geo = kd.bg.geometry(kd.t)?;
    let du = u.differentials();
    let lap = du.laplacian_field(&u.bg, &geo);
    q.nodes
        .iter()
        .map(|node| Ok(lap.eval(node) - kd.grad_f_dot_grad(&du, node)?))
        .collect()
}

/// `|int (L_f u) v dnu + int <grad u, grad v> dnu|` by quadrature.
///
/// Self-adjointness of the drift Laplacian makes this vanish for
/// in-truncation fields; the quadrature value is the discretization residual.
pub fn self_adjointness_residual<S: Real>(
    kd: &KernelData<S>,
    u: &SpectralField<S>,
    v: &SpectralField<S>,
    q: &WeightedQuadrature<S>,
) -> Result<S> {
    let geo = kd.bg.geometry(kd.t)?;
    let lu = drift_apply(kd, u, q)?;
    let du = u.differentials();
    let dv = v.differentials();
    let mut lhs = S::zero();
    let mut rhs = S::zero();
    for (i, node) in q.nodes.iter().enumerate() {
        let w = q.weights[i];
        lhs = lhs + w * lu[i] * v.eval(node);
        rhs = rhs + w * du.grad_dot_at(&dv, &geo, node);
    }
    Ok((lhs + rhs).abs())
}

/// The Bakry-Emery bound `kappa(t) = max(1, 2 tau sup_nodes lambda_max(Ric_f))`.
///
/// The clamp below 1 is always legitimate: enlarging kappa preserves
/// `Ric_f <= (kappa / 2 tau) g`, and the derivative bounds consume
/// `kappa >= 1`.
pub fn kappa<S: Real>(kd: &KernelData<S>, q: &WeightedQuadrature<S>) -> Result<S> {
    match kd.bg.kind {
        BackgroundKind::GaussianSoliton => Ok(S::one()),
        _ => {
            let mut sup = S::neg_infinity();
            for node in &q.nodes {
                sup = sup.max(kd.ric_f_max_eigen(node)?);
            }
            Ok((S::two() * kd.tau * sup).max(S::one()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyN;
    use crate::spectral::quadrature_from_kernel;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn gaussian1() -> FlowBackground<f64> {
        FlowBackground::gaussian(1, 0.0, [0.0; 3]).unwrap()
    }

    fn circle() -> FlowBackground<f64> {
        FlowBackground::circle(2.0 * PI, 0.0, 0.0).unwrap()
    }

    #[test]
    fn gaussian_kernel_center_value() {
        let kd = kernel_at(&gaussian1(), -1.0, &KernelParams::default()).unwrap();
        let k0 = kd.k_at(&[0.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(k0, (4.0 * PI).powf(-0.5), epsilon = 1e-15);
        assert_abs_diff_eq!(k0, 0.28209, epsilon = 1e-5);
    }

    #[test]
    fn gaussian_potential_is_quarter_square() {
        // f(x) = x^2/(4 tau); at tau = 1, f(2) = 1
        let kd = kernel_at(&gaussian1(), -1.0, &KernelParams::default()).unwrap();
        assert_abs_diff_eq!(kd.f_at(&[2.0, 0.0, 0.0]).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn wrapped_gaussian_has_unit_mass() {
        let kd = kernel_at(&circle(), -0.25, &KernelParams::default()).unwrap();
        // plain trapezoid of K dx over the period
        let m = 2048;
        let dx = 2.0 * PI / m as f64;
        let mass: f64 = (0..m)
            .map(|j| kd.k_at(&[j as f64 * dx, 0.0, 0.0]).unwrap() * dx)
            .sum();
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn wrapped_and_fourier_kernels_agree() {
        for &tau in &[0.1, 0.25, 1.0] {
            let kd = kernel_at(&circle(), -tau, &KernelParams::default()).unwrap();
            let spectral = kd.spectral_k().unwrap();
            let mut worst: f64 = 0.0;
            for j in 0..512 {
                let x = j as f64 * 2.0 * PI / 512.0;
                let node = [x, 0.0, 0.0];
                worst = worst.max((kd.k_at(&node).unwrap() - spectral.eval(&node)).abs());
            }
            assert!(
                worst <= 1e-12,
                "max node discrepancy {worst:e} at tau {tau}"
            );
        }
    }

    #[test]
    fn sphere_kernel_solves_conjugate_heat_equation() {
        // d/dt K = -Delta K + R K, checked nodewise by central FD in t with
        // one fixed terminal condition (kernel params pinned to the window).
        let sphere = FlowBackground::sphere(4.0, 1.0).unwrap();
        let params = KernelParams::for_window(&sphere, -1.0);
        let h = 1e-6;
        for &t in &[-0.8, -0.2, 0.3] {
            let kd = kernel_at(&sphere, t, &params).unwrap();
            let kp = kernel_at(&sphere, t + h, &params).unwrap();
            let km = kernel_at(&sphere, t - h, &params).unwrap();
            let geo = sphere.geometry(t).unwrap();
            let r = geo.scalar_curvature;
            for &mu in &[-0.9, -0.3, 0.2, 0.7, 0.99] {
                let node = [mu, 0.0, 0.0];
                let k0 = kd.k_at(&node).unwrap();
                let dkdt = (kp.k_at(&node).unwrap() - km.k_at(&node).unwrap()) / (2.0 * h);
                let lap_k = kd.laplacian_k_over_k(&node).unwrap() * k0;
                assert_abs_diff_eq!(dkdt, -lap_k + r * k0, epsilon = 1e-7 + 100.0 * h);
            }
        }
    }

    #[test]
    fn drift_on_x_squared_matches_symbolic_oracle() {
        // L_f u = Delta u - <grad f, grad u>; u = x^2 at tau = 1:
        // Delta u = 2, <grad f, grad u> = (x/2)(2x) = x^2, so L_f u = 2 - x^2.
        let bg = gaussian1();
        let kd = kernel_at(&bg, -1.0, &KernelParams::default()).unwrap();
        let q = quadrature_from_kernel(&kd, 8).unwrap();
        let u = SpectralField::poly(bg, PolyN::from_terms(1, vec![([2, 0, 0], 1.0)])).unwrap();
        let lu = drift_apply(&kd, &u, &q).unwrap();
        for (i, node) in q.nodes.iter().enumerate() {
            assert_abs_diff_eq!(lu[i], 2.0 - node[0] * node[0], epsilon = 1e-12);
        }
    }

    #[test]
    fn drift_annihilates_constants() {
        let bg = gaussian1();
        let kd = kernel_at(&bg, -1.0, &KernelParams::default()).unwrap();
        let q = quadrature_from_kernel(&kd, 8).unwrap();
        let u = SpectralField::constant(bg, 3.5);
        for v in drift_apply(&kd, &u, &q).unwrap() {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn hermite_quadratic_is_drift_eigenfunction() {
        // u = x^2 - 2 at tau = 1: L_f u = -u (eigenvalue -k/(2 tau), k = 2)
        let bg = gaussian1();
        let kd = kernel_at(&bg, -1.0, &KernelParams::default()).unwrap();
        let q = quadrature_from_kernel(&kd, 10).unwrap();
        let u = SpectralField::poly(
            bg,
            PolyN::from_terms(1, vec![([2, 0, 0], 1.0), ([0, 0, 0], -2.0)]),
        )
        .unwrap();
        let lu = drift_apply(&kd, &u, &q).unwrap();
        for (i, node) in q.nodes.iter().enumerate() {
            assert_abs_diff_eq!(lu[i], -u.eval(node), epsilon = 1e-12);
        }
    }

    #[test]
    fn self_adjointness_for_linear_field() {
        // u = v = x: int (L_f x) x dnu = -int |grad x|^2 dnu = -1
        let bg = gaussian1();
        let kd = kernel_at(&bg, -1.0, &KernelParams::default()).unwrap();
        let q = quadrature_from_kernel(&kd, 8).unwrap();
        let u = SpectralField::poly(bg, PolyN::from_terms(1, vec![([1, 0, 0], 1.0)])).unwrap();
        let lu = drift_apply(&kd, &u, &q).unwrap();
        let lhs: f64 = q
            .nodes
            .iter()
            .zip(q.weights.iter())
            .enumerate()
            .map(|(i, (node, &w))| w * lu[i] * u.eval(node))
            .sum();
        assert_abs_diff_eq!(lhs, -1.0, epsilon = 1e-12);
        let res = self_adjointness_residual(&kd, &u, &u, &q).unwrap();
        assert!(res <= 1e-12);
    }

    #[test]
    fn self_adjointness_constant_is_exact() {
        let bg = circle();
        let kd = kernel_at(&bg, -0.5, &KernelParams::default()).unwrap();
        let q = quadrature_from_kernel(&kd, 128).unwrap();
        let u = SpectralField::constant(bg, 1.0);
        let v = SpectralField::fourier(bg, vec![0.0, 1.0, 0.5], vec![0.0, 0.0, -0.25]).unwrap();
        let res = self_adjointness_residual(&kd, &u, &v, &q).unwrap();
        assert!(res <= 1e-14);
    }

    #[test]
    fn kappa_gaussian_is_one() {
        let bg = gaussian1();
        let kd = kernel_at(&bg, -0.7, &KernelParams::default()).unwrap();
        let q = quadrature_from_kernel(&kd, 8).unwrap();
        assert_eq!(kappa(&kd, &q).unwrap(), 1.0);
    }

    #[test]
    fn kappa_circle_approaches_one_as_tau_shrinks() {
        let bg = circle();
        let mut prev = f64::INFINITY;
        for &tau in &[0.1, 0.01, 0.001] {
            let kd = kernel_at(&bg, -tau, &KernelParams::default()).unwrap();
            let q = quadrature_from_kernel(&kd, 256).unwrap();
            let k = kappa(&kd, &q).unwrap();
            assert!(k >= 1.0, "kappa must be clamped at 1, got {k}");
            assert!(k <= prev + 1e-12, "kappa should approach 1 monotonically");
            prev = k;
        }
        assert_abs_diff_eq!(prev, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn kappa_clamp_is_exact() {
        // very flat kernel on a long circle at late tau: raw bound < 1
        let bg = FlowBackground::circle(2.0 * PI, 0.0, 0.0).unwrap();
        let kd = kernel_at(&bg, -50.0, &KernelParams::default()).unwrap();
        let q = quadrature_from_kernel(&kd, 128).unwrap();
        assert_eq!(kappa(&kd, &q).unwrap(), 1.0);
    }

    #[test]
    fn ric_f_bound_holds_with_returned_kappa() {
        let sphere = FlowBackground::sphere(4.0, 1.0).unwrap();
        let kd = kernel_at(&sphere, 0.0, &KernelParams::for_window(&sphere, -1.0)).unwrap();
        let q = quadrature_from_kernel(&kd, 64).unwrap();
        let kap = kappa(&kd, &q).unwrap();
        for node in &q.nodes {
            let lam = kd.ric_f_max_eigen(node).unwrap();
            assert!(
                lam <= kap / (2.0 * kd.tau) + 1e-12,
                "Ric_f exceeds (kappa/2tau) g at mu = {}",
                node[0]
            );
        }
    }

    #[test]
    fn sphere_mass_conserved_along_flow() {
        let sphere = FlowBackground::sphere(4.0, 1.0).unwrap();
        let params = KernelParams::for_window(&sphere, -1.0);
        for i in 0..=16 {
            let t = -1.0 + 1.5 * i as f64 / 16.0;
            let kd = kernel_at(&sphere, t, &params).unwrap();
            let q = quadrature_from_kernel(&kd, 64).unwrap();
            assert_abs_diff_eq!(q.total_mass(), 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn tiny_smoothing_turns_kernel_negative() {
        let sphere = FlowBackground::sphere(4.0, 1.0).unwrap();
        let params = KernelParams::default()
            .with_sphere_eps(1e-9)
            .with_sphere_modes(48);
        match kernel_at(&sphere, 1.0 - 2e-9, &params) {
            Err(Error::KernelNotPositive { .. }) => {}
            other => panic!("expected KernelNotPositive, got {other:?}"),
        }
    }

    #[test]
    fn guard_rejects_times_near_t1() {
        let bg = gaussian1();
        let params = KernelParams::for_window(&bg, -1.0); // guard = 1e-3
        assert!(matches!(
            kernel_at(&bg, -1e-4, &params),
            Err(Error::TimeOutOfWindow { .. })
        ));
    }

    #[test]
    fn pole_adjacent_node_rejected() {
        let sphere = FlowBackground::sphere(4.0, 1.0).unwrap();
        let kd = kernel_at(&sphere, 0.0, &KernelParams::for_window(&sphere, -1.0)).unwrap();
        match kd.ric_f_max_eigen(&[1.0 - 1e-10, 0.0, 0.0]) {
            Err(Error::NodeSingularity { .. }) => {}
            other => panic!("expected NodeSingularity, got {other:?}"),
        }
        // Gauss-Legendre nodes stay clear of the poles
        let q = quadrature_from_kernel(&kd, 64).unwrap();
        for node in &q.nodes {
            assert!(kd.ric_f_max_eigen(node).is_ok());
        }
    }

    #[test]
    fn measure_evolution_identity_on_circle() {
        // d/dt (weights) = -(Delta K / K) * weights, tested by central FD.
        let bg = circle();
        let params = KernelParams::default();
        let t = -0.5;
        let h = 1e-5;
        let kd0 = kernel_at(&bg, t, &params).unwrap();
        let q0 = quadrature_from_kernel(&kd0, 128).unwrap();
        let qp = quadrature_from_kernel(&kernel_at(&bg, t + h, &params).unwrap(), 128).unwrap();
        let qm = quadrature_from_kernel(&kernel_at(&bg, t - h, &params).unwrap(), 128).unwrap();
        for i in 0..q0.len() {
            let fd = (qp.weights[i] - qm.weights[i]) / (2.0 * h);
            let expected = -kd0.laplacian_k_over_k(&q0.nodes[i]).unwrap() * q0.weights[i];
            assert_abs_diff_eq!(fd, expected, epsilon = 1e-6 + 10.0 * h);
        }
    }

    #[test]
    fn circle_self_adjointness_matches_dense_fd_oracle() {
        // Residual property vs an independent dense-FD evaluation of both
        // sides on a fine grid.
        let bg = circle();
        let kd = kernel_at(&bg, -0.5, &KernelParams::default()).unwrap();
        let u = SpectralField::fourier(bg, vec![0.3, 1.0, -0.2], vec![0.0, 0.4, 0.7]).unwrap();
        let v = SpectralField::fourier(bg, vec![-0.1, 0.6, 0.0], vec![0.0, -0.3, 0.2]).unwrap();

        let q = quadrature_from_kernel(&kd, 256).unwrap();
        let res = self_adjointness_residual(&kd, &u, &v, &q).unwrap();
        assert!(res <= 1e-8, "residual {res:e}");

        // dense FD oracle
        let m = 4096;
        let dx = 2.0 * PI / m as f64;
        let eval = |f: &SpectralField<f64>, j: i64| {
            let x = (j.rem_euclid(m as i64)) as f64 * dx;
            f.eval(&[x, 0.0, 0.0])
        };
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for j in 0..m as i64 {
            let x = j as f64 * dx;
            let k = kd.k_at(&[x, 0.0, 0.0]).unwrap();
            let fp = {
                let kp = (kd.k_at(&[x + dx, 0.0, 0.0]).unwrap()
                    - kd.k_at(&[x - dx, 0.0, 0.0]).unwrap())
                    / (2.0 * dx);
                -kp / k
            };
            let up = (eval(&u, j + 1) - eval(&u, j - 1)) / (2.0 * dx);
            let upp = (eval(&u, j + 1) - 2.0 * eval(&u, j) + eval(&u, j - 1)) / (dx * dx);
            let vp = (eval(&v, j + 1) - eval(&v, j - 1)) / (2.0 * dx);
            lhs += (upp - fp * up) * eval(&v, j) * k * dx;
            rhs += up * vp * k * dx;
        }
        assert_abs_diff_eq!(lhs, -rhs, epsilon = 1e-5);
    }
}

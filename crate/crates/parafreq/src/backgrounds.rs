//! The three model Ricci-flow backgrounds.
//!
//! Each background solves `d/dt g = -2 Ric` in closed form, so metric, scalar
//! curvature, and spectral data are exact and every numerical error downstream
//! is attributable to quadrature or truncation:
//!
//! * static Gaussian soliton on R^n (n = 1..3), flat for all time;
//! * flat circle of length L, flat for all time;
//! * round shrinking 2-sphere, `g(t) = c(t) g_round` with `c(t) = c0 - 2t`,
//!   restricted to zonal functions about the kernel centre (the north pole).

use crate::error::{Error, Result};
use crate::poly::MAX_AXES;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackgroundKind {
    GaussianSoliton,
    FlatCircle,
    ShrinkingSphere,
}

impl BackgroundKind {
    pub fn name(self) -> &'static str {
        match self {
            BackgroundKind::GaussianSoliton => "gaussian",
            BackgroundKind::FlatCircle => "circle",
            BackgroundKind::ShrinkingSphere => "sphere",
        }
    }
}

/// A closed-form Ricci flow with a marked centre point and centre time `t1`.
///
/// `t1` is where the conjugate heat kernel concentrates; backwards time is
/// `tau = t1 - t`. For the sphere the flow goes extinct at `c0/2`, so the
/// constructor requires `t1 < c0/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowBackground<S> {
    pub kind: BackgroundKind,
    pub dim: usize,
    pub t1: S,
    /// Kernel centre: Cartesian coordinates on R^n, arc position on the
    /// circle; unused on the sphere (the centre is the north pole).
    pub center: [S; MAX_AXES],
    /// Circumference (FlatCircle only).
    pub circle_length: S,
    /// Initial metric scale c0 (ShrinkingSphere only).
    pub initial_scale: S,
}

/// Exact geometric data of a background at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySnapshot<S> {
    pub t: S,
    pub tau: S,
    /// Metric conformal factor relative to the reference metric.
    pub scale: S,
    /// Scalar curvature (spatially constant on all three backgrounds).
    pub scalar_curvature: S,
}

impl<S: Real> FlowBackground<S> {
    pub fn gaussian(dim: usize, t1: S, center: [S; MAX_AXES]) -> Result<Self> {
        if dim == 0 || dim > 3 {
            return Err(Error::config(format!(
                "gaussian soliton dim must be 1..=3, got {dim}"
            )));
        }
        Ok(FlowBackground {
            kind: BackgroundKind::GaussianSoliton,
            dim,
            t1,
            center,
            circle_length: S::zero(),
            initial_scale: S::zero(),
        })
    }

    pub fn circle(length: S, t1: S, center: S) -> Result<Self> {
        if !(length > S::zero()) {
            return Err(Error::config("circle_length must be positive"));
        }
        Ok(FlowBackground {
            kind: BackgroundKind::FlatCircle,
            dim: 1,
            t1,
            center: [center, S::zero(), S::zero()],
            circle_length: length,
            initial_scale: S::zero(),
        })
    }

    pub fn sphere(c0: S, t1: S) -> Result<Self> {
        if !(c0 > S::zero()) {
            return Err(Error::config("initial_scale c0 must be positive"));
        }
        if !(t1 < c0 / S::two()) {
            return Err(Error::config(
                "sphere requires t1 < c0/2 (flow extinct at c0/2)",
            ));
        }
        Ok(FlowBackground {
            kind: BackgroundKind::ShrinkingSphere,
            dim: 2,
            t1,
            center: [S::zero(); MAX_AXES],
            circle_length: S::zero(),
            initial_scale: c0,
        })
    }

    pub fn tau(&self, t: S) -> S {
        self.t1 - t
    }

    /// Geometric snapshot at time `t < t1`.
    pub fn geometry(&self, t: S) -> Result<GeometrySnapshot<S>> {
        let tau = self.tau(t);
        if !(tau > S::zero()) {
            return Err(Error::TimeOutOfWindow {
                t: t.to_f64().unwrap_or(f64::NAN),
                t1: self.t1.to_f64().unwrap_or(f64::NAN),
                guard: 0.0,
            });
        }
        let (scale, scalar_curvature) = match self.kind {
            BackgroundKind::GaussianSoliton | BackgroundKind::FlatCircle => (S::one(), S::zero()),
            BackgroundKind::ShrinkingSphere => {
                let c = self.initial_scale - S::two() * t;
                if !(c > S::zero()) {
                    return Err(Error::TimeOutOfWindow {
                        t: t.to_f64().unwrap_or(f64::NAN),
                        t1: self.t1.to_f64().unwrap_or(f64::NAN),
                        guard: 0.0,
                    });
                }
                (c, S::two() / c)
            }
        };
        Ok(GeometrySnapshot {
            t,
            tau,
            scale,
            scalar_curvature,
        })
    }

    /// Laplace-Beltrami eigenvalue of spectral mode `mode` at time `t`.
    ///
    /// Circle: `-(2 pi k / L)^2` for the cosine/sine pair `k`.
    /// Sphere (zonal): `-l(l+1)/c(t)`.
    /// Gaussian soliton: continuous spectrum, use the polynomial calculus.
    pub fn laplace_eigenvalue(&self, mode: usize, t: S) -> Result<S> {
        let geo = self.geometry(t)?;
        match self.kind {
            BackgroundKind::FlatCircle => {
                let xi = S::two() * S::PI() * S::of_usize(mode) / self.circle_length;
                Ok(-xi * xi)
            }
            BackgroundKind::ShrinkingSphere => {
                let l = S::of_usize(mode);
                Ok(-(l * (l + S::one())) / geo.scale)
            }
            BackgroundKind::GaussianSoliton => Err(Error::UnsupportedBackground {
                op: "laplace_eigenvalue on the Gaussian soliton",
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn gaussian1(t1: f64) -> FlowBackground<f64> {
        FlowBackground::gaussian(1, t1, [0.0; 3]).unwrap()
    }

    #[test]
    fn gaussian_snapshot_is_static() {
        let bg = gaussian1(0.0);
        let g = bg.geometry(-1.0).unwrap();
        assert_eq!(g.tau, 1.0);
        assert_eq!(g.scale, 1.0);
        assert_eq!(g.scalar_curvature, 0.0);
    }

    #[test]
    fn sphere_snapshot_matches_closed_form() {
        // c(t) = c0 - 2t solved from Ric(g_round) = g_round; R = 2/c.
        let bg = FlowBackground::sphere(4.0, 1.0).unwrap();
        let g = bg.geometry(0.0).unwrap();
        assert_eq!(g.tau, 1.0);
        assert_eq!(g.scale, 4.0);
        assert_abs_diff_eq!(g.scalar_curvature, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn circle_snapshot_flat() {
        let bg = FlowBackground::circle(2.0 * std::f64::consts::PI, 0.0, 0.0).unwrap();
        let g = bg.geometry(-0.25).unwrap();
        assert_eq!(g.tau, 0.25);
        assert_eq!(g.scale, 1.0);
        assert_eq!(g.scalar_curvature, 0.0);
    }

    #[test]
    fn times_at_or_past_t1_rejected() {
        let bg = gaussian1(0.0);
        assert!(matches!(
            bg.geometry(0.0),
            Err(Error::TimeOutOfWindow { .. })
        ));
        assert!(matches!(
            bg.geometry(0.5),
            Err(Error::TimeOutOfWindow { .. })
        ));
    }

    #[test]
    fn extinct_sphere_rejected() {
        // extinction at c0/2 = 2; t1 = 1.9 is admissible but t = 1.99 is not
        // even reachable since t < t1; with c0 = 4, t = 1.5 < t1 fails c > 0
        // only when t1 > 2, which the constructor forbids.
        assert!(FlowBackground::sphere(4.0, 2.0).is_err());
        assert!(FlowBackground::sphere(4.0, 2.5).is_err());
        let bg = FlowBackground::sphere(4.0, 1.9).unwrap();
        assert!(bg.geometry(1.8).is_ok());
    }

    #[test]
    fn circle_eigenvalues_are_fourier() {
        let bg = FlowBackground::circle(2.0 * std::f64::consts::PI, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(
            bg.laplace_eigenvalue(3, -1.0).unwrap(),
            -9.0,
            epsilon = 1e-12
        );
        assert_eq!(bg.laplace_eigenvalue(0, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn sphere_eigenvalue_scaled_spherical_harmonic() {
        let bg = FlowBackground::sphere(4.0, 1.0).unwrap();
        // l = 2 at t = 0: -l(l+1)/c = -6/4
        assert_abs_diff_eq!(
            bg.laplace_eigenvalue(2, 0.0).unwrap(),
            -1.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn gaussian_eigenvalue_unsupported() {
        let bg = gaussian1(0.0);
        assert!(matches!(
            bg.laplace_eigenvalue(1, -1.0),
            Err(Error::UnsupportedBackground { .. })
        ));
    }

    #[test]
    fn tau_slope_is_minus_one_and_scale_slope_minus_two() {
        let bg = FlowBackground::sphere(4.0, 1.0).unwrap();
        let h = 1e-4;
        for &t in &[-1.0, -0.5, 0.0, 0.5] {
            let a = bg.geometry(t).unwrap();
            let b = bg.geometry(t + h).unwrap();
            assert_abs_diff_eq!((b.tau - a.tau) / h, -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!((b.scale - a.scale) / h, -2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn eigenvalues_nonincreasing_in_mode() {
        let circle = FlowBackground::circle(5.0, 0.0, 0.0).unwrap();
        let sphere = FlowBackground::sphere(4.0, 1.0).unwrap();
        for bg in [circle, sphere] {
            let mut prev = f64::INFINITY;
            for mode in 0..12 {
                let ev = bg.laplace_eigenvalue(mode, -1.0).unwrap();
                assert!(ev <= prev);
                prev = ev;
            }
        }
    }
}

//! Exact-in-time solvers: caloric polynomials on the Gaussian soliton,
//! per-mode heat propagation on circle and sphere, and the perturbed operator
//! family `d/dt u = Delta u + alpha(t) d_x u + beta(t) u` on the circle.
//!
//! Per-mode exact solvability keeps time-integration error out of the
//! inequality checks; the only quadratures in time are the closed-form mode
//! integrals and smooth accumulations of `alpha`, `beta`.

use std::sync::Arc;

use crate::backgrounds::{BackgroundKind, FlowBackground};
use crate::error::{Error, Result};
use crate::poly::{Poly1, PolyN};
use crate::scalar::Real;
use crate::spectral::{FieldRepr, SpectralField, MAX_POLY_TOTAL_DEGREE};

pub type TimeFn<S> = Arc<dyn Fn(S) -> S + Send + Sync>;

#[derive(Clone)]
enum Generator<S> {
    /// Linear combination of tensor caloric polynomials; each term is
    /// (per-axis degrees, coefficient).
    Caloric { terms: Vec<(Vec<usize>, S)> },
    /// Per-mode heat evolution from coefficients given at the window start.
    Modes { initial: FieldRepr<S> },
    /// Perturbed circle evolution from Fourier coefficients at the window
    /// start; `c_bound(t) = max(|alpha(t)|, |beta(t)|)`.
    Perturbed {
        cos0: Vec<S>,
        sin0: Vec<S>,
        alpha: TimeFn<S>,
        beta: TimeFn<S>,
    },
}

/// A time-parameterized field solving the (possibly perturbed) heat equation
/// exactly per mode on `[a, b]`, `b < t1`.
#[derive(Clone)]
pub struct HeatSolution<S> {
    pub bg: FlowBackground<S>,
    pub window: (S, S),
    generator: Generator<S>,
    /// Constant prefactor; scaling a solution keeps it a solution.
    amplitude: S,
}

impl<S: Real> std::fmt::Debug for HeatSolution<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.generator {
            Generator::Caloric { terms } => format!("Caloric({} terms)", terms.len()),
            Generator::Modes { .. } => "ModeEvolution".to_string(),
            Generator::Perturbed { .. } => "Perturbed".to_string(),
        };
        write!(
            f,
            "HeatSolution {{ bg: {:?}, window: [{}, {}], {kind} }}",
            self.bg.kind, self.window.0, self.window.1
        )
    }
}

fn check_window<S: Real>(bg: &FlowBackground<S>, window: (S, S)) -> Result<()> {
    let (a, b) = window;
    if !(a < b) {
        return Err(Error::config("window must satisfy a < b"));
    }
    if !(b < bg.t1) {
        return Err(Error::config("window must satisfy b < t1"));
    }
    bg.geometry(a)?;
    bg.geometry(b)?;
    Ok(())
}

/// Coefficients of the 1-D heat polynomial
/// `v_k(x, s) = sum_{0 <= j <= k/2} k!/(j! (k-2j)!) x^{k-2j} s^j`,
/// which solves `d/ds v = v''`.
fn heat_poly_1d<S: Real>(k: usize, s: S) -> Poly1<S> {
    let mut coeffs = vec![S::zero(); k + 1];
    let fact = |n: usize| -> S {
        let mut acc = 1u64;
        for i in 2..=n {
            acc *= i as u64;
        }
        S::of(acc as f64)
    };
    let mut j = 0;
    while 2 * j <= k {
        let c = fact(k) / (fact(j) * fact(k - 2 * j));
        coeffs[k - 2 * j] = c * s.powi(j as i32);
        j += 1;
    }
    Poly1::new(coeffs)
}

/// The caloric polynomial solution of per-axis degrees `degrees` on the
/// Gaussian soliton, centred at the kernel centre and time-shifted to `t1`
/// (so it is the drift-Laplacian eigenfunction family of total degree
/// `k = sum(degrees)`).
pub fn caloric_polynomial<S: Real>(
    bg: &FlowBackground<S>,
    degrees: &[usize],
    window: (S, S),
) -> Result<HeatSolution<S>> {
    caloric_mixture(bg, &[(degrees.to_vec(), S::one())], window)
}

/// A linear combination of tensor caloric polynomials (still caloric).
pub fn caloric_mixture<S: Real>(
    bg: &FlowBackground<S>,
    terms: &[(Vec<usize>, S)],
    window: (S, S),
) -> Result<HeatSolution<S>> {
    if bg.kind != BackgroundKind::GaussianSoliton {
        return Err(Error::UnsupportedBackground {
            op: "caloric_polynomial (Gaussian soliton only)",
        });
    }
    check_window(bg, window)?;
    for (degrees, _) in terms {
        if degrees.len() != bg.dim {
            return Err(Error::config(format!(
                "expected {} per-axis degrees, got {}",
                bg.dim,
                degrees.len()
            )));
        }
        let total: usize = degrees.iter().sum();
        if total > MAX_POLY_TOTAL_DEGREE || degrees.iter().any(|&d| d > MAX_POLY_TOTAL_DEGREE) {
            return Err(Error::DegreeTooLarge {
                degree: total,
                cap: MAX_POLY_TOTAL_DEGREE,
            });
        }
    }
    Ok(HeatSolution {
        bg: *bg,
        window,
        generator: Generator::Caloric {
            terms: terms.to_vec(),
        },
        amplitude: S::one(),
    })
}

/// Exact per-mode heat evolution of band-limited initial data given at the
/// window start `a`.
///
/// Circle: `u_k(t) = u_k(a) exp(-(2 pi k/L)^2 (t-a))`. Sphere:
/// `u_l(t) = u_l(a) exp(-l(l+1) int_a^t ds/c)` with the closed form
/// `int_a^t ds/c = (1/2) ln(c(a)/c(t))`.
pub fn solve_heat<S: Real>(
    bg: &FlowBackground<S>,
    u0: &SpectralField<S>,
    window: (S, S),
) -> Result<HeatSolution<S>> {
    if bg.kind == BackgroundKind::GaussianSoliton {
        return Err(Error::UnsupportedBackground {
            op: "solve_heat (use caloric_polynomial on the Gaussian soliton)",
        });
    }
    check_window(bg, window)?;
    if u0.bg.kind != bg.kind {
        return Err(Error::ReprMismatch {
            expected: bg.kind.name(),
            got: u0.bg.kind.name(),
        });
    }
    Ok(HeatSolution {
        bg: *bg,
        window,
        generator: Generator::Modes {
            initial: u0.repr.clone(),
        },
        amplitude: S::one(),
    })
}

/// Perturbed circle evolution `d/dt u = Delta u + alpha(t) u_x + beta(t) u`,
/// exact per Fourier mode. The declared bound `C(t) = max(|alpha|, |beta|)`
/// satisfies `|(d/dt - Delta) u| <= C(t)(|grad u| + |u|)` pointwise.
pub fn solve_perturbed<S: Real>(
    bg: &FlowBackground<S>,
    u0: &SpectralField<S>,
    alpha: TimeFn<S>,
    beta: TimeFn<S>,
    window: (S, S),
) -> Result<HeatSolution<S>> {
    if bg.kind != BackgroundKind::FlatCircle {
        return Err(Error::UnsupportedBackground {
            op: "solve_perturbed (flat circle only)",
        });
    }
    check_window(bg, window)?;
    let (cos0, sin0) = match &u0.repr {
        FieldRepr::Fourier { cos, sin } => (cos.clone(), sin.clone()),
        other => {
            return Err(Error::ReprMismatch {
                expected: "fourier",
                got: other.kind_name(),
            })
        }
    };
    Ok(HeatSolution {
        bg: *bg,
        window,
        generator: Generator::Perturbed {
            cos0,
            sin0,
            alpha,
            beta,
        },
        amplitude: S::one(),
    })
}

/// Composite Simpson on `[a, t]` with a fixed even interval count; exact for
/// constants and spectrally small error for the smooth coefficient profiles
/// used here.
fn simpson_time_integral<S: Real>(f: &TimeFn<S>, a: S, t: S) -> S {
    if t == a {
        return S::zero();
    }
    let n = 1024usize;
    let h = (t - a) / S::of_usize(n);
    let mut acc = f(a) + f(t);
    for i in 1..n {
        let w = if i % 2 == 1 { S::of(4.0) } else { S::two() };
        acc = acc + w * f(a + S::of_usize(i) * h);
    }
    acc * h / S::of(3.0)
}

impl<S: Real> HeatSolution<S> {
    /// Evaluate the solution field at time `t` (must lie in the window,
    /// extended slightly for finite-difference probes).
    pub fn field_at(&self, t: S) -> Result<SpectralField<S>> {
        let field = match &self.generator {
            Generator::Caloric { terms } => {
                let dim = self.bg.dim;
                let s = t - self.bg.t1; // = -tau: eigenfunction normalization
                let mut total = PolyN::zero(dim);
                for (degrees, coeff) in terms {
                    let mut prod = PolyN::constant(dim, *coeff);
                    for (axis, &k) in degrees.iter().enumerate() {
                        let p1 = heat_poly_1d(k, s);
                        let axis_poly = PolyN::from_poly1(dim, axis, &p1)
                            .shift_axis(axis, self.bg.center[axis]);
                        prod = prod.mul(&axis_poly);
                    }
                    total = total.add(&prod);
                }
                SpectralField::poly(self.bg, total.scale(self.amplitude))?
            }
            Generator::Modes { initial } => match initial {
                FieldRepr::Fourier { cos, sin } => {
                    let a = self.window.0;
                    let omega = S::two() * S::PI() / self.bg.circle_length;
                    let decay = |k: usize| {
                        let xi = omega * S::of_usize(k);
                        (-xi * xi * (t - a)).exp()
                    };
                    SpectralField::fourier(
                        self.bg,
                        cos.iter()
                            .enumerate()
                            .map(|(k, &c)| c * decay(k) * self.amplitude)
                            .collect(),
                        sin.iter()
                            .enumerate()
                            .map(|(k, &c)| c * decay(k) * self.amplitude)
                            .collect(),
                    )?
                }
                FieldRepr::Legendre { coeffs } => {
                    let a = self.window.0;
                    let c_a = self.bg.geometry(a)?.scale;
                    let c_t = self.bg.geometry(t)?.scale;
                    // int_a^t ds/c = (1/2) ln(c(a)/c(t))
                    let int_inv_c = (c_a / c_t).ln() * S::half();
                    SpectralField::legendre(
                        self.bg,
                        coeffs
                            .iter()
                            .enumerate()
                            .map(|(l, &c)| {
                                let lf = S::of_usize(l);
                                c * (-(lf * (lf + S::one())) * int_inv_c).exp() * self.amplitude
                            })
                            .collect(),
                    )?
                }
                FieldRepr::Poly { .. } => {
                    return Err(Error::ReprMismatch {
                        expected: "fourier or legendre",
                        got: "poly",
                    })
                }
            },
            Generator::Perturbed {
                cos0,
                sin0,
                alpha,
                beta,
            } => {
                let a = self.window.0;
                let omega = S::two() * S::PI() / self.bg.circle_length;
                let int_alpha = simpson_time_integral(alpha, a, t);
                let int_beta = simpson_time_integral(beta, a, t);
                let n = cos0.len().max(sin0.len());
                let mut cos_t = vec![S::zero(); n];
                let mut sin_t = vec![S::zero(); n];
                for k in 0..n {
                    let ak = cos0.get(k).copied().unwrap_or(S::zero());
                    let bk = sin0.get(k).copied().unwrap_or(S::zero());
                    let xi = omega * S::of_usize(k);
                    // mode z = a - i b evolves by exp((-xi^2)(t-a) + int beta + i xi int alpha)
                    let modulus = ((-xi * xi) * (t - a) + int_beta).exp();
                    let phase = xi * int_alpha;
                    let (sp, cp) = phase.sin_cos();
                    cos_t[k] = modulus * (ak * cp + bk * sp) * self.amplitude;
                    sin_t[k] = modulus * (bk * cp - ak * sp) * self.amplitude;
                }
                SpectralField::fourier(self.bg, cos_t, sin_t)?
            }
        };
        Ok(field)
    }

    /// The operator bound `C(t)`; zero for exact heat solutions.
    pub fn c_of(&self, t: S) -> S {
        match &self.generator {
            Generator::Perturbed { alpha, beta, .. } => alpha(t).abs().max(beta(t).abs()),
            _ => S::zero(),
        }
    }

    pub fn is_perturbed(&self) -> bool {
        matches!(self.generator, Generator::Perturbed { .. })
    }

    /// Scale the solution by a constant (still a solution).
    pub fn scale_amplitude(&mut self, k: S) {
        self.amplitude = self.amplitude * k;
    }

    /// For perturbed solutions: `alpha(t) u_x + beta(t) u` evaluated
    /// pointwise, i.e. the exact value of `(d/dt - Delta) u`.
    pub fn perturbation_at(&self, t: S, node: &[S; 3]) -> Result<S> {
        match &self.generator {
            Generator::Perturbed { alpha, beta, .. } => {
                let u = self.field_at(t)?;
                let du = u.differentials();
                let ux = du.first_at(node)[0];
                Ok(alpha(t) * ux + beta(t) * u.eval(node))
            }
            _ => Ok(S::zero()),
        }
    }
}

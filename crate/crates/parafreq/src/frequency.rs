//! The parabolic frequency U(t) = E(t) D(t)/I(t) and numerical checkers for
//! the monotonicity theorem, its equality case, backwards uniqueness, the
//! weighted Hessian identity, and the perturbed-operator derivative bounds.
//!
//! Convention: the correction factor is
//! `Ecorr(t) = exp(int_a^t (1 - kappa(s))/tau(s) ds)` with base point at the
//! window start, so `Ecorr(a) = 1` and, since kappa is clamped at 1,
//! `Ecorr <= 1`. Derivatives are central finite differences on the trace
//! grid; accumulated integrals use cumulative/composite Simpson, whose O(h^4)
//! error sits below the O(h^2) finite-difference noise floor.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolve::HeatSolution;
use crate::kernel::{drift_apply, kappa, kernel_at, KernelData, KernelParams};
use crate::report::Check;
use crate::scalar::Real;
use crate::spectral::{default_order, quadrature_from_kernel, SpectralField, WeightedQuadrature};
use crate::tol::Tolerances;

/// `I(t) = int u^2 dnu` by quadrature.
pub fn compute_i<S: Real>(u: &SpectralField<S>, q: &WeightedQuadrature<S>) -> S {
    q.integrate_fn(|n| {
        let v = u.eval(n);
        v * v
    })
}

/// `D(t) = -tau int |grad u|^2 dnu`, with the dual form
/// `tau int u (L_f u) dnu` computed alongside and required to agree.
///
/// Disagreement beyond `tol * (1 + |D|)` flags quadrature or truncation
/// failure as `DualFormMismatch`.
pub fn compute_d<S: Real>(
    u: &SpectralField<S>,
    kd: &KernelData<S>,
    q: &WeightedQuadrature<S>,
    tau: S,
    tol: &Tolerances<S>,
) -> Result<S> {
    let geo = kd.bg.geometry(kd.t)?;
    let du = u.differentials();
    let dirichlet = q.integrate_fn(|n| du.grad_sq_at(&geo, n));
    let primal = -tau * dirichlet;
    let lu = drift_apply(kd, u, q)?;
    let mut dual = S::zero();
    for (i, node) in q.nodes.iter().enumerate() {
        dual = dual + q.weights[i] * u.eval(node) * lu[i];
    }
    let dual = tau * dual;
    let gap = (primal - dual).abs();
    let scale = S::one() + primal.abs().max(dual.abs());
    if gap > tol.dual_form * scale {
        return Err(Error::DualFormMismatch {
            primal: primal.to_f64().unwrap_or(f64::NAN),
            dual: dual.to_f64().unwrap_or(f64::NAN),
            gap: gap.to_f64().unwrap_or(f64::NAN),
            tol: (tol.dual_form * scale).to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(primal)
}

/// `U = Ecorr * D / I`; errors `ZeroSolution` when I vanishes.
pub fn compute_u<S: Real>(ecorr: S, d: S, i_val: S, t: S) -> Result<S> {
    if !(i_val > S::zero()) {
        return Err(Error::ZeroSolution {
            i_value: i_val.to_f64().unwrap_or(f64::NAN),
            t: t.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(ecorr * d / i_val)
}

/// One time sample of the frequency data.
#[derive(Debug, Clone, Copy)]
pub struct FrequencySample<S> {
    pub t: S,
    pub tau: S,
    pub i_val: S,
    pub d_val: S,
    pub kappa: S,
    pub ecorr: S,
    pub u_val: S,
    /// Declared operator bound C(t) of the generating solution.
    pub c_bound: S,
    /// `I * int |L_f u|^2 dnu - (int u L_f u dnu)^2` (Cauchy-Schwarz gap).
    pub cs_gap: S,
}

/// Sampled time series of `(t, tau, I, D, kappa, Ecorr, U)` on a uniform
/// grid, with the finite-difference step recorded.
#[derive(Debug, Clone)]
pub struct FrequencyTrace<S> {
    pub samples: Vec<FrequencySample<S>>,
    pub fd_step: S,
    pub window: (S, S),
}

/// Trace construction knobs.
#[derive(Debug, Clone)]
pub struct TraceConfig<S> {
    pub samples: usize,
    /// Quadrature order; `None` picks the background default.
    pub order: Option<usize>,
    /// Kernel parameters; `None` pins guard and sphere smoothing to the
    /// window start.
    pub kernel: Option<KernelParams<S>>,
    /// Evaluate time samples concurrently (bit-identical to sequential).
    pub parallel: bool,
    pub tol: Tolerances<S>,
}

impl<S: Real> TraceConfig<S> {
    pub fn new(samples: usize) -> Self {
        TraceConfig {
            samples,
            order: None,
            kernel: None,
            parallel: false,
            tol: Tolerances::default(),
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = Some(order);
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }
}

struct RawSample<S> {
    t: S,
    tau: S,
    i_val: S,
    d_val: S,
    kappa: S,
    c_bound: S,
    cs_gap: S,
}

fn raw_sample<S: Real>(
    sol: &HeatSolution<S>,
    t: S,
    order: usize,
    kp: &KernelParams<S>,
    tol: &Tolerances<S>,
) -> Result<RawSample<S>> {
    let kd = kernel_at(&sol.bg, t, kp)?;
    let q = quadrature_from_kernel(&kd, order)?;
    let u = sol.field_at(t)?;
    let i_val = compute_i(&u, &q);
    if !(i_val > S::zero()) {
        return Err(Error::ZeroSolution {
            i_value: i_val.to_f64().unwrap_or(f64::NAN),
            t: t.to_f64().unwrap_or(f64::NAN),
        });
    }
    let d_val = compute_d(&u, &kd, &q, kd.tau, tol)?;
    let kap = kappa(&kd, &q)?;
    let lu = drift_apply(&kd, &u, &q)?;
    let mut lu_sq = S::zero();
    let mut u_lu = S::zero();
    for (i, node) in q.nodes.iter().enumerate() {
        let w = q.weights[i];
        lu_sq = lu_sq + w * lu[i] * lu[i];
        u_lu = u_lu + w * u.eval(node) * lu[i];
    }
    let cs_gap = i_val * lu_sq - u_lu * u_lu;
    Ok(RawSample {
        t,
        tau: kd.tau,
        i_val,
        d_val,
        kappa: kap,
        c_bound: sol.c_of(t),
        cs_gap,
    })
}

/// Build a frequency trace of `cfg.samples` uniform samples over the
/// solution's window.
pub fn trace<S: Real>(sol: &HeatSolution<S>, cfg: &TraceConfig<S>) -> Result<FrequencyTrace<S>> {
    if cfg.samples < 8 {
        return Err(Error::config(format!(
            "at least 8 samples required, got {}",
            cfg.samples
        )));
    }
    let (a, b) = sol.window;
    let order = cfg.order.unwrap_or_else(|| default_order(&sol.bg));
    let kp = cfg
        .kernel
        .unwrap_or_else(|| KernelParams::for_window(&sol.bg, a));
    let n = cfg.samples;
    let h = (b - a) / S::of_usize(n - 1);
    let times: Vec<S> = (0..n).map(|i| a + S::of_usize(i) * h).collect();

    let raws: Vec<RawSample<S>> = if cfg.parallel {
        times
            .par_iter()
            .map(|&t| raw_sample(sol, t, order, &kp, &cfg.tol))
            .collect::<Result<Vec<_>>>()?
    } else {
        times
            .iter()
            .map(|&t| raw_sample(sol, t, order, &kp, &cfg.tol))
            .collect::<Result<Vec<_>>>()?
    };

    // Ecorr(t_i) = exp(int_a^{t_i} (1-kappa)/tau) by cumulative Simpson.
    let integrand: Vec<S> = raws.iter().map(|r| (S::one() - r.kappa) / r.tau).collect();
    let cumulative = cumulative_simpson(&integrand, h);

    let mut samples = Vec::with_capacity(n);
    for (r, cum) in raws.into_iter().zip(cumulative) {
        let ecorr = cum.exp();
        let u_val = compute_u(ecorr, r.d_val, r.i_val, r.t)?;
        samples.push(FrequencySample {
            t: r.t,
            tau: r.tau,
            i_val: r.i_val,
            d_val: r.d_val,
            kappa: r.kappa,
            ecorr,
            u_val,
            c_bound: r.c_bound,
            cs_gap: r.cs_gap,
        });
    }
    let tr = FrequencyTrace {
        samples,
        fd_step: h,
        window: (a, b),
    };
    // U is non-positive by construction (positive weights, kappa >= 1).
    for (i, s) in tr.samples.iter().enumerate() {
        if s.u_val > cfg.tol.u_nonpositive {
            return Err(Error::BoundViolation {
                name: "U-nonpositive",
                sample: i,
                lhs: 0.0,
                rhs: s.u_val.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(tr)
}

/// Rescale a solution so that `I = 1` at the window start (a scaled heat
/// solution is still a heat solution; U is scale-invariant).
pub fn normalize_at_start<S: Real>(sol: &mut HeatSolution<S>, order: Option<usize>) -> Result<()> {
    let a = sol.window.0;
    let kp = KernelParams::for_window(&sol.bg, a);
    let kd = kernel_at(&sol.bg, a, &kp)?;
    let q = quadrature_from_kernel(&kd, order.unwrap_or_else(|| default_order(&sol.bg)))?;
    let u = sol.field_at(a)?;
    let i0 = compute_i(&u, &q);
    if !(i0 > S::zero()) {
        return Err(Error::ZeroSolution {
            i_value: i0.to_f64().unwrap_or(f64::NAN),
            t: a.to_f64().unwrap_or(f64::NAN),
        });
    }
    sol.scale_amplitude(S::one() / i0.sqrt());
    Ok(())
}

// ---------------------------------------------------------------------------
// Grid integration and differentiation helpers
// ---------------------------------------------------------------------------

/// Cumulative integral on a uniform grid: local parabolas through consecutive
/// point triples (O(h^3) per interval).
pub fn cumulative_simpson<S: Real>(values: &[S], h: S) -> Vec<S> {
    let n = values.len();
    let mut out = vec![S::zero(); n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = (values[0] + values[1]) * h * S::half();
        return out;
    }
    let twelfth = h / S::of(12.0);
    // first interval from the parabola through points 0, 1, 2
    out[1] = twelfth * (S::of(5.0) * values[0] + S::of(8.0) * values[1] - values[2]);
    for i in 1..(n - 1) {
        // interval [i, i+1] from the parabola through i-1, i, i+1
        let inc = twelfth * (-values[i - 1] + S::of(8.0) * values[i] + S::of(5.0) * values[i + 1]);
        out[i + 1] = out[i] + inc;
    }
    out
}

/// Composite Simpson over the whole grid; an odd interval count is finished
/// with the 3/8 rule on the last three intervals.
pub fn simpson_full<S: Real>(values: &[S], h: S) -> S {
    let n = values.len();
    if n < 2 {
        return S::zero();
    }
    if n == 2 {
        return (values[0] + values[1]) * h * S::half();
    }
    let intervals = n - 1;
    let (simpson_end, tail) = if intervals % 2 == 0 {
        (n - 1, S::zero())
    } else {
        // 3/8 rule on the last three intervals
        let m = n - 4;
        let t = S::of(3.0) * h / S::of(8.0)
            * (values[m] + S::of(3.0) * values[m + 1] + S::of(3.0) * values[m + 2] + values[m + 3]);
        (m, t)
    };
    let mut acc = S::zero();
    if simpson_end >= 2 {
        acc = values[0] + values[simpson_end];
        let mut i = 1;
        while i < simpson_end {
            let w = if i % 2 == 1 { S::of(4.0) } else { S::two() };
            acc = acc + w * values[i];
            i += 1;
        }
        acc = acc * h / S::of(3.0);
    }
    acc + tail
}

impl<S: Real> FrequencyTrace<S> {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Central finite differences of U on the grid (second-order one-sided at
    /// the endpoints).
    pub fn u_fd_prime(&self) -> Vec<S> {
        fd_prime(
            &self.samples.iter().map(|s| s.u_val).collect::<Vec<_>>(),
            self.fd_step,
        )
    }

    /// Decrease U at one sample: a deliberately corrupted trace for negative
    /// controls.
    pub fn corrupted(mut self, index: usize, drop: S) -> Self {
        if index < self.samples.len() {
            self.samples[index].u_val = self.samples[index].u_val - drop;
        }
        self
    }

    pub fn min_cs_gap(&self) -> S {
        self.samples
            .iter()
            .map(|s| s.cs_gap)
            .fold(S::infinity(), |a, b| a.min(b))
    }

    pub fn max_kappa(&self) -> S {
        self.samples
            .iter()
            .map(|s| s.kappa)
            .fold(S::one(), |a, b| a.max(b))
    }
}

fn fd_prime<S: Real>(v: &[S], h: S) -> Vec<S> {
    let n = v.len();
    let mut out = vec![S::zero(); n];
    if n < 3 {
        return out;
    }
    let two_h = S::two() * h;
    out[0] = (-S::of(3.0) * v[0] + S::of(4.0) * v[1] - v[2]) / two_h;
    for i in 1..(n - 1) {
        out[i] = (v[i + 1] - v[i - 1]) / two_h;
    }
    out[n - 1] = (S::of(3.0) * v[n - 1] - S::of(4.0) * v[n - 2] + v[n - 3]) / two_h;
    out
}

// ---------------------------------------------------------------------------
// Checkers
// ---------------------------------------------------------------------------

/// Monotonicity check: U is increasing along the flow.
///
/// Asserts `U(t_{i+1}) >= U(t_i) - tol` with `tol = base * (1 + |U(a)|)`;
/// reports the minimum forward difference.
pub fn check_monotone<S: Real>(tr: &FrequencyTrace<S>, tol: &Tolerances<S>) -> Result<Check> {
    let u0 = tr.samples[0].u_val.abs();
    let tol_mono = tol.monotonicity * (S::one() + u0);
    let mut min_fwd = S::infinity();
    for i in 0..(tr.samples.len() - 1) {
        let fwd = tr.samples[i + 1].u_val - tr.samples[i].u_val;
        if fwd < min_fwd {
            min_fwd = fwd;
        }
        if fwd < -tol_mono {
            return Err(Error::MonotonicityViolation {
                t_lo: tr.samples[i].t.to_f64().unwrap_or(f64::NAN),
                t_hi: tr.samples[i + 1].t.to_f64().unwrap_or(f64::NAN),
                drop: fwd.to_f64().unwrap_or(f64::NAN),
                tol: tol_mono.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(Check::new(
        "monotonicity",
        true,
        min_fwd.to_f64().unwrap_or(f64::NAN),
        (-tol_mono).to_f64().unwrap_or(f64::NAN),
        (min_fwd + tol_mono).to_f64().unwrap_or(f64::NAN),
        tol_mono.to_f64().unwrap_or(f64::NAN),
    ))
}

/// Equality case of the monotonicity theorem: where `U' = 0`, `u` must be a
/// drift-Laplacian eigenfunction with `c(t) = Ecorr^{-1} U / tau`.
///
/// Returns the relative L^2(dnu) residual `||L_f u - c u|| / ||u||` at the
/// trace sample `index`; errors `NotStationary` when the finite-difference
/// `U'` exceeds the gate.
pub fn equality_case_residual<S: Real>(
    sol: &HeatSolution<S>,
    tr: &FrequencyTrace<S>,
    index: usize,
    order: Option<usize>,
    tol: &Tolerances<S>,
) -> Result<S> {
    let n = tr.samples.len();
    if index == 0 || index + 1 >= n {
        return Err(Error::config("equality case needs an interior sample"));
    }
    let h = tr.fd_step;
    let u_prime = (tr.samples[index + 1].u_val - tr.samples[index - 1].u_val) / (S::two() * h);
    if u_prime.abs() > tol.stationary_u_prime {
        return Err(Error::NotStationary {
            t: tr.samples[index].t.to_f64().unwrap_or(f64::NAN),
            u_prime: u_prime.abs().to_f64().unwrap_or(f64::NAN),
            tol: tol.stationary_u_prime.to_f64().unwrap_or(f64::NAN),
        });
    }
    let s = &tr.samples[index];
    let c = s.u_val / (s.ecorr * s.tau);
    let kp = KernelParams::for_window(&sol.bg, tr.window.0);
    let kd = kernel_at(&sol.bg, s.t, &kp)?;
    let q = quadrature_from_kernel(&kd, order.unwrap_or_else(|| default_order(&sol.bg)))?;
    let u = sol.field_at(s.t)?;
    let lu = drift_apply(&kd, &u, &q)?;
    let mut num = S::zero();
    let mut den = S::zero();
    for (i, node) in q.nodes.iter().enumerate() {
        let w = q.weights[i];
        let uv = u.eval(node);
        let r = lu[i] - c * uv;
        num = num + w * r * r;
        den = den + w * uv * uv;
    }
    Ok((num / den).sqrt())
}

/// Weighted Hessian identity (drift Bochner formula integrated):
/// `int |Hess u|^2 dnu = int (|L_f u|^2 - Ric_f(grad u, grad u)) dnu`.
/// Returns the absolute quadrature residual.
pub fn hessian_identity_residual<S: Real>(
    u: &SpectralField<S>,
    kd: &KernelData<S>,
    q: &WeightedQuadrature<S>,
) -> Result<S> {
    let geo = kd.bg.geometry(kd.t)?;
    let du = u.differentials();
    let lu = drift_apply(kd, u, q)?;
    let mut lhs = S::zero();
    let mut rhs = S::zero();
    for (i, node) in q.nodes.iter().enumerate() {
        let w = q.weights[i];
        lhs = lhs + w * du.hess_sq_at(&geo, node);
        rhs = rhs + w * (lu[i] * lu[i] - kd.ric_f_on_grad(&du, node)?);
    }
    Ok((lhs - rhs).abs())
}

/// `max_i |FD(log I)' - 2 Ecorr^{-1} U / tau|` over interior samples; the
/// identity `I' = 2D/tau` holds exactly for heat solutions, so the result is
/// finite-difference limited.
pub fn log_i_identity_residual<S: Real>(tr: &FrequencyTrace<S>) -> S {
    let log_i: Vec<S> = tr.samples.iter().map(|s| s.i_val.ln()).collect();
    let d = fd_prime(&log_i, tr.fd_step);
    let mut worst = S::zero();
    for i in 1..(tr.samples.len() - 1) {
        let s = &tr.samples[i];
        let rhs = S::two() * s.u_val / (s.ecorr * s.tau);
        worst = worst.max((d[i] - rhs).abs());
    }
    worst
}

/// Backwards-uniqueness lower bound:
/// `I(b) >= I(a) exp(2 U(a) int_a^b Ecorr^{-1}(t) tau^{-1}(t) dt)`.
pub fn backwards_bound_check<S: Real>(
    tr: &FrequencyTrace<S>,
    tol: &Tolerances<S>,
) -> Result<Check> {
    let integrand: Vec<S> = tr
        .samples
        .iter()
        .map(|s| S::one() / (s.ecorr * s.tau))
        .collect();
    let integral = simpson_full(&integrand, tr.fd_step);
    let first = &tr.samples[0];
    let last = &tr.samples[tr.samples.len() - 1];
    let bound = first.i_val * (S::two() * first.u_val * integral).exp();
    let rhs = bound * (S::one() - tol.backwards_bound);
    let lhs = last.i_val;
    let margin = (lhs - bound) / first.i_val;
    if lhs < rhs {
        return Err(Error::BoundViolation {
            name: "backwards-bound",
            sample: tr.samples.len() - 1,
            lhs: lhs.to_f64().unwrap_or(f64::NAN),
            rhs: rhs.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Check::new(
        "backwards-bound",
        true,
        lhs.to_f64().unwrap_or(f64::NAN),
        rhs.to_f64().unwrap_or(f64::NAN),
        margin.to_f64().unwrap_or(f64::NAN),
        tol.backwards_bound.to_f64().unwrap_or(f64::NAN),
    ))
}

/// The three derivative bounds for `|(d/dt - Delta) u| <= C(t)(|grad u| + |u|)`:
///
/// 1. `(log I)' >= (2 + C) Ecorr^{-1} U / tau - 3 C`
/// 2. `U' >= C^2 (U - tau)`
/// 3. `C^2 >= (log(tau(a) - U))'`
///
/// checked at every interior sample with finite-difference derivatives and
/// slack `base * (1 + |U| + tau(a))`.
pub fn general_bounds_check<S: Real>(
    tr: &FrequencyTrace<S>,
    tol: &Tolerances<S>,
) -> Result<Vec<Check>> {
    let n = tr.samples.len();
    let tau_a = tr.samples[0].tau;
    let h = tr.fd_step;
    let log_i: Vec<S> = tr.samples.iter().map(|s| s.i_val.ln()).collect();
    let u: Vec<S> = tr.samples.iter().map(|s| s.u_val).collect();
    let log_tau_a_minus_u: Vec<S> = u.iter().map(|&ui| (tau_a - ui).ln()).collect();
    let d_log_i = fd_prime(&log_i, h);
    let d_u = fd_prime(&u, h);
    let d_log_tmu = fd_prime(&log_tau_a_minus_u, h);

    let names: [&'static str; 3] = ["log-I-bound", "U-prime-bound", "log-tau-minus-U-bound"];
    let mut worst = [S::infinity(); 3];
    let mut worst_at = [0usize; 3];
    for i in 1..(n - 1) {
        let s = &tr.samples[i];
        let slack = tol.general_bounds * (S::one() + s.u_val.abs() + tau_a);
        let c = s.c_bound;
        let lhs_rhs = [
            (
                d_log_i[i],
                (S::two() + c) * s.u_val / (s.ecorr * s.tau) - S::of(3.0) * c,
            ),
            (d_u[i], c * c * (s.u_val - s.tau)),
            (c * c, d_log_tmu[i]),
        ];
        for (j, (lhs, rhs)) in lhs_rhs.iter().enumerate() {
            let margin = *lhs - *rhs;
            if margin < worst[j] {
                worst[j] = margin;
                worst_at[j] = i;
            }
            if margin < -slack {
                return Err(Error::BoundViolation {
                    name: names[j],
                    sample: i,
                    lhs: lhs.to_f64().unwrap_or(f64::NAN),
                    rhs: rhs.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }
    Ok((0..3)
        .map(|j| {
            let s = &tr.samples[worst_at[j]];
            let slack = tol.general_bounds * (S::one() + s.u_val.abs() + tau_a);
            Check::new(
                names[j],
                true,
                worst[j].to_f64().unwrap_or(f64::NAN),
                (-slack).to_f64().unwrap_or(f64::NAN),
                (worst[j] + slack).to_f64().unwrap_or(f64::NAN),
                slack.to_f64().unwrap_or(f64::NAN),
            )
        })
        .collect())
}

/// Integrated form of the perturbed bounds:
/// `I(b) >= I(a) exp[(2 + sup C)((U(a) - tau(a)) e^{int C^2} + tau(a))
///                    int_a^b Ecorr^{-1} tau^{-1} - 3 (b-a) sup C]`.
pub fn corollary_bound_check<S: Real>(
    tr: &FrequencyTrace<S>,
    tol: &Tolerances<S>,
) -> Result<Check> {
    let first = &tr.samples[0];
    let last = &tr.samples[tr.samples.len() - 1];
    let h = tr.fd_step;
    let sup_c = tr
        .samples
        .iter()
        .map(|s| s.c_bound)
        .fold(S::zero(), |a, b| a.max(b));
    let c_sq: Vec<S> = tr.samples.iter().map(|s| s.c_bound * s.c_bound).collect();
    let int_c_sq = simpson_full(&c_sq, h);
    let weight: Vec<S> = tr
        .samples
        .iter()
        .map(|s| S::one() / (s.ecorr * s.tau))
        .collect();
    let int_weight = simpson_full(&weight, h);
    let tau_a = first.tau;
    let len = tr.window.1 - tr.window.0;
    let exponent =
        (S::two() + sup_c) * ((first.u_val - tau_a) * int_c_sq.exp() + tau_a) * int_weight
            - S::of(3.0) * len * sup_c;
    let bound = first.i_val * exponent.exp();
    let rhs = bound * (S::one() - tol.corollary_bound);
    let lhs = last.i_val;
    if lhs < rhs {
        return Err(Error::BoundViolation {
            name: "corollary-bound",
            sample: tr.samples.len() - 1,
            lhs: lhs.to_f64().unwrap_or(f64::NAN),
            rhs: rhs.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Check::new(
        "corollary-bound",
        true,
        lhs.to_f64().unwrap_or(f64::NAN),
        rhs.to_f64().unwrap_or(f64::NAN),
        ((lhs - bound) / first.i_val).to_f64().unwrap_or(f64::NAN),
        tol.corollary_bound.to_f64().unwrap_or(f64::NAN),
    ))
}

/// The corollary's right-hand side as a function of an assumed `sup C`
/// (exposed for the monotonicity-in-C property: larger C weakens the bound).
pub fn corollary_rhs_for_sup_c<S: Real>(tr: &FrequencyTrace<S>, sup_c: S) -> S {
    let first = &tr.samples[0];
    let h = tr.fd_step;
    let int_c_sq = sup_c * sup_c * (tr.window.1 - tr.window.0);
    let weight: Vec<S> = tr
        .samples
        .iter()
        .map(|s| S::one() / (s.ecorr * s.tau))
        .collect();
    let int_weight = simpson_full(&weight, h);
    let tau_a = first.tau;
    let len = tr.window.1 - tr.window.0;
    let exponent =
        (S::two() + sup_c) * ((first.u_val - tau_a) * int_c_sq.exp() + tau_a) * int_weight
            - S::of(3.0) * len * sup_c;
    first.i_val * exponent.exp()
}

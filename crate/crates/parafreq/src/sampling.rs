//! Seeded random test solutions per background, for the property suites and
//! the experiment runner. Everything is driven by a ChaCha stream so results
//! are reproducible from the seed alone.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::backgrounds::{BackgroundKind, FlowBackground};
use crate::error::Result;
use crate::evolve::{caloric_mixture, solve_heat, HeatSolution};
use crate::scalar::Real;
use crate::spectral::SpectralField;

/// A seeded random band-limited field on the background (circle, sphere) or a
/// random caloric-polynomial mixture (Gaussian soliton, returned via
/// [`random_solution`]).
pub fn random_field<S: Real>(
    bg: &FlowBackground<S>,
    rng: &mut ChaCha8Rng,
    max_mode: usize,
) -> Result<SpectralField<S>> {
    match bg.kind {
        BackgroundKind::FlatCircle => {
            let mut cos = vec![S::zero(); max_mode + 1];
            let mut sin = vec![S::zero(); max_mode + 1];
            for k in 0..=max_mode {
                cos[k] = S::of(rng.gen_range(-1.0..1.0));
                if k > 0 {
                    sin[k] = S::of(rng.gen_range(-1.0..1.0));
                }
            }
            SpectralField::fourier(*bg, cos, sin)
        }
        BackgroundKind::ShrinkingSphere => {
            let coeffs = (0..=max_mode)
                .map(|_| S::of(rng.gen_range(-1.0..1.0)))
                .collect();
            SpectralField::legendre(*bg, coeffs)
        }
        BackgroundKind::GaussianSoliton => {
            let sol = random_solution(bg, rng, max_mode, (bg.t1 - S::two(), bg.t1 - S::one()))?;
            sol.field_at(bg.t1 - S::one())
        }
    }
}

/// A seeded random heat solution on the window: a caloric mixture on the
/// Gaussian soliton, per-mode evolution of a random band-limited field
/// elsewhere.
pub fn random_solution<S: Real>(
    bg: &FlowBackground<S>,
    rng: &mut ChaCha8Rng,
    max_mode: usize,
    window: (S, S),
) -> Result<HeatSolution<S>> {
    match bg.kind {
        BackgroundKind::GaussianSoliton => {
            // per-axis cap keeps the total degree inside the polynomial budget
            let dmax = max_mode
                .min(6)
                .min(crate::spectral::MAX_POLY_TOTAL_DEGREE / bg.dim);
            let n_terms = rng.gen_range(2..=4usize);
            let mut terms = Vec::with_capacity(n_terms);
            for _ in 0..n_terms {
                let degrees: Vec<usize> = (0..bg.dim).map(|_| rng.gen_range(0..=dmax)).collect();
                // damp high degrees so no single term dwarfs the mixture
                let total: usize = degrees.iter().sum();
                let damp = S::of(1.0 / (1u64 << total.min(20)) as f64);
                terms.push((degrees, S::of(rng.gen_range(-1.0..1.0)) * damp));
            }
            caloric_mixture(bg, &terms, window)
        }
        _ => {
            let u0 = random_field(bg, rng, max_mode)?;
            solve_heat(bg, &u0, window)
        }
    }
}

/// Deterministic RNG for a given experiment seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::{compute_i, trace, TraceConfig};
    use crate::kernel::{kernel_at, KernelParams};
    use crate::spectral::quadrature_from_kernel;

    #[test]
    fn same_seed_same_solution() {
        let bg = FlowBackground::circle(2.0 * std::f64::consts::PI, 0.0, 0.0).unwrap();
        let mut r1 = rng_from_seed(42);
        let mut r2 = rng_from_seed(42);
        let a = random_field(&bg, &mut r1, 8).unwrap();
        let b = random_field(&bg, &mut r2, 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_solutions_are_traceable_on_all_backgrounds() {
        let backgrounds = [
            FlowBackground::gaussian(1, 0.0, [0.0; 3]).unwrap(),
            FlowBackground::circle(2.0 * std::f64::consts::PI, 0.0, 0.0).unwrap(),
            FlowBackground::sphere(4.0, 1.0).unwrap(),
        ];
        let mut rng = rng_from_seed(7);
        for bg in backgrounds {
            let window = match bg.kind {
                BackgroundKind::ShrinkingSphere => (-1.0, 0.25),
                _ => (-1.0, -0.5),
            };
            let sol = random_solution(&bg, &mut rng, 6, window).unwrap();
            let order = match bg.kind {
                BackgroundKind::GaussianSoliton => Some(16),
                _ => None,
            };
            let mut cfg = TraceConfig::new(16);
            cfg.order = order;
            let tr = trace(&sol, &cfg).unwrap();
            assert_eq!(tr.len(), 16);
            let kd = kernel_at(&bg, window.0, &KernelParams::for_window(&bg, window.0)).unwrap();
            let q = quadrature_from_kernel(&kd, order.unwrap_or(64)).unwrap();
            let u = sol.field_at(window.0).unwrap();
            assert!(compute_i(&u, &q) > 0.0);
        }
    }
}

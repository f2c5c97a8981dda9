//! Polynomial calculus: dense 1-D polynomials and sparse multi-index
//! polynomials on up to three axes. Exact degree bookkeeping is what makes the
//! Gauss-Hermite quadrature exactness budget auditable.

use crate::scalar::Real;

/// Maximum number of axes for multi-index polynomials.
pub const MAX_AXES: usize = 3;

/// Dense univariate polynomial; `coeffs[j]` multiplies `x^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly1<S> {
    pub coeffs: Vec<S>,
}

impl<S: Real> Poly1<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        let mut p = Poly1 { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: vec![] }
    }

    pub fn constant(c: S) -> Self {
        Poly1::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly1::new(vec![S::zero(), S::one()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(&c) if c == S::zero()) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, x: S) -> S {
        // Horner
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly1::zero();
        }
        Poly1::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| S::of_usize(j) * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![S::zero(); n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[j] = out[j] + c;
        }
        for (j, &c) in other.coeffs.iter().enumerate() {
            out[j] = out[j] + c;
        }
        Poly1::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-S::one()))
    }

    pub fn scale(&self, k: S) -> Self {
        Poly1::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Poly1::new(out)
    }

    /// Multiply by the monomial `x`.
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Poly1::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(S::zero());
        out.extend_from_slice(&self.coeffs);
        Poly1::new(out)
    }

    /// `p(a*x)`: substitute a scaled argument.
    pub fn scale_arg(&self, a: S) -> Self {
        let mut pow = S::one();
        Poly1::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    let out = c * pow;
                    pow = pow * a;
                    out
                })
                .collect(),
        )
    }

    pub fn max_abs_coeff(&self) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(), |acc, &c| acc.max(c.abs()))
    }
}

/// Sparse polynomial in up to [`MAX_AXES`] variables. Terms are kept sorted by
/// exponent tuple, which makes arithmetic deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyN<S> {
    pub dim: usize,
    terms: Vec<([u8; MAX_AXES], S)>,
}

impl<S: Real> PolyN<S> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= MAX_AXES);
        PolyN { dim, terms: vec![] }
    }

    pub fn constant(dim: usize, c: S) -> Self {
        Self::from_terms(dim, vec![([0; MAX_AXES], c)])
    }

    pub fn from_terms(dim: usize, terms: Vec<([u8; MAX_AXES], S)>) -> Self {
        assert!(dim >= 1 && dim <= MAX_AXES);
        let mut p = PolyN { dim, terms };
        p.canonicalize();
        p
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by_key(|t| t.0);
        let mut merged: Vec<([u8; MAX_AXES], S)> = Vec::with_capacity(self.terms.len());
        for &(e, c) in &self.terms {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 = last.1 + c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|&(_, c)| c != S::zero());
        self.terms = merged;
    }

    pub fn terms(&self) -> &[([u8; MAX_AXES], S)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().map(|&p| p as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Evaluate at a point, using per-axis power tables.
    pub fn eval(&self, x: &[S; MAX_AXES]) -> S {
        let dmax = self.total_degree();
        let mut pow = [[S::one(); 16]; MAX_AXES];
        for axis in 0..self.dim {
            for p in 1..=dmax.min(15) {
                pow[axis][p] = pow[axis][p - 1] * x[axis];
            }
        }
        let mut acc = S::zero();
        for &(e, c) in &self.terms {
            let mut term = c;
            for axis in 0..self.dim {
                let p = e[axis] as usize;
                if p > 0 {
                    term = term
                        * if p < 16 {
                            pow[axis][p]
                        } else {
                            x[axis].powi(p as i32)
                        };
                }
            }
            acc = acc + term;
        }
        acc
    }

    pub fn partial(&self, axis: usize) -> Self {
        assert!(axis < self.dim);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[axis] > 0)
            .map(|&(e, c)| {
                let mut e2 = e;
                e2[axis] -= 1;
                (e2, c * S::of_usize(e[axis] as usize))
            })
            .collect();
        PolyN::from_terms(self.dim, terms)
    }

    /// Euclidean Laplacian: sum of second partials over the active axes.
    pub fn laplacian(&self) -> Self {
        let mut out = PolyN::zero(self.dim);
        for axis in 0..self.dim {
            out = out.add(&self.partial(axis).partial(axis));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        PolyN::from_terms(self.dim, terms)
    }

    pub fn scale(&self, k: S) -> Self {
        PolyN::from_terms(
            self.dim,
            self.terms.iter().map(|&(e, c)| (e, c * k)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &other.terms {
                let mut e = [0u8; MAX_AXES];
                for axis in 0..MAX_AXES {
                    e[axis] = ea[axis] + eb[axis];
                }
                terms.push((e, ca * cb));
            }
        }
        PolyN::from_terms(self.dim, terms)
    }

    /// Embed a univariate polynomial along one axis of an n-axis polynomial.
    pub fn from_poly1(dim: usize, axis: usize, p: &Poly1<S>) -> Self {
        assert!(axis < dim);
        let terms = p
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != S::zero())
            .map(|(j, &c)| {
                let mut e = [0u8; MAX_AXES];
                e[axis] = j as u8;
                (e, c)
            })
            .collect();
        PolyN::from_terms(dim, terms)
    }

    /// Substitute `x_axis -> x_axis - shift` (recentre the polynomial).
    pub fn shift_axis(&self, axis: usize, shift: S) -> Self {
        if shift == S::zero() {
            return self.clone();
        }
        // binomial expansion per term
        let mut out = PolyN::zero(self.dim);
        for &(e, c) in &self.terms {
            let p = e[axis] as usize;
            // (x - shift)^p
            let mut binom = Poly1::constant(S::one());
            let lin = Poly1::new(vec![-shift, S::one()]);
            for _ in 0..p {
                binom = binom.mul(&lin);
            }
            for (j, &bc) in binom.coeffs.iter().enumerate() {
                if bc == S::zero() {
                    continue;
                }
                let mut e2 = e;
                e2[axis] = j as u8;
                out = out.add(&PolyN::from_terms(self.dim, vec![(e2, c * bc)]));
            }
        }
        out
    }

    pub fn max_abs_coeff(&self) -> S {
        self.terms
            .iter()
            .fold(S::zero(), |acc, &(_, c)| acc.max(c.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn horner_eval() {
        // 1 + 2x + 3x^2 at x = 2 -> 17
        let p = Poly1::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.eval(2.0), 17.0);
    }

    #[test]
    fn derivative_drops_degree() {
        let p = Poly1::new(vec![1.0, 2.0, 3.0]);
        let d = p.derivative();
        assert_eq!(d.coeffs, vec![2.0, 6.0]);
        assert!(Poly1::<f64>::constant(5.0).derivative().is_zero());
    }

    #[test]
    fn scale_arg_substitutes() {
        // p(x) = x^2, p(3x) = 9x^2
        let p = Poly1::new(vec![0.0, 0.0, 1.0]);
        let q = p.scale_arg(3.0);
        assert_eq!(q.eval(1.0), 9.0);
    }

    #[test]
    fn polyn_eval_square() {
        let p = PolyN::from_terms(1, vec![([2, 0, 0], 1.0)]);
        assert_eq!(p.eval(&[3.0, 0.0, 0.0]), 9.0);
    }

    #[test]
    fn polyn_laplacian_of_x2() {
        let p = PolyN::from_terms(1, vec![([2, 0, 0], 1.0)]);
        let lap = p.laplacian();
        assert_eq!(lap.eval(&[5.0, 0.0, 0.0]), 2.0);
    }

    #[test]
    fn polyn_mul_tensor() {
        // (x^2)(y^3) has total degree 5
        let px = PolyN::from_terms(2, vec![([2, 0, 0], 1.0)]);
        let py = PolyN::from_terms(2, vec![([0, 3, 0], 1.0)]);
        let p = px.mul(&py);
        assert_eq!(p.total_degree(), 5);
        assert_eq!(p.eval(&[2.0, 2.0, 0.0]), 32.0);
    }

    #[test]
    fn shift_axis_recentres() {
        // x^2 shifted by 1: (x-1)^2
        let p = PolyN::from_terms(1, vec![([2, 0, 0], 1.0)]);
        let q = p.shift_axis(0, 1.0);
        assert_abs_diff_eq!(q.eval(&[3.0, 0.0, 0.0]), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.eval(&[1.0, 0.0, 0.0]), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn canonical_merge_drops_zeros() {
        let p = PolyN::from_terms(1, vec![([1, 0, 0], 1.0), ([1, 0, 0], -1.0)]);
        assert!(p.is_zero());
    }
}

//! Small dense symmetric linear algebra.
//!
//! Everything here operates on matrices of order a few dozen at most (Galerkin
//! spaces, quadrature companion work), so the classic cyclic Jacobi iteration
//! and an unblocked Cholesky are entirely adequate and keep the crate
//! dependency-free on the linear-algebra side.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with `eigenvectors[j]` the column for
/// `eigenvalues[j]`, sorted in descending eigenvalue order.
pub fn sym_eigen<S: Real>(mat: &[Vec<S>]) -> (Vec<S>, Vec<Vec<S>>) {
    let n = mat.len();
    let mut a: Vec<Vec<S>> = mat.to_vec();
    let mut v: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect()
        })
        .collect();

    let off = |a: &[Vec<S>]| -> S {
        let mut s = S::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                s = s + a[p][q] * a[p][q];
            }
        }
        s
    };

    let tiny = S::epsilon() * S::epsilon();
    for _sweep in 0..64 {
        if off(&a) <= tiny * frobenius_sq(&a) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() <= S::epsilon() * (a[p][p].abs() + a[q][q].abs()) {
                    a[p][q] = S::zero();
                    a[q][p] = S::zero();
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (S::two() * a[p][q]);
                let t = {
                    let denom = theta.abs() + (theta * theta + S::one()).sqrt();
                    let t = S::one() / denom;
                    if theta < S::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;

                let app = a[p][p];
                let aqq = a[q][q];
                let apq = a[p][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = S::zero();
                a[q][p] = S::zero();
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[r][p];
                        let arq = a[r][q];
                        a[r][p] = c * arp - s * arq;
                        a[p][r] = a[r][p];
                        a[r][q] = s * arp + c * arq;
                        a[q][r] = a[r][q];
                    }
                }
                for r in 0..n {
                    let vrp = v[r][p];
                    let vrq = v[r][q];
                    v[r][p] = c * vrp - s * vrq;
                    v[r][q] = s * vrp + c * vrq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).expect("finite eigenvalues"));
    let eigenvalues: Vec<S> = order.iter().map(|&i| a[i][i]).collect();
    let eigenvectors: Vec<Vec<S>> = order
        .iter()
        .map(|&j| (0..n).map(|r| v[r][j]).collect())
        .collect();
    (eigenvalues, eigenvectors)
}

fn frobenius_sq<S: Real>(a: &[Vec<S>]) -> S {
    a.iter()
        .flat_map(|row| row.iter())
        .map(|&x| x * x)
        .fold(S::zero(), |acc, x| acc + x)
}

/// Lower Cholesky factor of a symmetric positive definite matrix, or `None`
/// if a pivot is not strictly positive.
pub fn cholesky<S: Real>(m: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = m.len();
    let mut l = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m[i][j];
            for k in 0..j {
                sum = sum - l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= S::zero() {
                    return None;
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Some(l)
}

/// Solve the generalized symmetric eigenproblem `A x = lambda M x` with `M`
/// positive definite, via Cholesky reduction to a standard symmetric problem.
///
/// Eigenvalues come back sorted descending. The mass-matrix condition number
/// (ratio of extreme `M` eigenvalues) is screened first; past `cond_limit`
/// the reduction is numerically meaningless and `IllConditioned` is returned.
pub fn generalized_sym_eigen<S: Real>(a: &[Vec<S>], m: &[Vec<S>], cond_limit: S) -> Result<Vec<S>> {
    let n = a.len();
    let (m_eigs, _) = sym_eigen(m);
    let max_e = m_eigs.first().copied().unwrap_or(S::one());
    let min_e = m_eigs.last().copied().unwrap_or(S::one());
    let cond = if min_e > S::zero() {
        max_e / min_e
    } else {
        S::infinity()
    };
    if cond > cond_limit {
        return Err(Error::IllConditioned {
            cond: cond.to_f64().unwrap_or(f64::INFINITY),
        });
    }
    let l = cholesky(m).ok_or(Error::IllConditioned {
        cond: cond.to_f64().unwrap_or(f64::INFINITY),
    })?;

    // C = L^{-1} A L^{-T}, assembled column by column.
    let mut c = vec![vec![S::zero(); n]; n];
    // W = L^{-1} A  (forward substitution on each column of A).
    let mut w = vec![vec![S::zero(); n]; n];
    for col in 0..n {
        for i in 0..n {
            let mut sum = a[i][col];
            for k in 0..i {
                sum = sum - l[i][k] * w[k][col];
            }
            w[i][col] = sum / l[i][i];
        }
    }
    // C = W L^{-T}: solve C L^T = W, i.e. forward substitution on rows.
    for row in 0..n {
        for j in 0..n {
            let mut sum = w[row][j];
            for k in 0..j {
                sum = sum - c[row][k] * l[j][k];
            }
            c[row][j] = sum / l[j][j];
        }
    }
    // Symmetrize against roundoff before Jacobi.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (c[i][j] + c[j][i]) * S::half();
            c[i][j] = avg;
            c[j][i] = avg;
        }
    }
    let (eigs, _) = sym_eigen(&c);
    Ok(eigs)
}

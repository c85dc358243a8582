//! One-sided (Hestenes) Jacobi SVD.
//!
//! Columns of the working matrix are orthogonalised pairwise with the same
//! complex rotation used by the eigensolver, applied implicitly to the Gram
//! matrix `W^H W`. Singular values come out as column norms, so exact zeros
//! stay at round-off level `eps * ||a||` instead of `sqrt(eps) * ||a||` as
//! they would through an explicitly formed Gram matrix.

use super::eigen::jacobi_rotation;
use super::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const PAIR_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 60;

/// Singular values (descending) and, optionally, thin singular vectors.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub singular_values: Vec<f64>,
    /// `rows x k` with orthonormal columns, `k = min(rows, cols)`.
    pub left_vectors: Option<ComplexMatrix>,
    /// `cols x k` with orthonormal columns.
    pub right_vectors: Option<ComplexMatrix>,
}

impl SpectrumResult {
    /// `U diag(sigma) V^H`; `None` when vectors were not requested.
    pub fn reconstruct(&self) -> Option<ComplexMatrix> {
        let u = self.left_vectors.as_ref()?;
        let v = self.right_vectors.as_ref()?;
        let k = self.singular_values.len();
        Some(ComplexMatrix::from_fn(u.rows(), v.rows(), |i, j| {
            let mut acc = ZERO;
            for l in 0..k {
                acc += u[(i, l)] * self.singular_values[l] * v[(j, l)].conj();
            }
            acc
        }))
    }

    /// Number of singular values above `rel_tol * sigma_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values
            .iter()
            .filter(|&&s| s > rel_tol * top && s > 0.0)
            .count()
    }

    pub fn sum(&self) -> f64 {
        self.singular_values.iter().sum()
    }
}

pub fn svd(a: &ComplexMatrix, want_vectors: bool) -> Result<SpectrumResult> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(SpectrumResult {
            singular_values: Vec::new(),
            left_vectors: want_vectors.then(|| ComplexMatrix::zeros(m, 0)),
            right_vectors: want_vectors.then(|| ComplexMatrix::zeros(n, 0)),
        });
    }
    if m >= n {
        tall_svd(a, want_vectors)
    } else {
        // a = (a^H)^H = (U S V^H)^H = V S U^H
        let t = tall_svd(&a.adjoint(), want_vectors)?;
        Ok(SpectrumResult {
            singular_values: t.singular_values,
            left_vectors: t.right_vectors,
            right_vectors: t.left_vectors,
        })
    }
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(a, false)?.singular_values)
}

/// Ky Fan / trace norm: sum of all singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(svd(a, false)?.sum())
}

fn tall_svd(a: &ComplexMatrix, want_vectors: bool) -> Result<SpectrumResult> {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<C64>> = if want_vectors {
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { C64::new(1.0, 0.0) } else { ZERO })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        let mut worst = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&w[p]);
                let beta = norm_sqr(&w[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = inner(&w[p], &w[q]);
                let rel = gamma.norm() / (alpha * beta).sqrt();
                if rel <= PAIR_TOL {
                    continue;
                }
                worst = worst.max(rel);
                if let Some((c, s, phase)) = jacobi_rotation(alpha, beta, gamma) {
                    rotated = true;
                    rotate_pair(&mut w, p, q, c, s, phase);
                    if want_vectors {
                        rotate_pair(&mut v, p, q, c, s, phase);
                    }
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: worst,
            });
        }
    }

    let norms: Vec<f64> = w.iter().map(|col| norm_sqr(col).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let singular_values: Vec<f64> = order.iter().map(|&i| norms[i]).collect();

    if !want_vectors {
        return Ok(SpectrumResult {
            singular_values,
            left_vectors: None,
            right_vectors: None,
        });
    }

    let top = singular_values[0];
    let floor = top * 1e-13;
    let mut u_cols: Vec<Option<Vec<C64>>> = order
        .iter()
        .map(|&j| {
            let s = norms[j];
            (s > floor && s > 0.0).then(|| w[j].iter().map(|z| z / s).collect())
        })
        .collect();
    complete_orthonormal(&mut u_cols, m);

    let u = ComplexMatrix::from_fn(m, n, |i, k| u_cols[k].as_ref().unwrap()[i]);
    let vm = ComplexMatrix::from_fn(n, n, |i, k| v[order[k]][i]);
    Ok(SpectrumResult {
        singular_values,
        left_vectors: Some(u),
        right_vectors: Some(vm),
    })
}

/// Fills the `None` slots with unit vectors orthogonal to every other column,
/// drawn from the standard basis by two-pass Gram-Schmidt.
fn complete_orthonormal(cols: &mut [Option<Vec<C64>>], dim: usize) {
    let mut candidate = 0;
    for k in 0..cols.len() {
        if cols[k].is_some() {
            continue;
        }
        while candidate < dim {
            let mut e = vec![ZERO; dim];
            e[candidate] = C64::new(1.0, 0.0);
            candidate += 1;
            for _ in 0..2 {
                for other in cols.iter().flatten() {
                    let proj = inner(other, &e);
                    for (x, &o) in e.iter_mut().zip(other) {
                        *x -= o * proj;
                    }
                }
            }
            let len = norm_sqr(&e).sqrt();
            if len > 1e-6 {
                e.iter_mut().for_each(|x| *x /= len);
                cols[k] = Some(e);
                break;
            }
        }
    }
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let sp = phase * s;
    let sm = phase.conj() * s;
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = xp * c - xq * sm;
        *y = xp * sp + xq * c;
    }
}

fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// `x^H y`
fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigen;

    fn sample(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed ^ 0x9e37_79b9_7f4a_7c15;
        let mut next = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn identity_spectrum() {
        let s = svd(&ComplexMatrix::identity(5), true).unwrap();
        assert!(s.singular_values.iter().all(|&x| (x - 1.0).abs() < 1e-15));
        assert!((trace_norm(&ComplexMatrix::identity(5)).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn empty_matrix() {
        let s = svd(&ComplexMatrix::zeros(0, 3), true).unwrap();
        assert!(s.singular_values.is_empty());
        assert_eq!(trace_norm(&ComplexMatrix::zeros(0, 0)).unwrap(), 0.0);
    }

    #[test]
    fn rank_one_outer_product() {
        let mut x = sample(3, 3, 1);
        let mut y = sample(2, 2, 2);
        x = x.scale_real(1.0 / x.frobenius_norm());
        y = y.scale_real(1.0 / y.frobenius_norm());
        let z = &x.vec() * &y.vec().transpose();
        let s = svd(&z, false).unwrap();
        assert!((s.singular_values[0] - 1.0).abs() < 1e-14);
        assert!(s.singular_values[1..].iter().all(|&v| v < 1e-15));
    }

    #[test]
    fn frobenius_identity() {
        let a = sample(9, 9, 3);
        let s = svd(&a, false).unwrap();
        let sq: f64 = s.singular_values.iter().map(|x| x * x).sum();
        assert!((sq - a.frobenius_norm().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn reconstruction_tall_wide_and_deficient() {
        for (m, n) in [(7, 4), (4, 7), (6, 6)] {
            let a = sample(m, n, (m * 31 + n) as u64);
            let s = svd(&a, true).unwrap();
            let err = (&s.reconstruct().unwrap() - &a).frobenius_norm();
            assert!(err <= 1e-12 * a.frobenius_norm().max(1.0), "{m}x{n}: {err}");
            let u = s.left_vectors.unwrap();
            let utu = &u.adjoint() * &u;
            assert!((&utu - &ComplexMatrix::identity(m.min(n))).max_abs() < 1e-12);
        }
        // rank 2 in a 5x4
        let a = &sample(5, 2, 9) * &sample(2, 4, 10);
        let s = svd(&a, true).unwrap();
        assert_eq!(s.rank(1e-10), 2);
        assert!((&s.reconstruct().unwrap() - &a).frobenius_norm() < 1e-12);
        let u = s.left_vectors.unwrap();
        assert!((&(&u.adjoint() * &u) - &ComplexMatrix::identity(4)).max_abs() < 1e-12);
    }

    #[test]
    fn agrees_with_gram_eigenvalues() {
        let a = sample(8, 5, 77);
        let s = singular_values(&a).unwrap();
        let e = hermitian_eigen(&(&a.adjoint() * &a)).unwrap();
        for (sv, l) in s.iter().zip(&e.values) {
            assert!((sv - l.max(0.0).sqrt()).abs() < 1e-9);
        }
    }
}

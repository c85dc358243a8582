use super::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Hermitian input tolerance, `max |a - a^H|`.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Stop once the off-diagonal Frobenius norm drops below this fraction of `||a||_F`.
const OFF_DIAGONAL_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Real eigenvalues, descending.
    pub values: Vec<f64>,
    /// Unitary matrix whose column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

/// Cyclic two-sided complex Jacobi eigensolver.
///
/// Pairs are visited in fixed row-cyclic order, so identical inputs give
/// bit-identical outputs.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "eigen-decomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let deviation = a.hermitian_deviation().unwrap_or(0.0);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = a.rows();

    // Symmetrise so the rotations see an exactly Hermitian matrix.
    let mut w = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(a[(i, i)].re, 0.0)
        } else {
            (a[(i, j)] + a[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let scale = w.frobenius_norm();
    let target = OFF_DIAGONAL_TOL * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&w);
        if off <= target || scale == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(w: &ComplexMatrix) -> f64 {
    let n = w.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += w[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Jacobi rotation parameters `(c, s, e^{i phi})` annihilating the
/// off-diagonal entry `g` of the 2x2 Hermitian block `[[alpha, g], [g*, beta]]`.
///
/// The rotation is `J = [[c, s e^{i phi}], [-s e^{-i phi}, c]]` with
/// `J^H B J` diagonal.
pub(super) fn jacobi_rotation(alpha: f64, beta: f64, g: C64) -> Option<(f64, f64, C64)> {
    let g_abs = g.norm();
    if g_abs == 0.0 {
        return None;
    }
    let phase = g / g_abs;
    let zeta = (beta - alpha) / (2.0 * g_abs);
    let t = if zeta == 0.0 {
        1.0
    } else {
        zeta.signum() / (zeta.abs() + zeta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    Some((c, c * t, phase))
}

fn rotate(w: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = w[(p, q)];
    let Some((c, s, phase)) = jacobi_rotation(w[(p, p)].re, w[(q, q)].re, g) else {
        return;
    };
    let n = w.rows();
    let sp = phase * s; // s e^{i phi}
    let sm = phase.conj() * s; // s e^{-i phi}

    // columns: W <- W J
    for k in 0..n {
        let wp = w[(k, p)];
        let wq = w[(k, q)];
        w[(k, p)] = wp * c - wq * sm;
        w[(k, q)] = wp * sp + wq * c;
    }
    // rows: W <- J^H W
    for k in 0..n {
        let wp = w[(p, k)];
        let wq = w[(q, k)];
        w[(p, k)] = wp * c - wq * sp;
        w[(q, k)] = wp * sm + wq * c;
    }
    w[(p, q)] = ZERO;
    w[(q, p)] = ZERO;
    w[(p, p)] = C64::new(w[(p, p)].re, 0.0);
    w[(q, q)] = C64::new(w[(q, q)].re, 0.0);

    for k in 0..n {
        let vp = v[(k, p)];
        let vq = v[(k, q)];
        v[(k, p)] = vp * c - vq * sm;
        v[(k, q)] = vp * sp + vq * c;
    }
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues down to `-1e-10` are accepted; anything at round-off level
/// relative to the largest eigenvalue is set to zero before the root so that
/// null directions stay null.
pub(crate) fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(a)?;
    let n = a.rows();
    let top = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let floor = 64.0 * f64::EPSILON * top;
    let mut roots = Vec::with_capacity(n);
    for &l in &eig.values {
        if l < -1e-10 {
            return Err(Error::NotPositive { min_eigenvalue: l });
        }
        roots.push(if l <= floor { 0.0 } else { l.sqrt() });
    }
    let u = &eig.vectors;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = ZERO;
        for k in 0..n {
            acc += u[(i, k)] * roots[k] * u[(j, k)].conj();
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed;
        let mut next = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let g = ComplexMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
        &g + &g.adjoint()
    }

    fn residual(a: &ComplexMatrix, e: &HermitianEigen) -> f64 {
        let av = a * &e.vectors;
        let n = a.rows();
        let mut worst = 0.0f64;
        for k in 0..n {
            for i in 0..n {
                worst = worst.max((av[(i, k)] - e.vectors[(i, k)] * e.values[k]).norm());
            }
        }
        worst
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let e = hermitian_eigen(&ComplexMatrix::diag_real(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = hermitian_eigen(&x).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!((e.values[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_complex_entries() {
        let y = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => ZERO,
        });
        let e = hermitian_eigen(&y).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!(residual(&y, &e) < 1e-14);
    }

    #[test]
    fn trace_identity_and_residual() {
        let a = random_hermitian(9, 42);
        let e = hermitian_eigen(&a).unwrap();
        let sum: f64 = e.values.iter().sum();
        assert!((sum - a.trace().re).abs() < 1e-10);
        assert!(residual(&a, &e) <= 1e-10 * a.frobenius_norm().max(1.0));
        let vhv = &e.vectors.adjoint() * &e.vectors;
        assert!((&vhv - &ComplexMatrix::identity(9)).max_abs() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            hermitian_eigen(&a),
            Err(Error::NotHermitian { .. })
        ));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigen(&r), Err(Error::Shape(_))));
    }

    #[test]
    fn zero_and_empty_matrices() {
        let e = hermitian_eigen(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
        let e = hermitian_eigen(&ComplexMatrix::zeros(0, 0)).unwrap();
        assert!(e.values.is_empty());
    }

    #[test]
    fn deterministic() {
        let a = random_hermitian(12, 3);
        let e1 = hermitian_eigen(&a).unwrap();
        let e2 = hermitian_eigen(&a).unwrap();
        assert_eq!(e1.values, e2.values);
        assert_eq!(e1.vectors, e2.vectors);
    }

    #[test]
    fn sqrt_squares_back() {
        let g = random_hermitian(5, 9);
        let psd = &g * &g.adjoint();
        let r = psd_sqrt(&psd).unwrap();
        assert!((&(&r * &r) - &psd).max_abs() < 1e-12);
    }
}

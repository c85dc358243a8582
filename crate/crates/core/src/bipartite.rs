//! Bipartite density matrices and their structural transforms.
//!
//! Basis convention: `|i>_A (x) |k>_B` maps to row `i * n + k`, so an
//! `(mn) x (mn)` state is an `m x m` block matrix with `n x n` blocks
//! `Z_{i,j}`. Realignment, partial transposition and the subsystem swap are
//! all defined on that block structure.

use crate::error::{Error, Result};
use crate::linalg::{self, elementary, ComplexMatrix, C64};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
/// Largest trace error that opt-in normalisation will correct.
pub const NORMALIZE_WINDOW: f64 = 1e-6;
/// Relative singular-value cutoff for the Kronecker decomposition.
pub const KRON_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Rescale a trace within [`NORMALIZE_WINDOW`] of 1 instead of rejecting it.
    pub normalize_trace: bool,
}

/// A density matrix on `C^m (x) C^n` that passed validation.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
    normalized: bool,
}

impl BipartiteState {
    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Whether validation rescaled the trace.
    pub fn was_normalized(&self) -> bool {
        self.normalized
    }

    /// `tr(rho^2)`
    pub fn purity(&self) -> f64 {
        // rho is Hermitian, so tr(rho^2) = sum |rho_ij|^2
        self.matrix.frobenius_norm().powi(2)
    }
}

pub fn validate(matrix: ComplexMatrix, m: usize, n: usize) -> Result<BipartiteState> {
    validate_with(matrix, m, n, ValidateOptions::default())
}

pub fn validate_with(
    matrix: ComplexMatrix,
    m: usize,
    n: usize,
    opts: ValidateOptions,
) -> Result<BipartiteState> {
    if m == 0 || n == 0 {
        return Err(Error::Shape(format!(
            "subsystem dimensions must be positive, got ({m}, {n})"
        )));
    }
    let d = m * n;
    if matrix.shape() != (d, d) {
        return Err(Error::Shape(format!(
            "a {m}x{n} bipartite state needs a {d}x{d} matrix, got {}x{}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    for i in 0..d {
        for j in 0..d {
            let z = matrix[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    let deviation = matrix.hermitian_deviation().unwrap_or(0.0);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let tr = matrix.trace();
    let mut matrix = matrix;
    let mut normalized = false;
    if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
        let close = (tr.re - 1.0).abs() <= NORMALIZE_WINDOW && tr.im.abs() <= TRACE_TOL;
        if opts.normalize_trace && close {
            matrix = matrix.scale_real(1.0 / tr.re);
            normalized = true;
        } else {
            return Err(Error::Trace { trace: tr.re });
        }
    }
    let eig = linalg::hermitian_eigen(&matrix)?;
    let min_eigenvalue = eig.values.last().copied().unwrap_or(0.0);
    if min_eigenvalue < -PSD_TOL {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(BipartiteState {
        dim_a: m,
        dim_b: n,
        matrix,
        normalized,
    })
}

fn check_block_shape(z: &ComplexMatrix, m: usize, n: usize) -> Result<()> {
    if z.shape() != (m * n, m * n) {
        return Err(Error::Shape(format!(
            "expected a {0}x{0} matrix for block structure ({m}, {n}), got {1}x{2}",
            m * n,
            z.rows(),
            z.cols()
        )));
    }
    Ok(())
}

/// Realigned `m^2 x n^2` matrix of an `m x m` block matrix with `n x n` blocks.
///
/// Row `j * m + i` holds `vec(Z_{i,j})^T`: block columns are walked in order
/// and, inside each, block rows top to bottom.
pub fn realign_matrix(z: &ComplexMatrix, m: usize, n: usize) -> Result<ComplexMatrix> {
    check_block_shape(z, m, n)?;
    let mut out = ComplexMatrix::zeros(m * m, n * n);
    for bj in 0..m {
        for bi in 0..m {
            let row = bj * m + bi;
            for c in 0..n {
                for r in 0..n {
                    out[(row, c * n + r)] = z[(bi * n + r, bj * n + c)];
                }
            }
        }
    }
    Ok(out)
}

pub fn realign(s: &BipartiteState) -> ComplexMatrix {
    realign_matrix(&s.matrix, s.dim_a, s.dim_b).expect("validated state has block shape")
}

pub fn partial_transpose_matrix(
    z: &ComplexMatrix,
    m: usize,
    n: usize,
    subsystem: Subsystem,
) -> Result<ComplexMatrix> {
    check_block_shape(z, m, n)?;
    let d = m * n;
    Ok(ComplexMatrix::from_fn(d, d, |row, col| {
        let (i, k) = (row / n, row % n);
        let (j, l) = (col / n, col % n);
        match subsystem {
            Subsystem::A => z[(j * n + k, i * n + l)],
            Subsystem::B => z[(i * n + l, j * n + k)],
        }
    }))
}

pub fn partial_transpose(s: &BipartiteState, subsystem: Subsystem) -> ComplexMatrix {
    partial_transpose_matrix(&s.matrix, s.dim_a, s.dim_b, subsystem)
        .expect("validated state has block shape")
}

/// `S(m, n) = sum_ij E_ij^(m,n) (x) (E_ij^(m,n))^T`, an `mn x mn` permutation.
pub fn swap_operator(m: usize, n: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(m * n, m * n);
    for i in 1..=m {
        for j in 1..=n {
            let e = elementary(m, n, i, j).expect("indices in range");
            s = &s + &e.kron(&e.transpose());
        }
    }
    s
}

/// `rho_BA = S(n, m) rho_AB S(m, n)`.
pub fn swap_subsystems(s: &BipartiteState) -> BipartiteState {
    let (m, n) = s.dims();
    let swapped = &(&swap_operator(n, m) * &s.matrix) * &swap_operator(m, n);
    BipartiteState {
        dim_a: n,
        dim_b: m,
        matrix: swapped,
        normalized: s.normalized,
    }
}

pub fn partial_trace(s: &BipartiteState, keep: Subsystem) -> ComplexMatrix {
    let (m, n) = s.dims();
    let z = &s.matrix;
    match keep {
        Subsystem::A => {
            ComplexMatrix::from_fn(m, m, |i, j| (0..n).map(|k| z[(i * n + k, j * n + k)]).sum())
        }
        Subsystem::B => {
            ComplexMatrix::from_fn(n, n, |k, l| (0..m).map(|i| z[(i * n + k, i * n + l)]).sum())
        }
    }
}

#[derive(Debug, Clone)]
pub struct KronFactor {
    pub sigma: f64,
    /// `m x m`, `vec(a) = sqrt(sigma) u`.
    pub a: ComplexMatrix,
    /// `n x n`, `vec(b) = sqrt(sigma) conj(v)`.
    pub b: ComplexMatrix,
}

/// `rho = sum_i a_i (x) b_i`, ordered by decreasing singular value.
#[derive(Debug, Clone)]
pub struct KronDecomposition {
    pub dim_a: usize,
    pub dim_b: usize,
    pub factors: Vec<KronFactor>,
}

impl KronDecomposition {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.dim_a * self.dim_b;
        self.factors
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, f| &acc + &f.a.kron(&f.b))
    }
}

pub fn kron_decompose(s: &BipartiteState) -> Result<KronDecomposition> {
    let (m, n) = s.dims();
    let spec = linalg::svd(&realign(s), true)?;
    let u = spec.left_vectors.as_ref().expect("vectors requested");
    let v = spec.right_vectors.as_ref().expect("vectors requested");
    let top = spec.singular_values.first().copied().unwrap_or(0.0);
    let mut factors = Vec::new();
    for (k, &sigma) in spec.singular_values.iter().enumerate() {
        if sigma <= KRON_RANK_TOL * top || sigma == 0.0 {
            break;
        }
        let root = sigma.sqrt();
        let uk: Vec<C64> = u.col(k).into_iter().map(|z| z * root).collect();
        let vk: Vec<C64> = v.col(k).into_iter().map(|z| z.conj() * root).collect();
        factors.push(KronFactor {
            sigma,
            a: ComplexMatrix::unvec(&uk, m, m)?,
            b: ComplexMatrix::unvec(&vk, n, n)?,
        });
    }
    Ok(KronDecomposition {
        dim_a: m,
        dim_b: n,
        factors,
    })
}

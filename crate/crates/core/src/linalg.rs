//! Dense row-major matrices and the handful of kernels the solvers need.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_len, OscarError, Result};

/// Seed of the power-iteration start vector, fixed so Lipschitz estimates are reproducible.
pub const POWER_ITERATION_SEED: u64 = 0x05ca_5eed;

/// Row-major `rows x cols` matrix of finite doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        if data.iter().any(|x| !x.is_finite()) {
            return Err(OscarError::InvalidParameter(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_len(cols, r.len())?;
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in d.iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// `A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.cols, x.len())?;
        let mut out = vec![0.0; self.rows];
        self.matvec_into(x, &mut out);
        Ok(out)
    }

    /// `A^T r`.
    pub fn matvec_t(&self, r: &[f64]) -> Result<Vec<f64>> {
        check_len(self.rows, r.len())?;
        let mut out = vec![0.0; self.cols];
        self.matvec_t_into(r, &mut out);
        Ok(out)
    }

    pub(crate) fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols.max(1))) {
            *o = dot(row, x);
        }
    }

    pub(crate) fn matvec_t_into(&self, r: &[f64], out: &mut [f64]) {
        debug_assert_eq!(r.len(), self.rows);
        out.fill(0.0);
        if self.cols == 0 {
            return;
        }
        for (&ri, row) in r.iter().zip(self.data.chunks_exact(self.cols)) {
            if ri != 0.0 {
                axpy(ri, row, out);
            }
        }
    }

    /// Frobenius-free check used by callers that want to skip work on an all-zero matrix.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators let the compiler vectorize; the summation order is fixed
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for k in 0..chunks {
        let i = 4 * k;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut tail = 0.0;
    for i in 4 * chunks..a.len() {
        tail += a[i] * b[i];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Estimates `||A||_2^2`, the largest eigenvalue of `A^T A`, by power iteration from a
/// seeded random start. Iterates until the Rayleigh quotient changes by at most `tol`
/// relative, or `max_iter` products. Returns 0 for a zero matrix.
///
/// The result is a lower bound in exact arithmetic; callers that need an upper bound
/// (a Lipschitz constant) should inflate it, see [`LIPSCHITZ_SAFETY`].
pub fn spectral_norm_sq(a: &DenseMatrix, tol: f64, max_iter: usize) -> f64 {
    spectral_norm_sq_seeded(a, tol, max_iter, POWER_ITERATION_SEED)
}

pub const LIPSCHITZ_SAFETY: f64 = 1.02;

pub fn spectral_norm_sq_seeded(a: &DenseMatrix, tol: f64, max_iter: usize, seed: u64) -> f64 {
    let n = a.cols();
    if n == 0 || a.rows() == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let nx = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);

    let mut ax = vec![0.0; a.rows()];
    let mut atax = vec![0.0; n];
    let mut estimate = 0.0f64;
    for _ in 0..max_iter.max(1) {
        a.matvec_into(&x, &mut ax);
        let rayleigh = dot(&ax, &ax);
        a.matvec_t_into(&ax, &mut atax);
        let norm = norm2(&atax);
        if norm == 0.0 {
            return estimate.max(rayleigh);
        }
        let converged = (rayleigh - estimate).abs() <= tol * rayleigh;
        estimate = rayleigh;
        if converged {
            break;
        }
        for (xi, zi) in x.iter_mut().zip(&atax) {
            *xi = zi / norm;
        }
    }
    estimate
}

/// Solves `(A^T A + mu I) x = rhs` for a fixed matrix and `mu > 0`.
///
/// When `A` has fewer rows than columns the `m x m` matrix `A A^T + mu I` is factored
/// instead and the solve goes through
/// `(A^T A + mu I)^{-1} = (I - A^T (A A^T + mu I)^{-1} A) / mu`.
#[derive(Debug, Clone)]
pub struct GramSolver {
    a: DenseMatrix,
    mu: f64,
    dual: bool,
    chol: Cholesky,
}

impl GramSolver {
    pub fn new(a: &DenseMatrix, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(OscarError::InvalidParameter(format!(
                "mu must be positive and finite, got {mu}"
            )));
        }
        let dual = a.rows() < a.cols();
        let gram = if dual { outer_gram(a) } else { inner_gram(a) };
        let chol = Cholesky::factor(gram, if dual { a.rows() } else { a.cols() }, mu)?;
        Ok(Self {
            a: a.clone(),
            mu,
            dual,
            chol,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        check_len(self.a.cols(), rhs.len())?;
        if !self.dual {
            return Ok(self.chol.solve(rhs.to_vec()));
        }
        let ar = self.a.matvec(rhs)?;
        let inner = self.chol.solve(ar);
        let correction = self.a.matvec_t(&inner)?;
        Ok(rhs
            .iter()
            .zip(&correction)
            .map(|(r, c)| (r - c) / self.mu)
            .collect())
    }

    /// `(A^T A + mu I) x`, the operator this solver inverts.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let ax = self.a.matvec(x)?;
        let mut out = self.a.matvec_t(&ax)?;
        axpy(self.mu, x, &mut out);
        Ok(out)
    }
}

/// Standalone entry point matching [`GramSolver::solve`].
pub fn gram_solve(solver: &GramSolver, rhs: &[f64]) -> Result<Vec<f64>> {
    solver.solve(rhs)
}

// A A^T, m x m
fn outer_gram(a: &DenseMatrix) -> Vec<f64> {
    let m = a.rows();
    let mut g = vec![0.0; m * m];
    for i in 0..m {
        let ri = a.row(i);
        for j in 0..=i {
            let v = dot(ri, a.row(j));
            g[i * m + j] = v;
            g[j * m + i] = v;
        }
    }
    g
}

// A^T A, n x n, accumulated row by row
fn inner_gram(a: &DenseMatrix) -> Vec<f64> {
    let n = a.cols();
    let mut g = vec![0.0; n * n];
    for r in 0..a.rows() {
        let row = a.row(r);
        for i in 0..n {
            if row[i] != 0.0 {
                axpy(row[i], &row[..=i], &mut g[i * n..i * n + i + 1]);
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            g[j * n + i] = g[i * n + j];
        }
    }
    g
}

/// Lower-triangular Cholesky factor of `G + shift * I`, row-major.
#[derive(Debug, Clone)]
struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    fn factor(mut g: Vec<f64>, n: usize, shift: f64) -> Result<Self> {
        for i in 0..n {
            g[i * n + i] += shift;
        }
        for j in 0..n {
            let row_j = g[j * n..j * n + j].to_vec();
            let d = g[j * n + j] - dot(&row_j, &row_j);
            if d <= 0.0 || !d.is_finite() {
                return Err(OscarError::InvalidParameter(
                    "Gram matrix is not positive definite".into(),
                ));
            }
            let ljj = d.sqrt();
            g[j * n + j] = ljj;
            for i in (j + 1)..n {
                let s = g[i * n + j] - dot(&g[i * n..i * n + j], &row_j);
                g[i * n + j] = s / ljj;
            }
        }
        // clear the strict upper triangle so only L remains
        for i in 0..n {
            g[i * n + i + 1..(i + 1) * n].fill(0.0);
        }
        Ok(Self { n, l: g })
    }

    fn solve(&self, mut b: Vec<f64>) -> Vec<f64> {
        let n = self.n;
        // L z = b
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            b[i] = (b[i] - dot(row, &b[..i])) / self.l[i * n + i];
        }
        // L^T x = z
        for i in (0..n).rev() {
            b[i] /= self.l[i * n + i];
            let bi = b[i];
            let row = &self.l[i * n..i * n + i];
            for (bk, lk) in b[..i].iter_mut().zip(row) {
                *bk -= lk * bi;
            }
        }
        b
    }
}

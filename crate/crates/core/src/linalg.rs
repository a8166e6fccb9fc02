//! Complex matrices and largest-eigenvalue solvers for sample covariances.
//!
//! The detector only ever needs the top eigenvalue of `(1/n) X Xᴴ`. The
//! production path is a Lanczos iteration driven by the implicit product
//! `v ↦ (1/n) X (Xᴴ v)`, so the `N×N` covariance is never formed. A dense
//! Householder + QL solver is kept for small matrices as an independent
//! oracle, and [`tridiagonal_max_eigenvalue`] serves the bidiagonal
//! reduced-form simulation engine.

use num_complex::Complex64;
use thiserror::Error;

use crate::rng::{sample_complex_gaussian, RngStream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix dimensions must be positive (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("matrix holds a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (deviation {deviation:e} at ({row}, {col}))")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("eigen-solver did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("invalid solver option: {0}")]
    InvalidOption(String),
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyMatrix { rows, cols });
        }
        Ok(Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Build from row-major entries, validating shape and finiteness.
    pub fn from_row_major(
        rows: usize,
        cols: usize,
        data: Vec<Complex64>,
    ) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(LinalgError::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_row_major(rows, cols, data)
    }

    /// `rows×cols` matrix of i.i.d. CN(0, variance) entries.
    pub fn random_gaussian(
        rows: usize,
        cols: usize,
        variance: f64,
        stream: RngStream,
    ) -> Result<Self, LinalgError> {
        let mut rng = stream.rng();
        let data = sample_complex_gaussian(rows * cols, variance, &mut rng);
        Self::from_row_major(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * a).collect(),
        }
    }

    /// Columns reordered so that column `j` of the result is column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self, LinalgError> {
        if perm.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "permutation of length {} for {} columns",
                perm.len(),
                self.cols
            )));
        }
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, perm[j])])
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot_unconj(self.row(i), x)).collect())
    }

    /// `y = Aᴴ x`.
    pub fn adjoint_mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if x.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "adjoint of {}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut y = vec![Complex64::new(0.0, 0.0); self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (yj, aij) in y.iter_mut().zip(self.row(i)) {
                *yj += aij.conj() * xi;
            }
        }
        Ok(y)
    }

    /// Dense `(1/n) X Xᴴ`; only for small matrices and tests.
    pub fn sample_covariance(&self) -> Self {
        let n = self.cols as f64;
        let mut c = Self {
            rows: self.rows,
            cols: self.rows,
            data: vec![Complex64::new(0.0, 0.0); self.rows * self.rows],
        };
        for i in 0..self.rows {
            for j in i..self.rows {
                let v: Complex64 = self
                    .row(i)
                    .iter()
                    .zip(self.row(j))
                    .map(|(a, b)| a * b.conj())
                    .sum::<Complex64>()
                    / n;
                c[(i, j)] = v;
                c[(j, i)] = v.conj();
            }
        }
        c
    }

    /// Hermitian check with an absolute tolerance scaled by the largest entry.
    pub fn check_hermitian(&self, rel_tol: f64) -> Result<(), LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                self.rows, self.cols
            )));
        }
        let scale = self
            .data
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        for i in 0..self.rows {
            for j in i..self.cols {
                let dev = (self[(i, j)] - self[(j, i)].conj()).norm();
                if dev > rel_tol * scale {
                    return Err(LinalgError::NotHermitian {
                        row: i,
                        col: j,
                        deviation: dev,
                    });
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
fn dot_unconj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `aᴴ b`.
#[inline]
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[inline]
pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Stopping rule for [`largest_eigenvalue`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Relative accuracy of the returned eigenvalue.
    pub tol: f64,
    /// Maximum number of operator applications.
    pub max_iterations: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 10_000,
        }
    }
}

/// Diagnostics of one Lanczos solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenEstimate {
    pub value: f64,
    pub iterations: usize,
    /// Bound on `|λ − value|` from the Ritz residual.
    pub residual: f64,
}

/// Largest eigenvalue of `(1/n) X Xᴴ` for an `N×n` matrix `X` with `N ≤ n`.
pub fn largest_eigenvalue(
    samples: &ComplexMatrix,
    opts: &EigenOptions,
) -> Result<f64, LinalgError> {
    largest_eigenvalue_detailed(samples, opts).map(|e| e.value)
}

/// Lanczos with full reorthogonalization.
///
/// The top Ritz value θ of the Krylov tridiagonal carries the computable
/// residual `β_k |s_k|`, where `s_k` is the last component of its Ritz
/// vector, and some eigenvalue lies within that residual of θ. Iteration
/// stops once the residual falls below `tol·θ`, when the Krylov space
/// becomes invariant, or when it spans the whole space.
pub fn largest_eigenvalue_detailed(
    samples: &ComplexMatrix,
    opts: &EigenOptions,
) -> Result<EigenEstimate, LinalgError> {
    if !(opts.tol > 0.0) {
        return Err(LinalgError::InvalidOption(format!(
            "tol must be > 0, got {}",
            opts.tol
        )));
    }
    if opts.max_iterations == 0 {
        return Err(LinalgError::InvalidOption(
            "max_iterations must be ≥ 1".into(),
        ));
    }
    let big_n = samples.rows();
    let n = samples.cols();
    if big_n > n {
        return Err(LinalgError::DimensionMismatch(format!(
            "need N ≤ n, got N={big_n}, n={n}"
        )));
    }
    let inv_n = 1.0 / n as f64;
    let apply = |v: &[Complex64]| -> Vec<Complex64> {
        let t = samples.adjoint_mul_vec(v).expect("shape checked");
        let mut y = samples.mul_vec(&t).expect("shape checked");
        for z in y.iter_mut() {
            *z *= inv_n;
        }
        y
    };

    // Fixed pseudo-random start: structured starts (all ones, e₁) can be
    // orthogonal to the dominant eigenvector of structured test matrices.
    let mut start = sample_complex_gaussian(big_n, 1.0, &mut RngStream::new(0x1A2C_3E4F, 0).rng());
    let s0 = norm_sqr(&start).sqrt();
    start.iter_mut().for_each(|z| *z /= s0);

    let mut basis: Vec<Vec<Complex64>> = vec![start];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut theta = 0.0;

    for iter in 1..=opts.max_iterations {
        let j = basis.len() - 1;
        let mut w = apply(&basis[j]);
        let a = inner(&basis[j], &w).re;
        alpha.push(a);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for q in &basis {
                let h = inner(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= h * qi;
                }
            }
        }
        let b = norm_sqr(&w).sqrt();
        let (top, last) = top_ritz_pair(&alpha, &beta)?;
        theta = top;
        let residual = b * last.abs();
        let scale = alpha
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let exhausted = basis.len() == big_n || b <= 1e-14 * scale;
        if exhausted || residual <= opts.tol * theta.abs() {
            return Ok(EigenEstimate {
                value: theta,
                iterations: iter,
                residual: if exhausted { 0.0 } else { residual },
            });
        }
        beta.push(b);
        w.iter_mut().for_each(|z| *z /= b);
        basis.push(w);
    }
    let _ = theta;
    Err(LinalgError::NonConvergence {
        iterations: opts.max_iterations,
    })
}

/// Largest eigenvalue of the tridiagonal `(alpha, beta)` together with the
/// last component of its normalized eigenvector.
fn top_ritz_pair(alpha: &[f64], beta: &[f64]) -> Result<(f64, f64), LinalgError> {
    let k = alpha.len();
    let mut d = alpha.to_vec();
    let mut e = vec![0.0; k];
    e[..k - 1].copy_from_slice(&beta[..k - 1]);
    let mut row = vec![0.0; k];
    row[k - 1] = 1.0;
    tql_with_row(&mut d, &mut e, &mut row)?;
    let (idx, &val) = d
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    Ok((val, row[idx]))
}

/// Implicit-shift QL on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal and is overwritten by the eigenvalues; `e[i]`
/// couples `i` and `i+1` (last entry ignored). `row` starts as one row of
/// the identity and ends as the same row of the eigenvector matrix, which
/// keeps the cost quadratic.
fn tql_with_row(d: &mut [f64], e: &mut [f64], row: &mut [f64]) -> Result<(), LinalgError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let mut total = 0usize;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            total += 1;
            if iter > 60 {
                return Err(LinalgError::NonConvergence { iterations: total });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = row[i + 1];
                row[i + 1] = s * row[i] + c * zf;
                row[i] = c * row[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "tridiagonal with {} diagonal and {} off-diagonal entries",
            n,
            off.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut row = vec![0.0; n];
    tql_with_row(&mut d, &mut e, &mut row)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Full spectrum of a Hermitian matrix, ascending.
///
/// Householder reflections reduce the matrix to Hermitian tridiagonal form
/// with real off-diagonal magnitudes, then QL finishes the job. Intended as
/// an oracle for `N ≤ 64`.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    a.check_hermitian(1e-12)?;
    let n = a.rows();
    let mut m = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| m[(i, k)]).collect();
        let xnorm = norm_sqr(&x).sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for (t, xi) in x.iter().enumerate() {
            v[k + 1 + t] = *xi;
        }
        v[k + 1] -= alpha;
        let vn = norm_sqr(&v).sqrt();
        if vn == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vn);
        // A ← A − 2(v wᴴ + w vᴴ) with p = A v, K = vᴴ p, w = p − K v.
        let p = m.mul_vec(&v)?;
        let kk = inner(&v, &p);
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk * vi).collect();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= 2.0 * (v[i] * w[j].conj() + w[i] * v[j].conj());
            }
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let off: Vec<f64> = (0..n.saturating_sub(1))
        .map(|i| m[(i + 1, i)].norm())
        .collect();
    tridiagonal_eigenvalues(&diag, &off)
}

/// Number of eigenvalues of the tridiagonal strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
pub fn tridiagonal_max_eigenvalue(diag: &[f64], off: &[f64], rel_tol: f64) -> f64 {
    let n = diag.len();
    assert!(n > 0 && off.len() + 1 == n, "malformed tridiagonal");
    let radius = |i: usize| {
        let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let r = if i + 1 < n { off[i].abs() } else { 0.0 };
        l + r
    };
    let mut lo = (0..n)
        .map(|i| diag[i] - radius(i))
        .fold(f64::INFINITY, f64::min);
    let mut hi = (0..n)
        .map(|i| diag[i] + radius(i))
        .fold(f64::NEG_INFINITY, f64::max);
    // Raise the lower end to the largest diagonal entry: λ_max ≥ max d_i.
    lo = lo.max(diag.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    for _ in 0..200 {
        if hi - lo <= rel_tol * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if sturm_count(diag, off, mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn scaled_identity_has_unit_covariance() {
        let n = 16;
        let x = ComplexMatrix::identity(n)
            .unwrap()
            .scaled(c((n as f64).sqrt()));
        let l = largest_eigenvalue(&x, &EigenOptions::default()).unwrap();
        assert!((l - 1.0).abs() < 1e-12, "{l}");
    }

    #[test]
    fn noiseless_rank_one_block() {
        // h with ‖h‖² = 2 and unit-modulus symbols give λ_max = 2 exactly.
        let h = [c(1.0), Complex64::new(0.0, 1.0), c(0.0)];
        let n = 12;
        let x = ComplexMatrix::from_fn(3, n, |i, k| {
            h[i] * Complex64::from_polar(1.0, 0.7 * k as f64)
        })
        .unwrap();
        let l = largest_eigenvalue(&x, &EigenOptions::default()).unwrap();
        assert!((l - 2.0).abs() < 1e-10, "{l}");
    }

    #[test]
    fn lanczos_matches_dense_oracle() {
        for seed in 0..5 {
            let x = ComplexMatrix::random_gaussian(8, 32, 1.0, RngStream::new(seed, 1)).unwrap();
            let l = largest_eigenvalue(&x, &EigenOptions::default()).unwrap();
            let spec = hermitian_eigenvalues(&x.sample_covariance()).unwrap();
            let top = *spec.last().unwrap();
            assert!(((l - top) / top).abs() < 1e-10, "{l} vs {top}");
        }
    }

    #[test]
    fn dense_oracle_on_known_spectrum() {
        // Unitary similarity of diag(1, 2, 3, 4) keeps the spectrum.
        let v = [
            c(0.5),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
        ];
        let mut a = ComplexMatrix::zeros(4, 4).unwrap();
        for i in 0..4 {
            a[(i, i)] = c(i as f64 + 1.0);
        }
        // Householder H = I − 2vvᴴ with ‖v‖ = 1.
        let h = ComplexMatrix::from_fn(4, 4, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            c(id) - 2.0 * v[i] * v[j].conj()
        })
        .unwrap();
        let ha = ComplexMatrix::from_fn(4, 4, |i, j| (0..4).map(|k| h[(i, k)] * a[(k, j)]).sum())
            .unwrap();
        let hah = ComplexMatrix::from_fn(4, 4, |i, j| {
            (0..4).map(|k| ha[(i, k)] * h[(j, k)].conj()).sum()
        })
        .unwrap();
        let ev = hermitian_eigenvalues(&hah).unwrap();
        for (k, e) in ev.iter().enumerate() {
            assert!((e - (k as f64 + 1.0)).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn sturm_agrees_with_ql() {
        let d = [2.0, -1.0, 3.5, 0.25, 1.0];
        let e = [0.5, 1.5, -0.75, 2.0];
        let ql = tridiagonal_eigenvalues(&d, &e).unwrap();
        let top = tridiagonal_max_eigenvalue(&d, &e, 1e-15);
        assert!((top - ql[4]).abs() < 1e-12, "{top} vs {ql:?}");
    }

    #[test]
    fn shape_errors() {
        assert!(ComplexMatrix::zeros(0, 3).is_err());
        assert!(ComplexMatrix::from_row_major(2, 2, vec![c(1.0); 3]).is_err());
        assert!(ComplexMatrix::from_row_major(1, 1, vec![c(f64::NAN)]).is_err());
        let wide = ComplexMatrix::zeros(4, 2).unwrap();
        assert!(matches!(
            largest_eigenvalue(&wide, &EigenOptions::default()),
            Err(LinalgError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn iteration_cap_reports_count() {
        let x = ComplexMatrix::random_gaussian(20, 40, 1.0, RngStream::new(3, 3)).unwrap();
        let opts = EigenOptions {
            tol: 1e-14,
            max_iterations: 2,
        };
        assert_eq!(
            largest_eigenvalue(&x, &opts),
            Err(LinalgError::NonConvergence { iterations: 2 })
        );
    }

    #[test]
    fn non_hermitian_rejected() {
        let a = ComplexMatrix::from_row_major(2, 2, vec![c(1.0), c(2.0), c(0.0), c(1.0)]).unwrap();
        assert!(matches!(
            hermitian_eigenvalues(&a),
            Err(LinalgError::NotHermitian { .. })
        ));
    }
}

//! Small dense matrices and the factorizations the pipelines need:
//! Householder QR (with orthonormal complement), Cholesky, and a symmetric
//! eigensolver via Householder tridiagonalization and implicit-shift QL.

use crate::error::{Error, Result};
use crate::vecops::{axpy, dot, norm2};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Column count above which dense kernels switch to the parallel path.
#[cfg(feature = "parallel")]
const DENSE_PAR_MIN_COLS: usize = 64;

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            values: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_column_major(n_rows: usize, n_cols: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), n_rows * n_cols);
        Self {
            n_rows,
            n_cols,
            values,
        }
    }

    /// Builds from row slices (convenient for literals in tests).
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n_rows = rows.len();
        let n_cols = if n_rows == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(n_rows, n_cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i + j * self.n_rows]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i + j * self.n_rows] = v;
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.values[j * self.n_rows..(j + 1) * self.n_rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.values[j * self.n_rows..(j + 1) * self.n_rows]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn row_copy(&self, i: usize) -> Vec<f64> {
        (0..self.n_cols).map(|j| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.n_cols, self.n_rows);
        for j in 0..self.n_cols {
            for i in 0..self.n_rows {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.n_rows, cols.len());
        for (dst, &src) in cols.iter().enumerate() {
            out.col_mut(dst).copy_from_slice(self.col(src));
        }
        out
    }

    /// `A * B`, accumulated as axpys over the columns of `A`.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n_cols, other.n_rows, "matmul: inner dimensions");
        let mut out = DenseMatrix::zeros(self.n_rows, other.n_cols);
        let n_rows = self.n_rows;
        let compute_col = |j: usize, col: &mut [f64]| {
            let b_col = other.col(j);
            for (k, &b) in b_col.iter().enumerate() {
                if b != 0.0 {
                    axpy(b, self.col(k), col);
                }
            }
        };
        #[cfg(feature = "parallel")]
        if other.n_cols >= DENSE_PAR_MIN_COLS {
            out.values
                .par_chunks_mut(n_rows)
                .enumerate()
                .for_each(|(j, col)| compute_col(j, col));
            return out;
        }
        for (j, col) in out.values.chunks_mut(n_rows).enumerate() {
            compute_col(j, col);
        }
        out
    }

    /// `A^T * B` via column dot products.
    pub fn transpose_times(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n_rows, other.n_rows, "transpose_times: row counts");
        let mut out = DenseMatrix::zeros(self.n_cols, other.n_cols);
        let n_out_rows = self.n_cols;
        let compute_col = |j: usize, col: &mut [f64]| {
            let b_col = other.col(j);
            for (i, ci) in col.iter_mut().enumerate() {
                *ci = dot(self.col(i), b_col);
            }
        };
        #[cfg(feature = "parallel")]
        if other.n_cols >= DENSE_PAR_MIN_COLS || self.n_cols >= DENSE_PAR_MIN_COLS {
            out.values
                .par_chunks_mut(n_out_rows)
                .enumerate()
                .for_each(|(j, col)| compute_col(j, col));
            return out;
        }
        for j in 0..other.n_cols {
            let mut col = vec![0.0; n_out_rows];
            compute_col(j, &mut col);
            out.col_mut(j).copy_from_slice(&col);
        }
        out
    }

    /// Sequential `A^T * B`; public for the benchmark comparison.
    pub fn transpose_times_seq(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n_rows, other.n_rows);
        let mut out = DenseMatrix::zeros(self.n_cols, other.n_cols);
        for j in 0..other.n_cols {
            for i in 0..self.n_cols {
                out.set(i, j, dot(self.col(i), other.col(j)));
            }
        }
        out
    }

    /// `A * x` for a vector.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_cols);
        let mut y = vec![0.0; self.n_rows];
        for (k, &xk) in x.iter().enumerate() {
            if xk != 0.0 {
                axpy(xk, self.col(k), &mut y);
            }
        }
        y
    }

    /// `A^T * x` for a vector.
    pub fn transpose_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_rows);
        (0..self.n_cols).map(|j| dot(self.col(j), x)).collect()
    }

    /// Scales row `i` by `factors[i]`.
    pub fn scale_rows(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.n_rows);
        for j in 0..self.n_cols {
            let n_rows = self.n_rows;
            let col = &mut self.values[j * n_rows..(j + 1) * n_rows];
            for (v, &f) in col.iter_mut().zip(factors) {
                *v *= f;
            }
        }
    }

    /// Scales column `j` by `factors[j]`.
    pub fn scale_columns(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.n_cols);
        for (j, &f) in factors.iter().enumerate() {
            for v in self.col_mut(j) {
                *v *= f;
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.n_rows, other.n_rows);
        assert_eq!(self.n_cols, other.n_cols);
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

// ---------------------------------------------------------------------------
// Householder QR
// ---------------------------------------------------------------------------

/// QR factorization of a tall matrix, stored as unit-norm reflectors.
///
/// The full orthogonal factor is never formed; its leading columns (thin Q)
/// and trailing columns (orthonormal complement / nullspace basis of `A^T`)
/// are materialized on demand by applying the reflectors.
#[derive(Debug, Clone)]
pub struct QrFactors {
    n_rows: usize,
    reflectors: Vec<Vec<f64>>,
    r: DenseMatrix,
}

/// Householder QR of an n x p matrix with p <= n.
pub fn qr(a: &DenseMatrix) -> Result<QrFactors> {
    let n = a.n_rows();
    let p = a.n_cols();
    if p > n {
        return Err(Error::DimensionMismatch { expected: n, got: p });
    }
    let mut work = a.clone();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(p);

    for j in 0..p {
        let x = &work.col(j)[j..];
        let norm = norm2(x);
        if norm == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        let alpha = if x[0] >= 0.0 { -norm } else { norm };
        let mut v = x.to_vec();
        v[0] -= alpha;
        let vn = norm2(&v);
        for vi in &mut v {
            *vi /= vn;
        }
        // Apply H = I - 2 v v^T to the remaining columns.
        for c in j..p {
            let col = &mut work.col_mut(c)[j..];
            let s = 2.0 * dot(&v, col);
            axpy(-s, &v, col);
        }
        work.set(j, j, alpha);
        reflectors.push(v);
    }

    let mut r = DenseMatrix::zeros(p, p);
    for j in 0..p {
        for i in 0..=j {
            r.set(i, j, work.get(i, j));
        }
    }
    Ok(QrFactors {
        n_rows: n,
        reflectors,
        r,
    })
}

impl QrFactors {
    pub fn r(&self) -> &DenseMatrix {
        &self.r
    }

    /// Applies Q to a vector in place (reflectors in reverse order).
    pub fn apply_q(&self, x: &mut [f64]) {
        assert_eq!(x.len(), self.n_rows);
        for (j, v) in self.reflectors.iter().enumerate().rev() {
            if v.is_empty() {
                continue;
            }
            let tail = &mut x[j..];
            let s = 2.0 * dot(v, tail);
            axpy(-s, v, tail);
        }
    }

    fn q_column(&self, c: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.n_rows];
        x[c] = 1.0;
        self.apply_q(&mut x);
        x
    }

    /// Thin factor: the first p columns of Q, orthonormal and spanning
    /// the column space of the input when R has full rank.
    pub fn thin_q(&self) -> DenseMatrix {
        self.q_block(0, self.reflectors.len())
    }

    /// Orthonormal basis of the complement of the column space: the
    /// trailing n - p columns of Q. For p = 0 this is the identity.
    pub fn complement_basis(&self) -> DenseMatrix {
        self.q_block(self.reflectors.len(), self.n_rows)
    }

    fn q_block(&self, from: usize, to: usize) -> DenseMatrix {
        let width = to - from;
        let mut out = DenseMatrix::zeros(self.n_rows, width);
        let n_rows = self.n_rows;
        #[cfg(feature = "parallel")]
        if width >= DENSE_PAR_MIN_COLS {
            out.values_mut()
                .par_chunks_mut(n_rows)
                .enumerate()
                .for_each(|(c, col)| {
                    col.copy_from_slice(&self.q_column(from + c));
                });
            return out;
        }
        for c in 0..width {
            out.col_mut(c).copy_from_slice(&self.q_column(from + c));
            let _ = n_rows;
        }
        out
    }

    /// Count of diagonal entries of R above `threshold` in absolute value.
    pub fn numerical_rank(&self, threshold: f64) -> usize {
        (0..self.r.n_cols())
            .filter(|&i| self.r.get(i, i).abs() > threshold)
            .count()
    }
}

/// Convenience wrapper returning (thin Q, R).
pub fn qr_tall(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let f = qr(a)?;
    Ok((f.thin_q(), f.r().clone()))
}

// ---------------------------------------------------------------------------
// Cholesky
// ---------------------------------------------------------------------------

/// Lower-triangular Cholesky factor of a small SPD matrix.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    l: DenseMatrix,
}

pub fn cholesky_spd(a: &DenseMatrix) -> Result<CholeskyFactor> {
    let n = a.n_rows();
    if a.n_cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.n_cols(),
        });
    }
    let max_diag = (0..n).fold(0.0f64, |m, i| m.max(a.get(i, i).abs()));
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = a.get(j, j);
        for k in 0..j {
            pivot -= l.get(j, k) * l.get(j, k);
        }
        if pivot <= max_diag * 1e-14 || !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let ljj = pivot.sqrt();
        l.set(j, j, ljj);
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / ljj);
        }
    }
    Ok(CholeskyFactor { l })
}

impl CholeskyFactor {
    pub fn lower(&self) -> &DenseMatrix {
        &self.l
    }

    pub fn dim(&self) -> usize {
        self.l.n_rows()
    }

    /// Solves `A x = b` given `A = L L^T`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.l.n_rows();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        let mut x = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.l.get(i, k) * x[k];
            }
            x[i] /= self.l.get(i, i);
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                x[i] -= self.l.get(k, i) * x[k];
            }
            x[i] /= self.l.get(i, i);
        }
        Ok(x)
    }
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver: Householder tridiagonalization + implicit-shift QL
// ---------------------------------------------------------------------------

/// Eigen-decomposition of a symmetric matrix.
///
/// Returns eigenvalues in ascending order with matching orthonormal
/// eigenvector columns. The input may deviate from exact symmetry by up to
/// 1e-12 relative; it is symmetrized internally before reduction.
pub fn symmetric_eig(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = a.n_rows();
    if a.n_cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.n_cols(),
        });
    }
    if n == 0 {
        return Ok((Vec::new(), DenseMatrix::zeros(0, 0)));
    }
    let scale = a.max_abs();
    let mut asym = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            asym = asym.max((a.get(i, j) - a.get(j, i)).abs());
        }
    }
    if scale > 0.0 && asym > 1e-12 * scale {
        return Err(Error::NotSymmetric {
            asymmetry: asym / scale,
        });
    }

    let mut z = DenseMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            z.set(i, j, 0.5 * (a.get(i, j) + a.get(j, i)));
        }
    }

    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, z.values_mut(), &mut d, &mut e);
    ql_implicit(n, &mut d, &mut e, z.values_mut())?;

    // Sort ascending, permuting eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let eigenvectors = z.select_columns(&order);
    Ok((eigenvalues, eigenvectors))
}

/// Householder reduction to tridiagonal form with accumulation of the
/// orthogonal transformation in `z` (column-major n x n, input matrix on
/// entry, transformation on exit). `d` receives the diagonal, `e` the
/// subdiagonal in `e[1..]`.
fn tridiagonalize(n: usize, z: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |z: &[f64], i: usize, j: usize| z[i + j * n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += at(z, i, k).abs();
            }
            if scale == 0.0 {
                e[i] = at(z, i, l);
            } else {
                for k in 0..=l {
                    z[i + k * n] /= scale;
                    h += at(z, i, k) * at(z, i, k);
                }
                let f = at(z, i, l);
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i + l * n] = f - g;

                // u = reflector (row i, cols 0..=l); p = A u / h
                let u: Vec<f64> = (0..=l).map(|k| at(z, i, k)).collect();
                let mut p = symmetric_lower_matvec(n, z, l + 1, &u);
                for pk in &mut p {
                    *pk /= h;
                }
                let f_acc = dot(&p, &u);
                let hh = f_acc / (h + h);
                // q = p - hh u; rank-2 update A -= u q^T + q u^T (lower part)
                let q: Vec<f64> = p.iter().zip(&u).map(|(pj, uj)| pj - hh * uj).collect();
                rank2_update_lower(n, z, l + 1, &u, &q);

                // Column i keeps u/h for the accumulation pass below.
                for (j, &uj) in u.iter().enumerate() {
                    z[j + i * n] = uj / h;
                }
            }
        } else {
            e[i] = at(z, i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;

    // Accumulate the transformations.
    for i in 0..n {
        if d[i] != 0.0 {
            // g_j = sum_k z[i][k] z[k][j] for k < i, then col_j -= g_j * col_i
            let u: Vec<f64> = (0..i).map(|k| at(z, i, k)).collect();
            let (head, tail) = z.split_at_mut(i * n);
            let col_i = &tail[..n];
            let update = |col_j: &mut [f64]| {
                let g = dot(&u, &col_j[..i]);
                axpy(-g, &col_i[..i], &mut col_j[..i]);
            };
            #[cfg(feature = "parallel")]
            if i >= DENSE_PAR_MIN_COLS {
                head.par_chunks_mut(n).for_each(update);
            } else {
                for col_j in head.chunks_mut(n) {
                    update(col_j);
                }
            }
            #[cfg(not(feature = "parallel"))]
            for col_j in head.chunks_mut(n) {
                update(col_j);
            }
        }
        d[i] = at(z, i, i);
        z[i + i * n] = 1.0;
        for j in 0..i {
            z[j + i * n] = 0.0;
            z[i + j * n] = 0.0;
        }
    }
}

/// `y = A u` for the leading `m x m` block, reading only the lower triangle.
fn symmetric_lower_matvec(n: usize, z: &[f64], m: usize, u: &[f64]) -> Vec<f64> {
    let compute = |j: usize| {
        let mut acc = 0.0;
        // row j of the lower triangle: z[j][k], k <= j (strided)
        for (k, &uk) in u.iter().enumerate().take(j + 1) {
            acc += z[j + k * n] * uk;
        }
        // column j below the diagonal: z[k][j], k > j (contiguous)
        let col = &z[j * n..j * n + m];
        for (k, &uk) in u.iter().enumerate().skip(j + 1) {
            acc += col[k] * uk;
        }
        acc
    };
    #[cfg(feature = "parallel")]
    if m >= DENSE_PAR_MIN_COLS {
        return (0..m).into_par_iter().map(compute).collect();
    }
    (0..m).map(compute).collect()
}

/// Lower-triangle rank-2 update `A -= u q^T + q u^T` on the leading m x m block.
fn rank2_update_lower(n: usize, z: &mut [f64], m: usize, u: &[f64], q: &[f64]) {
    let update = |k: usize, col: &mut [f64]| {
        let uk = u[k];
        let qk = q[k];
        for j in k..m {
            col[j] -= u[j] * qk + q[j] * uk;
        }
    };
    #[cfg(feature = "parallel")]
    if m >= DENSE_PAR_MIN_COLS {
        z[..m * n]
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(k, col)| update(k, col));
        return;
    }
    for (k, col) in z[..m * n].chunks_mut(n).enumerate() {
        update(k, col);
    }
}

/// Implicit-shift QL on the tridiagonal (d, e), rotating the columns of `z`.
fn ql_implicit(n: usize, d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    const MAX_SWEEPS: usize = 50;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

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
            if iter > MAX_SWEEPS {
                return Err(Error::EigNonConvergence {
                    index: l,
                    iterations: iter,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0;
            let mut underflow = false;

            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                rotate_adjacent_columns(n, z, i, c, s);
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Applies the rotation to columns i and i+1 of z (adjacent in memory).
fn rotate_adjacent_columns(n: usize, z: &mut [f64], i: usize, c: f64, s: f64) {
    let pair = &mut z[i * n..(i + 2) * n];
    let (ci, ci1) = pair.split_at_mut(n);
    let body = |ci: &mut [f64], ci1: &mut [f64]| {
        for (a, b) in ci.iter_mut().zip(ci1.iter_mut()) {
            let f = *b;
            *b = s * *a + c * f;
            *a = c * *a - s * f;
        }
    };
    #[cfg(feature = "parallel")]
    if n >= 4096 {
        const CHUNK: usize = 1024;
        ci.par_chunks_mut(CHUNK)
            .zip(ci1.par_chunks_mut(CHUNK))
            .for_each(|(a, b)| body(a, b));
        return;
    }
    body(ci, ci1);
}

// ---------------------------------------------------------------------------
// SPD square root
// ---------------------------------------------------------------------------

/// `(A^{1/2}, A^{-1/2})` of an SPD matrix via its eigen-decomposition.
pub fn spd_sqrt_and_inv_sqrt(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let (vals, vecs) = symmetric_eig(a)?;
    let max = vals.last().copied().unwrap_or(0.0);
    if let Some((i, &v)) = vals
        .iter()
        .enumerate()
        .find(|&(_, &v)| v <= max.abs() * 1e-13)
    {
        return Err(Error::NotPositiveDefinite { index: i, pivot: v });
    }
    let sqrt_scales: Vec<f64> = vals.iter().map(|v| v.sqrt()).collect();
    let inv_scales: Vec<f64> = vals.iter().map(|v| 1.0 / v.sqrt()).collect();
    let vt = vecs.transpose();
    let mut w = vecs.clone();
    w.scale_columns(&sqrt_scales);
    let sqrt = w.matmul(&vt);
    let mut w = vecs;
    w.scale_columns(&inv_scales);
    let inv_sqrt = w.matmul(&vt);
    Ok((sqrt, inv_sqrt))
}

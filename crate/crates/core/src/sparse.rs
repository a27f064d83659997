//! Compressed sparse row matrices and their product kernels.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Row-parallel products only pay off once there is enough work per split.
#[cfg(feature = "parallel")]
const SPMV_PAR_MIN_NNZ: usize = 1 << 14;

/// Compressed sparse row matrix with sorted, deduplicated columns per row.
///
/// Invariants established at construction and preserved thereafter:
/// `row_offsets` is nondecreasing with `row_offsets[0] == 0` and
/// `row_offsets[n_rows] == nnz`; column indices are strictly increasing
/// within each row; no explicitly stored zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a CSR matrix from (row, col, value) triplets.
    ///
    /// Duplicate coordinates are summed in input order; entries that sum to
    /// exactly zero are pruned.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
        }
        // Stable sort keeps duplicate summation in input order, which makes
        // construction bit-reproducible.
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_offsets = vec![0usize; n_rows + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());

        let mut iter = sorted.into_iter().peekable();
        while let Some((r, c, v)) = iter.next() {
            let mut acc = v;
            while let Some(&(r2, c2, v2)) = iter.peek() {
                if r2 == r && c2 == c {
                    acc += v2;
                    iter.next();
                } else {
                    break;
                }
            }
            if acc != 0.0 {
                row_offsets[r + 1] += 1;
                col_indices.push(c);
                values.push(acc);
            }
        }
        for i in 0..n_rows {
            row_offsets[i + 1] += row_offsets[i];
        }

        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_offsets[i];
        let hi = self.row_offsets[i + 1];
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Stored entry at (i, j), or 0 if absent.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(pos) => vals[pos],
            Err(_) => 0.0,
        }
    }

    /// `y = A x`, with each row accumulated in stored order.
    ///
    /// Output rows are independent, so the parallel path is bitwise
    /// identical to the sequential one for any thread count.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n_cols, "spmv: input dimension");
        assert_eq!(y.len(), self.n_rows, "spmv: output dimension");
        #[cfg(feature = "parallel")]
        if self.nnz() >= SPMV_PAR_MIN_NNZ {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| {
                *yi = self.row_dot(i, x);
            });
            return;
        }
        self.spmv_into_seq(x, y);
    }

    /// Sequential `y = A x`; kept public so benchmarks can compare paths.
    pub fn spmv_into_seq(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n_cols, "spmv: input dimension");
        assert_eq!(y.len(), self.n_rows, "spmv: output dimension");
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row_dot(i, x);
        }
    }

    #[inline]
    fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let (cols, vals) = self.row(i);
        let mut acc = 0.0;
        for (&c, &v) in cols.iter().zip(vals) {
            acc += v * x[c];
        }
        acc
    }

    /// `A x` with a dimension check.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                expected: self.n_cols,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.n_rows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// `Y = A X` column by column (used by the dense oracle paths).
    pub fn spmm(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        if x.n_rows() != self.n_cols {
            return Err(Error::DimensionMismatch {
                expected: self.n_cols,
                got: x.n_rows(),
            });
        }
        let mut y = DenseMatrix::zeros(self.n_rows, x.n_cols());
        #[cfg(feature = "parallel")]
        {
            let n_rows = self.n_rows;
            y.values_mut()
                .par_chunks_mut(n_rows)
                .enumerate()
                .for_each(|(j, col)| self.spmv_into_seq(x.col(j), col));
        }
        #[cfg(not(feature = "parallel"))]
        for j in 0..x.n_cols() {
            let mut col = vec![0.0; self.n_rows];
            self.spmv_into_seq(x.col(j), &mut col);
            y.col_mut(j).copy_from_slice(&col);
        }
        Ok(y)
    }

    /// Maximum over columns of the sum of absolute values.
    pub fn one_norm(&self) -> f64 {
        let mut col_sums = vec![0.0; self.n_cols];
        for (&c, &v) in self.col_indices.iter().zip(&self.values) {
            col_sums[c] += v.abs();
        }
        col_sums.into_iter().fold(0.0, f64::max)
    }

    /// Dense copy (test oracles and small problems only).
    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.n_rows, self.n_cols);
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                out.set(i, c, v);
            }
        }
        out
    }

    /// True iff every stored entry has an exactly equal mirrored entry.
    pub fn is_symmetric(&self) -> bool {
        if self.n_rows != self.n_cols {
            return false;
        }
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if self.get(j, i) != v {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_triplets(n: usize, nnz: usize, seed: u64) -> Vec<(usize, usize, f64)> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..nnz)
            .map(|_| {
                (
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(-1.0..1.0),
                )
            })
            .collect()
    }

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(1, 1, &[(0, 0, 1.0), (0, 0, 2.0)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), 3.0);
    }

    #[test]
    fn empty_matrix() {
        let m = CsrMatrix::from_triplets(3, 3, &[]).unwrap();
        assert_eq!(m.row_offsets(), &[0, 0, 0, 0]);
        assert_eq!(m.nnz(), 0);
        assert_eq!(m.one_norm(), 0.0);
    }

    #[test]
    fn zeros_are_pruned() {
        let m = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 0, -1.0), (1, 1, 2.0)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), 0.0);
        assert_eq!(m.get(1, 1), 2.0);
    }

    #[test]
    fn out_of_range_rejected() {
        let err = CsrMatrix::from_triplets(2, 2, &[(2, 0, 1.0)]);
        assert!(matches!(err, Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn reconstruction_matches_triplet_sum_oracle() {
        // Dense accumulation oracle over a random 8x8 triplet set.
        let triplets = random_triplets(8, 40, 17);
        let m = CsrMatrix::from_triplets(8, 8, &triplets).unwrap();
        let mut dense = vec![0.0; 64];
        for &(r, c, v) in &triplets {
            dense[r * 8 + c] += v;
        }
        for r in 0..8 {
            for c in 0..8 {
                assert!((m.get(r, c) - dense[r * 8 + c]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn spmv_identity_and_zero() {
        let eye: Vec<_> = (0..5).map(|i| (i, i, 1.0)).collect();
        let m = CsrMatrix::from_triplets(5, 5, &eye).unwrap();
        let x = vec![1.0, -2.0, 3.0, 0.5, 0.0];
        assert_eq!(m.spmv(&x).unwrap(), x);
        let zero = vec![0.0; 5];
        assert_eq!(m.spmv(&zero).unwrap(), zero);
    }

    #[test]
    fn spmv_matches_dense_oracle() {
        let triplets = random_triplets(10, 60, 3);
        let m = CsrMatrix::from_triplets(10, 10, &triplets).unwrap();
        let x: Vec<f64> = (0..10).map(|i| (i as f64) * 0.3 - 1.0).collect();
        let y = m.spmv(&x).unwrap();
        let dense = m.to_dense();
        for i in 0..10 {
            let mut acc = 0.0;
            for j in 0..10 {
                acc += dense.get(i, j) * x[j];
            }
            let denom = acc.abs().max(1.0);
            assert!((y[i] - acc).abs() / denom < 1e-14);
        }
    }

    #[test]
    fn spmv_dimension_mismatch() {
        let m = CsrMatrix::from_triplets(2, 3, &[(0, 0, 1.0)]).unwrap();
        assert!(matches!(
            m.spmv(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn one_norm_matches_dense_column_sums() {
        let triplets = random_triplets(6, 25, 11);
        let m = CsrMatrix::from_triplets(6, 6, &triplets).unwrap();
        let dense = m.to_dense();
        let mut expect = 0.0f64;
        for c in 0..6 {
            let s: f64 = (0..6).map(|r| dense.get(r, c).abs()).sum();
            expect = expect.max(s);
        }
        assert_eq!(m.one_norm(), expect);
    }

    #[test]
    fn one_norm_single_edge_laplacian() {
        let m = CsrMatrix::from_triplets(
            2,
            2,
            &[(0, 0, 1.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 1.0)],
        )
        .unwrap();
        assert_eq!(m.one_norm(), 2.0);
    }

    #[test]
    fn parallel_and_sequential_spmv_agree_bitwise() {
        let triplets = random_triplets(300, 20_000, 5);
        let m = CsrMatrix::from_triplets(300, 300, &triplets).unwrap();
        let x: Vec<f64> = (0..300).map(|i| ((i * 37) % 101) as f64 / 50.0 - 1.0).collect();
        let mut y_par = vec![0.0; 300];
        let mut y_seq = vec![0.0; 300];
        m.spmv_into(&x, &mut y_par);
        m.spmv_into_seq(&x, &mut y_seq);
        assert_eq!(y_par, y_seq);
    }
}

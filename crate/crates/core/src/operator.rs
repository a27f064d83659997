//! Matrix-free application of the constrained, deflation-shifted operator.
//!
//! The fairness constraint is enforced by projecting onto the nullspace of
//! the scaled constraint matrix; the projector is applied as `w - Cz` with
//! `z` the least-squares solution against `C`, so the nullspace basis is
//! never formed. A deflation shift moves the constraint directions to the
//! top of the spectrum so the wanted eigenvalues stay at the bottom.

use crate::error::{Error, Result};
use crate::graph::{FairnessConstraint, LaplacianPair};
use crate::sparse::CsrMatrix;
use crate::vecops::axpy;

/// A symmetric linear operator accessed only through products.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`. Implementations must be deterministic for a fixed input.
    fn apply_into(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        assert_eq!(self.n_rows(), self.n_cols());
        self.n_rows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.spmv_into(x, y);
    }
}

/// Orthogonal projector onto the nullspace of the scaled constraint,
/// applied through the precomputed Gram factor.
#[derive(Debug, Clone, Copy)]
pub struct Projector<'a> {
    constraint: &'a FairnessConstraint,
}

impl<'a> Projector<'a> {
    pub fn new(constraint: &'a FairnessConstraint) -> Self {
        Self { constraint }
    }

    pub fn dim(&self) -> usize {
        self.constraint.n()
    }

    /// `out = w - C z` with `z` minimizing `||C z - w||`. An empty
    /// constraint is the identity.
    pub fn project_into(&self, w: &[f64], out: &mut [f64]) {
        assert_eq!(w.len(), self.dim(), "project: input dimension");
        assert_eq!(out.len(), self.dim(), "project: output dimension");
        out.copy_from_slice(w);
        let c = &self.constraint.scaled;
        let Some(gram) = self.constraint.gram_factor() else {
            return;
        };
        let rhs = c.transpose_matvec(w);
        let z = gram
            .solve(&rhs)
            .expect("gram factor dimension fixed at construction");
        for (j, &zj) in z.iter().enumerate() {
            axpy(-zj, c.col(j), out);
        }
    }

    pub fn project(&self, w: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; w.len()];
        self.project_into(w, &mut out);
        out
    }
}

/// The deflated constrained operator `P (L_n - sigma I) P + sigma I`,
/// applied as `P(L_n(Pw)) - sigma Pw + sigma w`: two projections and one
/// sparse product per application, reusing `Pw` for the shift term.
pub struct ShiftedProjectedOperator<'a> {
    normalized_laplacian: &'a CsrMatrix,
    projector: Projector<'a>,
    sigma: f64,
}

impl<'a> ShiftedProjectedOperator<'a> {
    pub fn new(
        normalized_laplacian: &'a CsrMatrix,
        constraint: &'a FairnessConstraint,
        sigma: f64,
    ) -> Result<Self> {
        let n = normalized_laplacian.n_rows();
        if normalized_laplacian.n_cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: normalized_laplacian.n_cols(),
            });
        }
        if constraint.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: constraint.n(),
            });
        }
        Ok(Self {
            normalized_laplacian,
            projector: Projector::new(constraint),
            sigma,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn projector(&self) -> &Projector<'a> {
        &self.projector
    }

    /// Upper bound on the spectrum: the constraint block sits at `sigma`
    /// and the projected block inherits the normalized-Laplacian bound 2.
    pub fn spectrum_upper_bound(&self) -> f64 {
        self.sigma.max(0.0) + 2.0
    }
}

impl LinearOperator for ShiftedProjectedOperator<'_> {
    fn dim(&self) -> usize {
        self.normalized_laplacian.n_rows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        assert_eq!(x.len(), n, "operator: input dimension");
        assert_eq!(y.len(), n, "operator: output dimension");
        // Per-call scratch keeps concurrent applications independent.
        let mut pw = vec![0.0; n];
        self.projector.project_into(x, &mut pw);
        let mut lpw = vec![0.0; n];
        self.normalized_laplacian.spmv_into(&pw, &mut lpw);
        self.projector.project_into(&lpw, y);
        for i in 0..n {
            y[i] += self.sigma * (x[i] - pw[i]);
        }
    }
}

/// Deflation shift: the one-norm of the normalized Laplacian, which
/// dominates its spectral radius and therefore every retained eigenvalue.
pub fn choose_shift(lap: &LaplacianPair) -> f64 {
    lap.normalized.one_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{cholesky_spd, symmetric_eig, DenseMatrix};
    use crate::graph::{build_fairness_constraint, build_laplacians, GroupPartition, WeightedGraph};
    use crate::vecops::{dot, norm2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_instance(
        n: usize,
        h: usize,
        seed: u64,
    ) -> (WeightedGraph, LaplacianPair, FairnessConstraint) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = loop {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random::<f64>() < 0.3 {
                        edges.push((i, j, rng.random_range(0.2..2.0)));
                    }
                }
            }
            if let Ok(g) = WeightedGraph::from_undirected_edges(n, &edges) {
                break g;
            }
        };
        let membership: Vec<usize> = (0..n).map(|i| i % h).collect();
        let p = GroupPartition::new(h, membership).unwrap();
        let lap = build_laplacians(&g).unwrap();
        let fc = build_fairness_constraint(&p, &lap).unwrap();
        (g, lap, fc)
    }

    /// Dense projector `I - C (C^T C)^{-1} C^T` for comparison.
    fn dense_projector(c: &DenseMatrix) -> DenseMatrix {
        let n = c.n_rows();
        if c.n_cols() == 0 {
            return DenseMatrix::identity(n);
        }
        let gram = c.transpose_times(c);
        let f = cholesky_spd(&gram).unwrap();
        let mut p = DenseMatrix::identity(n);
        for col in 0..n {
            let e: Vec<f64> = (0..n).map(|i| if i == col { 1.0 } else { 0.0 }).collect();
            let rhs = c.transpose_matvec(&e);
            let z = f.solve(&rhs).unwrap();
            let mut out = e;
            for (j, &zj) in z.iter().enumerate() {
                axpy(-zj, c.col(j), &mut out);
            }
            p.col_mut(col).copy_from_slice(&out);
        }
        p
    }

    #[test]
    fn project_fixes_orthogonal_vectors() {
        let (_, _, fc) = random_instance(30, 3, 1);
        let projector = Projector::new(&fc);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
        // First projection lands in the nullspace; a second fixes it.
        let p1 = projector.project(&w);
        let p2 = projector.project(&p1);
        let diff: f64 = p1.iter().zip(&p2).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(diff <= 1e-13 * norm2(&w).max(1.0));
    }

    #[test]
    fn project_annihilates_range() {
        let (_, _, fc) = random_instance(25, 4, 2);
        let projector = Projector::new(&fc);
        let y = [0.7, -1.3, 0.4];
        let w = fc.scaled.matvec(&y);
        let pw = projector.project(&w);
        assert!(norm2(&pw) <= 1e-12 * norm2(&w));
    }

    #[test]
    fn project_matches_dense_oracle() {
        let (_, _, fc) = random_instance(40, 4, 3);
        let projector = Projector::new(&fc);
        let p_dense = dense_projector(&fc.scaled);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let w: Vec<f64> = (0..40).map(|_| rng.random_range(-1.0..1.0)).collect();
            let ours = projector.project(&w);
            let oracle = p_dense.matvec(&w);
            let err: f64 = ours
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-11 * norm2(&w));
        }
    }

    #[test]
    fn empty_constraint_projects_identically() {
        let (_, lap, _) = random_instance(10, 2, 4);
        let p = GroupPartition::trivial(10);
        let fc = build_fairness_constraint(&p, &lap).unwrap();
        let projector = Projector::new(&fc);
        let w: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert_eq!(projector.project(&w), w);
    }

    #[test]
    fn apply_shifts_constraint_range() {
        // Vectors in the range of C form the shifted eigenspace.
        let (_, lap, fc) = random_instance(20, 3, 6);
        let sigma = 2.5;
        let op = ShiftedProjectedOperator::new(&lap.normalized, &fc, sigma).unwrap();
        let y = [1.1, -0.6];
        let w = fc.scaled.matvec(&y);
        let mut out = vec![0.0; 20];
        op.apply_into(&w, &mut out);
        for i in 0..20 {
            assert!((out[i] - sigma * w[i]).abs() <= 1e-11 * norm2(&w));
        }
    }

    #[test]
    fn apply_is_identity_on_feasible_vectors_for_identity_laplacian() {
        let (_, lap, fc) = random_instance(15, 2, 7);
        let eye =
            CsrMatrix::from_triplets(15, 15, &(0..15).map(|i| (i, i, 1.0)).collect::<Vec<_>>())
                .unwrap();
        let _ = lap;
        let op = ShiftedProjectedOperator::new(&eye, &fc, 0.0).unwrap();
        let projector = Projector::new(&fc);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w: Vec<f64> = (0..15).map(|_| rng.random_range(-1.0..1.0)).collect();
        let w = projector.project(&w);
        let mut out = vec![0.0; 15];
        op.apply_into(&w, &mut out);
        for i in 0..15 {
            assert!((out[i] - w[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn apply_matches_dense_operator_oracle() {
        let (_, lap, fc) = random_instance(50, 3, 8);
        let sigma = 2.0;
        let op = ShiftedProjectedOperator::new(&lap.normalized, &fc, sigma).unwrap();
        let p_dense = dense_projector(&fc.scaled);
        let ln = lap.normalized.to_dense();
        // P (L_n - sigma I) P + sigma I
        let mut shifted = ln.clone();
        for i in 0..50 {
            shifted.set(i, i, shifted.get(i, i) - sigma);
        }
        let mut dense_op = p_dense.matmul(&shifted).matmul(&p_dense);
        for i in 0..50 {
            dense_op.set(i, i, dense_op.get(i, i) + sigma);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let w: Vec<f64> = (0..50).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut ours = vec![0.0; 50];
            op.apply_into(&w, &mut ours);
            let oracle = dense_op.matvec(&w);
            let err: f64 = ours
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-11 * norm2(&w));
        }
    }

    #[test]
    fn operator_is_symmetric_and_psd() {
        let (_, lap, fc) = random_instance(35, 4, 14);
        let sigma = choose_shift(&lap);
        let op = ShiftedProjectedOperator::new(&lap.normalized, &fc, sigma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..20 {
            let x: Vec<f64> = (0..35).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..35).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut ax = vec![0.0; 35];
            let mut ay = vec![0.0; 35];
            op.apply_into(&x, &mut ax);
            op.apply_into(&y, &mut ay);
            let xay = dot(&x, &ay);
            let yax = dot(&y, &ax);
            assert!((xay - yax).abs() <= 1e-12 * xay.abs().max(yax.abs()).max(1.0));
            let xax = dot(&x, &ax);
            let nx = norm2(&x);
            assert!(xax >= -1e-10 * nx * nx);
        }
    }

    #[test]
    fn projector_idempotence_on_many_vectors() {
        let (_, _, fc) = random_instance(30, 3, 16);
        let projector = Projector::new(&fc);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let w: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
            let pw = projector.project(&w);
            let ppw = projector.project(&pw);
            let diff: f64 = pw
                .iter()
                .zip(&ppw)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(diff <= 1e-12 * norm2(&w).max(1.0));
        }
    }

    #[test]
    fn shift_for_single_edge_is_two() {
        let g = WeightedGraph::from_undirected_edges(2, &[(0, 1, 1.0)]).unwrap();
        let lap = build_laplacians(&g).unwrap();
        assert_eq!(choose_shift(&lap), 2.0);
    }

    #[test]
    fn shift_dominates_spectrum() {
        for seed in 0..5u64 {
            let (_, lap, _) = random_instance(30 + 4 * seed as usize, 2, seed + 30);
            let sigma = choose_shift(&lap);
            let (vals, _) = symmetric_eig(&lap.normalized.to_dense()).unwrap();
            let lmax = vals.last().copied().unwrap();
            assert!(sigma >= lmax - 1e-12, "sigma {sigma} < lambda_max {lmax}");
        }
    }
}

//! Smallest-eigenpair computation.
//!
//! The matrix-free path runs thick-restart Lanczos with full
//! reorthogonalization on the folded operator `B = mu I - A` (`mu` an upper
//! bound on the spectrum of `A`), so the smallest eigenvalues of `A` become
//! the dominant eigenvalues of `B` without any factorization. The dense
//! paths build the nullspace-reduced matrices explicitly and serve as the
//! reference implementations for small problems.

use crate::dense::{symmetric_eig, DenseMatrix};
use crate::error::{Error, Result};
use crate::graph::{FairnessConstraint, LaplacianPair};
use crate::operator::{choose_shift, LinearOperator, Projector, ShiftedProjectedOperator};
use crate::vecops::{axpy, dot, norm2, scale};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Configuration of the thick-restart Lanczos iteration.
#[derive(Debug, Clone)]
pub struct LanczosConfig {
    /// Number of wanted (smallest) eigenpairs.
    pub k: usize,
    /// Maximum basis dimension between restarts.
    pub max_basis: usize,
    /// Relative residual tolerance, scaled by the spectrum upper bound.
    pub tol: f64,
    /// Restart cap before reporting non-convergence.
    pub max_restarts: usize,
    /// Seed for the start vector and any refill directions.
    pub seed: u64,
    /// Optional explicit start vector (normalized internally).
    pub start_vector: Option<Vec<f64>>,
}

impl LanczosConfig {
    pub fn for_k(k: usize) -> Self {
        Self {
            k,
            max_basis: (2 * k + 10).max(20),
            tol: 1e-8,
            max_restarts: 300,
            seed: 7,
            start_vector: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if self.max_basis < self.k + 2 {
            return Err(Error::InvalidInput(format!(
                "max_basis {} must be at least k + 2 = {}",
                self.max_basis,
                self.k + 2
            )));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidInput("tol must be positive".into()));
        }
        Ok(())
    }
}

/// Converged eigenpairs plus iteration accounting.
#[derive(Debug, Clone)]
pub struct EigResult {
    /// Ascending eigenvalues of the original operator.
    pub eigenvalues: Vec<f64>,
    /// Matching orthonormal eigenvector columns (n x k).
    pub eigenvectors: DenseMatrix,
    /// Explicit residuals `||A x - lambda x||` per pair.
    pub residuals: Vec<f64>,
    /// Total Lanczos expansion steps.
    pub iterations: usize,
    pub restarts: usize,
    pub matvec_count: usize,
    /// Residual estimate of the smallest wanted pair after each restart.
    pub residual_history: Vec<f64>,
}

/// Computes the `cfg.k` smallest eigenpairs of a symmetric PSD operator
/// whose spectrum lies in `[0, spectrum_upper_bound]`.
///
/// Deterministic for a fixed seed; the parallel feature does not change
/// results because every inner reduction has a fixed evaluation order.
pub fn smallest_eigs(
    op: &dyn LinearOperator,
    cfg: &LanczosConfig,
    spectrum_upper_bound: f64,
) -> Result<EigResult> {
    cfg.validate()?;
    let n = op.dim();
    if cfg.k > n {
        return Err(Error::InvalidK { k: cfg.k, n });
    }
    if !spectrum_upper_bound.is_finite() || spectrum_upper_bound <= 0.0 {
        return Err(Error::InvalidInput(
            "spectrum upper bound must be positive".into(),
        ));
    }

    let mu = spectrum_upper_bound;
    let k = cfg.k;
    let capacity = cfg.max_basis.min(n);
    let retain = (k + 5).min(capacity.saturating_sub(2)).max(1);
    let breakdown_tol = 1e-13 * mu;
    let conv_tol = cfg.tol * mu;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // Columns 0..expanded are orthonormal with their projection column in
    // `t` complete; one further column may hold the trailing residual
    // direction awaiting expansion.
    let mut basis = DenseMatrix::zeros(n, capacity + 1);
    let mut t = DenseMatrix::zeros(capacity, capacity);
    let mut expanded = 0usize;
    let mut nb = 1usize;
    let mut last_beta = 0.0f64;

    {
        let v0 = match &cfg.start_vector {
            Some(v) => {
                if v.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: v.len(),
                    });
                }
                v.clone()
            }
            None => (0..n).map(|_| rng.random::<f64>() - 0.5).collect(),
        };
        let nrm = norm2(&v0);
        if nrm == 0.0 {
            return Err(Error::InvalidInput("start vector is zero".into()));
        }
        let col = basis.col_mut(0);
        col.copy_from_slice(&v0);
        scale(1.0 / nrm, col);
    }

    let mut matvec_count = 0usize;
    let mut iterations = 0usize;
    let mut restarts = 0usize;
    let mut residual_history: Vec<f64> = Vec::new();
    let mut scratch = vec![0.0; n];
    let mut exhausted = false;

    loop {
        // --- Expansion: complete `capacity` projection columns. ---
        while expanded < capacity && !exhausted {
            let j = expanded;
            debug_assert_eq!(j, nb - 1);
            // w = B v_j = mu v_j - A v_j
            let mut w = vec![0.0; n];
            op.apply_into(basis.col(j), &mut scratch);
            matvec_count += 1;
            for i in 0..n {
                w[i] = mu * basis.col(j)[i] - scratch[i];
            }
            iterations += 1;

            // Two-pass full reorthogonalization; the accumulated
            // coefficients are exactly the projection entries V^T B v_j,
            // including the spike against retained Ritz vectors.
            for _pass in 0..2 {
                for i in 0..nb {
                    let c = dot(basis.col(i), &w);
                    axpy(-c, basis.col(i), &mut w);
                    t.set(i, j, t.get(i, j) + c);
                }
            }
            expanded += 1;
            let beta = norm2(&w);
            if beta > breakdown_tol {
                last_beta = beta;
                scale(1.0 / beta, &mut w);
                basis.col_mut(nb).copy_from_slice(&w);
                nb += 1;
            } else {
                // Invariant subspace: continue in a fresh random direction
                // orthogonal to everything found so far.
                last_beta = 0.0;
                match refill_direction(&basis, nb, n, &mut rng) {
                    Some(v) => {
                        basis.col_mut(nb).copy_from_slice(&v);
                        nb += 1;
                    }
                    None => exhausted = true,
                }
            }
        }

        let mb = expanded;
        let has_trailing = nb > expanded && last_beta > 0.0;

        // --- Rayleigh-Ritz on the (symmetrized) projected matrix. ---
        let mut small = DenseMatrix::zeros(mb, mb);
        for j in 0..mb {
            for i in 0..=j {
                let v = t.get(i, j);
                small.set(i, j, v);
                small.set(j, i, v);
            }
        }
        let (theta, y) = symmetric_eig(&small)?;
        // Descending in B == ascending in A = mu - theta.
        let order: Vec<usize> = (0..mb).rev().collect();

        let wanted = k.min(mb);
        let mut estimates = Vec::with_capacity(wanted);
        for idx in 0..wanted {
            let col = order[idx];
            let est = if has_trailing {
                (last_beta * y.get(mb - 1, col)).abs()
            } else {
                0.0
            };
            estimates.push(est);
        }
        residual_history.push(estimates[0]);

        let all_converged = wanted == k && estimates.iter().all(|&e| e <= conv_tol);

        if all_converged || exhausted || restarts >= cfg.max_restarts {
            // Extract candidate pairs and verify residuals explicitly.
            let mut eigenvalues = Vec::with_capacity(wanted);
            let mut eigenvectors = DenseMatrix::zeros(n, wanted);
            for idx in 0..wanted {
                let col = order[idx];
                eigenvalues.push(mu - theta[col]);
                let x = eigenvectors.col_mut(idx);
                for i in 0..mb {
                    axpy(y.get(i, col), basis.col(i), x);
                }
                let nrm = norm2(x);
                if nrm > 0.0 {
                    scale(1.0 / nrm, x);
                }
            }
            let mut residuals = Vec::with_capacity(wanted);
            for idx in 0..wanted {
                op.apply_into(eigenvectors.col(idx), &mut scratch);
                matvec_count += 1;
                axpy(-eigenvalues[idx], eigenvectors.col(idx), &mut scratch);
                residuals.push(norm2(&scratch));
            }
            let verified = wanted == k && residuals.iter().all(|&r| r <= conv_tol);
            if verified {
                return Ok(EigResult {
                    eigenvalues,
                    eigenvectors,
                    residuals,
                    iterations,
                    restarts,
                    matvec_count,
                    residual_history,
                });
            }
            if exhausted || restarts >= cfg.max_restarts {
                return Err(Error::ConvergenceFailure {
                    restarts,
                    residuals,
                    tol: conv_tol,
                });
            }
        }

        // --- Thick restart: keep the best Ritz vectors plus the trailing
        // residual direction. ---
        restarts += 1;
        let keep = retain.min(mb.saturating_sub(1)).max(1);
        let mut new_basis = DenseMatrix::zeros(n, capacity + 1);
        let mut new_t = DenseMatrix::zeros(capacity, capacity);
        for idx in 0..keep {
            let col = order[idx];
            let u = new_basis.col_mut(idx);
            for i in 0..mb {
                axpy(y.get(i, col), basis.col(i), u);
            }
            new_t.set(idx, idx, theta[col]);
        }
        if has_trailing {
            let carried = basis.col(mb).to_vec();
            new_basis.col_mut(keep).copy_from_slice(&carried);
        } else {
            // No residual direction survived; restart expansion from a
            // fresh random direction orthogonal to the retained block.
            match refill_direction(&new_basis, keep, n, &mut rng) {
                Some(v) => new_basis.col_mut(keep).copy_from_slice(&v),
                None => exhausted = true,
            }
        }
        basis = new_basis;
        t = new_t;
        expanded = keep;
        nb = if exhausted { keep } else { keep + 1 };
        last_beta = 0.0;
    }
}

/// Draws a random direction and orthogonalizes it against the current
/// basis; `None` when the space is exhausted.
fn refill_direction(
    basis: &DenseMatrix,
    nb: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<f64>> {
    if nb >= n {
        return None;
    }
    for _attempt in 0..5 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        for _pass in 0..2 {
            for i in 0..nb {
                let c = dot(basis.col(i), &v);
                axpy(-c, basis.col(i), &mut v);
            }
        }
        let nrm = norm2(&v);
        if nrm > 1e-8 {
            scale(1.0 / nrm, &mut v);
            return Some(v);
        }
    }
    None
}

/// The scalable fair path: smallest eigenpairs of the deflated constrained
/// operator. With an empty constraint this is plain spectral clustering on
/// the normalized Laplacian.
///
/// Returned vectors are verified to satisfy the constraint: the Frobenius
/// norm of `C^T X` must stay below 1e-8 of `||X||_F`.
pub fn sfairsc_eigs(
    lap: &LaplacianPair,
    fc: &FairnessConstraint,
    cfg: &LanczosConfig,
    sigma_override: Option<f64>,
) -> Result<EigResult> {
    cfg.validate()?;
    let n = lap.n();
    let h_minus_1 = fc.n_constraints();
    if cfg.k > n - h_minus_1 {
        return Err(Error::InvalidK {
            k: cfg.k,
            n: n - h_minus_1,
        });
    }
    if fc.is_empty() {
        // The operator degenerates to the normalized Laplacian itself.
        return smallest_eigs(&lap.normalized, cfg, 2.0);
    }

    let sigma = sigma_override.unwrap_or_else(|| choose_shift(lap));
    let op = ShiftedProjectedOperator::new(&lap.normalized, fc, sigma)?;
    let projector = Projector::new(fc);

    // Start in the feasible subspace; correctness does not depend on it,
    // but it keeps early iterations away from the shifted block.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let start = projector.project(&raw);
    let mut inner_cfg = cfg.clone();
    inner_cfg.start_vector = Some(start);

    let result = smallest_eigs(&op, &inner_cfg, op.spectrum_upper_bound())?;

    let guard = sigma * (1.0 - cfg.tol);
    if let Some(&worst) = result.eigenvalues.iter().find(|&&l| l >= guard) {
        return Err(Error::ShiftTooSmall {
            sigma,
            detail: format!(
                "returned eigenvalue {worst:.6e} reaches the deflated block; \
                 raise sigma above the k-th wanted eigenvalue"
            ),
        });
    }
    let ctx = fc.scaled.transpose_times(&result.eigenvectors);
    let leak = ctx.frobenius_norm();
    let xnorm = result.eigenvectors.frobenius_norm();
    if leak > 1e-8 * xnorm {
        return Err(Error::ShiftTooSmall {
            sigma,
            detail: format!(
                "eigenvectors leak into the constraint range (|C^T X| = {leak:.3e}); \
                 the shifted block is not separated"
            ),
        });
    }
    Ok(result)
}

/// Dense guard for the reduced-nullspace reference path.
pub const VARIANT_ORACLE_GUARD: usize = 2000;

/// Dense reference: build an orthonormal nullspace basis `V` of the scaled
/// constraint, reduce the normalized Laplacian onto it, solve densely, and
/// lift the eigenvectors back. Test oracle and cross-check path.
pub fn variant_oracle_eigs(
    lap: &LaplacianPair,
    fc: &FairnessConstraint,
    k: usize,
) -> Result<EigResult> {
    let n = lap.n();
    if n > VARIANT_ORACLE_GUARD {
        return Err(Error::TooLargeForDense {
            n,
            guard: VARIANT_ORACLE_GUARD,
        });
    }
    let reduced_dim = n - fc.n_constraints();
    if k > reduced_dim {
        return Err(Error::InvalidK { k, n: reduced_dim });
    }

    let v = crate::dense::qr(&fc.scaled)?.complement_basis();
    let lv_full = lap.normalized.spmm(&v)?;
    let mut reduced = v.transpose_times(&lv_full);
    symmetrize(&mut reduced);
    let (vals, vecs) = symmetric_eig(&reduced)?;

    let y_k = vecs.select_columns(&(0..k).collect::<Vec<_>>());
    let eigenvectors = v.matmul(&y_k);
    let eigenvalues: Vec<f64> = vals[..k].to_vec();

    let mut residuals = Vec::with_capacity(k);
    for j in 0..k {
        let ry = reduced.matvec(y_k.col(j));
        let mut r = 0.0;
        for (i, &v) in ry.iter().enumerate() {
            r += (v - eigenvalues[j] * y_k.get(i, j)).powi(2);
        }
        residuals.push(r.sqrt());
    }

    Ok(EigResult {
        eigenvalues,
        eigenvectors,
        residuals,
        iterations: 0,
        restarts: 0,
        matvec_count: 0,
        residual_history: Vec::new(),
    })
}

/// Dense fair baseline: nullspace basis of the raw constraint, matrix
/// square root of the reduced degree matrix, dense eigensolve, and the
/// clustering-ready vectors `Z Q^{-1} X`.
pub fn fairsc_dense_pipeline(
    lap: &LaplacianPair,
    fc: &FairnessConstraint,
    k: usize,
    dense_guard: usize,
) -> Result<EigResult> {
    let n = lap.n();
    if n > dense_guard {
        return Err(Error::TooLargeForDense { n, guard: dense_guard });
    }
    let reduced_dim = n - fc.n_constraints();
    if k > reduced_dim {
        return Err(Error::InvalidK { k, n: reduced_dim });
    }

    let z = crate::dense::qr(&fc.raw)?.complement_basis();
    let degrees = lap.degrees();

    let mut dz = z.clone();
    dz.scale_rows(&degrees);
    let mut ztdz = z.transpose_times(&dz);
    symmetrize(&mut ztdz);

    let (dvals, dvecs) = symmetric_eig(&ztdz)?;
    let dmax = dvals.last().copied().unwrap_or(0.0);
    if let Some((i, &val)) = dvals
        .iter()
        .enumerate()
        .find(|&(_, &val)| val <= dmax.abs() * 1e-13)
    {
        return Err(Error::NotPositiveDefinite {
            index: i,
            pivot: val,
        });
    }
    let inv_scales: Vec<f64> = dvals.iter().map(|v| 1.0 / v.sqrt()).collect();
    let mut w = dvecs.clone();
    w.scale_columns(&inv_scales);
    let q_inv = w.matmul(&dvecs.transpose());

    let lz = lap.laplacian.spmm(&z)?;
    let ztlz = z.transpose_times(&lz);
    let mut m = q_inv.transpose_times(&ztlz).matmul(&q_inv);
    symmetrize(&mut m);

    let (vals, vecs) = symmetric_eig(&m)?;
    let x_k = vecs.select_columns(&(0..k).collect::<Vec<_>>());
    let eigenvalues: Vec<f64> = vals[..k].to_vec();

    let mut residuals = Vec::with_capacity(k);
    for j in 0..k {
        let mx = m.matvec(x_k.col(j));
        let mut r = 0.0;
        for (i, &v) in mx.iter().enumerate() {
            r += (v - eigenvalues[j] * x_k.get(i, j)).powi(2);
        }
        residuals.push(r.sqrt());
    }

    let embedding = z.matmul(&q_inv.matmul(&x_k));
    Ok(EigResult {
        eigenvalues,
        eigenvectors: embedding,
        residuals,
        iterations: 0,
        restarts: 0,
        matvec_count: 0,
        residual_history: Vec::new(),
    })
}

fn symmetrize(a: &mut DenseMatrix) {
    let n = a.n_rows();
    for j in 0..n {
        for i in 0..j {
            let v = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
}

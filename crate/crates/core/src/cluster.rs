//! Hard cluster assignments, k-means on embedding rows, and the three
//! end-to-end pipelines (plain, dense fair baseline, scalable fair).

use crate::dense::DenseMatrix;
use crate::eigen::{fairsc_dense_pipeline, sfairsc_eigs, smallest_eigs, LanczosConfig};
use crate::error::{Error, Result};
use crate::graph::{build_fairness_constraint, build_laplacians, GroupPartition, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Hard assignment of n vertices to k clusters. Clusters may be empty
/// (k-means edge cases); metrics handle that downstream.
#[derive(Debug, Clone)]
pub struct Clustering {
    n: usize,
    k: usize,
    assignment: Vec<usize>,
    pub embedding: Option<DenseMatrix>,
}

impl Clustering {
    pub fn from_assignment(assignment: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidK {
                k,
                n: assignment.len(),
            });
        }
        if let Some(&bad) = assignment.iter().find(|&&c| c >= k) {
            return Err(Error::InvalidInput(format!(
                "cluster id {bad} out of range for k = {k}"
            )));
        }
        Ok(Self {
            n: assignment.len(),
            k,
            assignment,
            embedding: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Raw 0/1 indicator matrix, one column per cluster.
    pub fn indicator(&self) -> DenseMatrix {
        let mut h = DenseMatrix::zeros(self.n, self.k);
        for (i, &c) in self.assignment.iter().enumerate() {
            h.set(i, c, 1.0);
        }
        h
    }

    /// Indicator with each column scaled by the inverse square root of the
    /// cluster volume (sum of degrees). Errors on a zero-volume cluster.
    pub fn scaled_indicator(&self, degrees: &[f64]) -> Result<DenseMatrix> {
        if degrees.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: degrees.len(),
            });
        }
        let mut volumes = vec![0.0f64; self.k];
        for (i, &c) in self.assignment.iter().enumerate() {
            volumes[c] += degrees[i];
        }
        if let Some(cl) = volumes.iter().position(|&v| v <= 0.0) {
            return Err(Error::ZeroVolumeCluster { cluster: cl });
        }
        let mut h = self.indicator();
        let factors: Vec<f64> = volumes.iter().map(|v| 1.0 / v.sqrt()).collect();
        h.scale_columns(&factors);
        Ok(h)
    }

    /// Applies a label permutation: new label = perm[old label].
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: perm.len(),
            });
        }
        let assignment = self.assignment.iter().map(|&c| perm[c]).collect();
        Self::from_assignment(assignment, self.k)
    }
}

/// Lloyd iteration parameters with k-means++ seeding and restarts.
#[derive(Debug, Clone)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iters: usize,
    pub n_restarts: usize,
    pub seed: u64,
    /// Absolute tolerance on the largest centroid movement.
    pub tol: f64,
}

impl KMeansConfig {
    pub fn for_k(k: usize) -> Self {
        Self {
            k,
            max_iters: 100,
            n_restarts: 10,
            seed: 1,
            tol: 1e-10,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// k-means over the rows of a dense matrix: k-means++ seeding, Lloyd
/// iterations, best of `n_restarts` by within-cluster sum of squares.
/// Deterministic for a fixed seed regardless of thread count.
pub fn kmeans(rows: &DenseMatrix, cfg: &KMeansConfig) -> Result<Clustering> {
    let n = rows.n_rows();
    let d = rows.n_cols();
    if cfg.k == 0 || cfg.k > n {
        return Err(Error::InvalidK { k: cfg.k, n });
    }
    if cfg.n_restarts == 0 {
        return Err(Error::InvalidInput("n_restarts must be at least 1".into()));
    }
    // Row-major points for cache-friendly distance loops.
    let mut points = vec![0.0f64; n * d];
    for j in 0..d {
        let col = rows.col(j);
        for i in 0..n {
            points[i * d + j] = col[i];
        }
    }

    let run = |r: usize| -> (Vec<usize>, f64) {
        let seed = cfg
            .seed
            .wrapping_add((r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        lloyd(&points, n, d, cfg.k, cfg.max_iters, cfg.tol, seed)
    };

    #[cfg(feature = "parallel")]
    let outcomes: Vec<(Vec<usize>, f64)> = (0..cfg.n_restarts).into_par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<(Vec<usize>, f64)> = (0..cfg.n_restarts).map(run).collect();

    // Ties break toward the earlier restart, so parallel and sequential
    // executions select the same outcome.
    let mut best = 0usize;
    for r in 1..outcomes.len() {
        if outcomes[r].1 < outcomes[best].1 {
            best = r;
        }
    }
    let assignment = outcomes.into_iter().nth(best).unwrap().0;
    Clustering::from_assignment(assignment, cfg.k)
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let diff = x - y;
        acc += diff * diff;
    }
    acc
}

fn lloyd(
    points: &[f64],
    n: usize,
    d: usize,
    k: usize,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> (Vec<usize>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |i: usize| &points[i * d..(i + 1) * d];

    // k-means++ seeding.
    let mut centroids = vec![0.0f64; k * d];
    let first = rng.random_range(0..n);
    centroids[..d].copy_from_slice(point(first));
    let mut dist2: Vec<f64> = (0..n)
        .map(|i| squared_distance(point(i), &centroids[..d]))
        .collect();
    for c in 1..k {
        let total: f64 = dist2.iter().sum();
        let chosen = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = n - 1;
            for (i, &d2) in dist2.iter().enumerate() {
                acc += d2;
                if acc >= target {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            rng.random_range(0..n)
        };
        centroids[c * d..(c + 1) * d].copy_from_slice(point(chosen));
        for i in 0..n {
            let d2 = squared_distance(point(i), &centroids[c * d..(c + 1) * d]);
            if d2 < dist2[i] {
                dist2[i] = d2;
            }
        }
    }

    let assign = |centroids: &[f64], assignment: &mut [usize]| {
        let body = |i: usize| {
            let p = point(i);
            let mut best = 0usize;
            let mut best_d = squared_distance(p, &centroids[..d]);
            for c in 1..k {
                let d2 = squared_distance(p, &centroids[c * d..(c + 1) * d]);
                if d2 < best_d {
                    best_d = d2;
                    best = c;
                }
            }
            best
        };
        #[cfg(feature = "parallel")]
        if n * d * k >= 1 << 16 {
            assignment
                .par_iter_mut()
                .enumerate()
                .for_each(|(i, a)| *a = body(i));
            return;
        }
        for (i, a) in assignment.iter_mut().enumerate() {
            *a = body(i);
        }
    };

    let objective = |centroids: &[f64], assignment: &[usize]| -> f64 {
        let mut acc = 0.0;
        for (i, &c) in assignment.iter().enumerate() {
            acc += squared_distance(point(i), &centroids[c * d..(c + 1) * d]);
        }
        acc
    };

    let mut assignment = vec![0usize; n];
    let mut prev_objective = f64::INFINITY;
    for _iter in 0..max_iters {
        assign(&centroids, &mut assignment);
        let obj = objective(&centroids, &assignment);
        // Lloyd never increases the objective; centroid relocation for an
        // empty cluster keeps this property (the moved centroid serves no
        // points under the current assignment).
        assert!(
            obj <= prev_objective * (1.0 + 1e-12) + 1e-300,
            "k-means objective increased: {prev_objective} -> {obj}"
        );
        prev_objective = obj;

        // Update step.
        let mut sums = vec![0.0f64; k * d];
        let mut counts = vec![0usize; k];
        for (i, &c) in assignment.iter().enumerate() {
            counts[c] += 1;
            let p = point(i);
            for (s, &v) in sums[c * d..(c + 1) * d].iter_mut().zip(p) {
                *s += v;
            }
        }
        let mut new_centroids = centroids.clone();
        for c in 0..k {
            if counts[c] > 0 {
                for j in 0..d {
                    new_centroids[c * d + j] = sums[c * d + j] / counts[c] as f64;
                }
            }
        }
        // Empty-cluster repair: relocate to the point farthest from its
        // assigned centroid, one point per empty cluster.
        let mut claimed = vec![false; n];
        for c in 0..k {
            if counts[c] == 0 {
                let mut far_i = 0usize;
                let mut far_d = -1.0;
                for i in 0..n {
                    if claimed[i] {
                        continue;
                    }
                    let a = assignment[i];
                    let d2 = squared_distance(point(i), &new_centroids[a * d..(a + 1) * d]);
                    if d2 > far_d {
                        far_d = d2;
                        far_i = i;
                    }
                }
                claimed[far_i] = true;
                new_centroids[c * d..(c + 1) * d].copy_from_slice(point(far_i));
            }
        }

        let mut movement: f64 = 0.0;
        for c in 0..k {
            movement = movement.max(
                squared_distance(
                    &centroids[c * d..(c + 1) * d],
                    &new_centroids[c * d..(c + 1) * d],
                )
                .sqrt(),
            );
        }
        centroids = new_centroids;
        if movement <= tol {
            break;
        }
    }
    assign(&centroids, &mut assignment);
    let wcss = objective(&centroids, &assignment);
    (assignment, wcss)
}

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

/// Shared pipeline configuration; one seed drives the eigensolver start
/// vector and the k-means restarts.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub eig_tol: f64,
    pub max_basis: Option<usize>,
    pub max_restarts: usize,
    pub seed: u64,
    pub kmeans_restarts: usize,
    pub kmeans_max_iters: usize,
    pub sigma_override: Option<f64>,
    pub dense_guard: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            eig_tol: 1e-8,
            max_basis: None,
            max_restarts: 300,
            seed: 7,
            kmeans_restarts: 10,
            kmeans_max_iters: 100,
            sigma_override: None,
            dense_guard: 3000,
        }
    }
}

impl PipelineConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn lanczos(&self, k: usize) -> LanczosConfig {
        let mut cfg = LanczosConfig::for_k(k)
            .with_seed(self.seed)
            .with_tol(self.eig_tol);
        if let Some(mb) = self.max_basis {
            cfg.max_basis = mb;
        }
        cfg.max_restarts = self.max_restarts;
        cfg
    }

    fn kmeans(&self, k: usize) -> KMeansConfig {
        KMeansConfig {
            k,
            max_iters: self.kmeans_max_iters,
            n_restarts: self.kmeans_restarts,
            seed: self.seed,
            tol: 1e-10,
        }
    }
}

/// Wall-clock seconds per pipeline phase.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseTimings {
    pub build_secs: f64,
    pub eigs_secs: f64,
    pub kmeans_secs: f64,
}

impl PhaseTimings {
    pub fn total_secs(&self) -> f64 {
        self.build_secs + self.eigs_secs + self.kmeans_secs
    }
}

/// One pipeline invocation: the clustering plus solver accounting.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub clustering: Clustering,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub timings: PhaseTimings,
    pub matvec_count: usize,
    pub restarts: usize,
    pub sigma: Option<f64>,
}

/// Plain spectral clustering: k smallest eigenpairs of the normalized
/// Laplacian, embedding rescaled by the inverse square-root degrees,
/// k-means on the rows.
pub fn sc(g: &WeightedGraph, k: usize, cfg: &PipelineConfig) -> Result<PipelineRun> {
    let t0 = Instant::now();
    let lap = build_laplacians(g)?;
    let build_secs = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let eig = smallest_eigs(&lap.normalized, &cfg.lanczos(k), 2.0)?;
    let eigs_secs = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let mut embedding = eig.eigenvectors;
    embedding.scale_rows(&lap.inv_sqrt_degrees);
    let mut clustering = kmeans(&embedding, &cfg.kmeans(k))?;
    clustering.embedding = Some(embedding);
    let kmeans_secs = t2.elapsed().as_secs_f64();

    Ok(PipelineRun {
        clustering,
        eigenvalues: eig.eigenvalues,
        residuals: eig.residuals,
        timings: PhaseTimings {
            build_secs,
            eigs_secs,
            kmeans_secs,
        },
        matvec_count: eig.matvec_count,
        restarts: eig.restarts,
        sigma: None,
    })
}

/// Scalable fair spectral clustering: matrix-free deflated operator.
pub fn sfairsc(
    g: &WeightedGraph,
    p: &GroupPartition,
    k: usize,
    cfg: &PipelineConfig,
) -> Result<PipelineRun> {
    let t0 = Instant::now();
    let lap = build_laplacians(g)?;
    let fc = build_fairness_constraint(p, &lap)?;
    let sigma = if fc.is_empty() {
        None
    } else {
        Some(
            cfg.sigma_override
                .unwrap_or_else(|| crate::operator::choose_shift(&lap)),
        )
    };
    let build_secs = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let eig = sfairsc_eigs(&lap, &fc, &cfg.lanczos(k), cfg.sigma_override)?;
    let eigs_secs = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let mut embedding = eig.eigenvectors;
    embedding.scale_rows(&lap.inv_sqrt_degrees);
    let mut clustering = kmeans(&embedding, &cfg.kmeans(k))?;
    clustering.embedding = Some(embedding);
    let kmeans_secs = t2.elapsed().as_secs_f64();

    Ok(PipelineRun {
        clustering,
        eigenvalues: eig.eigenvalues,
        residuals: eig.residuals,
        timings: PhaseTimings {
            build_secs,
            eigs_secs,
            kmeans_secs,
        },
        matvec_count: eig.matvec_count,
        restarts: eig.restarts,
        sigma,
    })
}

/// Dense fair baseline: nullspace basis, matrix square root, dense
/// eigensolve; k-means runs directly on the recovered rows.
pub fn fairsc(
    g: &WeightedGraph,
    p: &GroupPartition,
    k: usize,
    cfg: &PipelineConfig,
) -> Result<PipelineRun> {
    let t0 = Instant::now();
    let lap = build_laplacians(g)?;
    let fc = build_fairness_constraint(p, &lap)?;
    let build_secs = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let eig = fairsc_dense_pipeline(&lap, &fc, k, cfg.dense_guard)?;
    let eigs_secs = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let embedding = eig.eigenvectors;
    let mut clustering = kmeans(&embedding, &cfg.kmeans(k))?;
    clustering.embedding = Some(embedding);
    let kmeans_secs = t2.elapsed().as_secs_f64();

    Ok(PipelineRun {
        clustering,
        eigenvalues: eig.eigenvalues,
        residuals: eig.residuals,
        timings: PhaseTimings {
            build_secs,
            eigs_secs,
            kmeans_secs,
        },
        matvec_count: 0,
        restarts: 0,
        sigma: None,
    })
}

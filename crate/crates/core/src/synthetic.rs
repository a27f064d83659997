//! Random graph generators with planted ground truth: the stochastic block
//! model, its group-fair modification, and sparse random graphs for
//! scalability runs.
//!
//! All generators draw one uniform variate per vertex pair (i < j) in
//! row-major order from a seeded ChaCha8 stream, so instances are
//! bit-reproducible across platforms and never depend on whether an edge
//! materializes.

use crate::cluster::Clustering;
use crate::error::{Error, Result};
use crate::graph::{GroupPartition, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plain stochastic block model: k blocks, within/between edge
/// probabilities and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SbmSpec {
    pub block_sizes: Vec<usize>,
    pub within_prob: f64,
    pub between_prob: f64,
    pub within_weight: f64,
    pub between_weight: f64,
    pub seed: u64,
}

impl SbmSpec {
    fn validate(&self) -> Result<()> {
        if self.block_sizes.is_empty() || self.block_sizes.iter().any(|&u| u == 0) {
            return Err(Error::InvalidInput("block sizes must be positive".into()));
        }
        // Degenerate edges of the parameter space (b = 0, a = 1) are legal;
        // only the ordering is enforced.
        if !(self.within_prob > 0.0
            && self.within_prob <= 1.0
            && self.between_prob >= 0.0
            && self.between_prob <= self.within_prob)
        {
            return Err(Error::InvalidInput(format!(
                "need 0 <= between_prob <= within_prob <= 1, got ({}, {})",
                self.within_prob, self.between_prob
            )));
        }
        if !(self.between_weight > 0.0 && self.within_weight >= self.between_weight) {
            return Err(Error::InvalidInput(format!(
                "need within_weight >= between_weight > 0, got ({}, {})",
                self.within_weight, self.between_weight
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.block_sizes.iter().sum()
    }
}

/// Group-fair stochastic block model. `blocks[i][j]` counts the vertices
/// in cluster i that belong to group j; edge probabilities depend on
/// cluster and group co-membership, weights on cluster co-membership only.
#[derive(Debug, Clone, PartialEq)]
pub struct MsbmSpec {
    pub blocks: Vec<Vec<usize>>,
    /// Same cluster, same group.
    pub p_within_within: f64,
    /// Different clusters, same group.
    pub p_between_within: f64,
    /// Same cluster, different groups.
    pub p_within_between: f64,
    /// Different clusters, different groups.
    pub p_between_between: f64,
    pub within_weight: f64,
    pub between_weight: f64,
    pub seed: u64,
}

impl MsbmSpec {
    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.iter().sum::<usize>()).sum()
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn h(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.len())
    }

    fn validate(&self) -> Result<()> {
        let k = self.k();
        let h = self.h();
        if k == 0 || h == 0 {
            return Err(Error::InvalidInput("empty block vector".into()));
        }
        if self.blocks.iter().any(|b| b.len() != h) {
            return Err(Error::InvalidInput(
                "all blocks must list the same number of groups".into(),
            ));
        }
        let probs = [
            self.p_within_within,
            self.p_between_within,
            self.p_within_between,
            self.p_between_between,
        ];
        // Monotone non-increasing, positive, at most 1; equalities are
        // allowed so degenerate collapse cases remain expressible.
        if !(probs[0] <= 1.0
            && probs[0] >= probs[1]
            && probs[1] >= probs[2]
            && probs[2] >= probs[3]
            && probs[3] > 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "need 1 >= a >= b >= c >= d > 0, got {probs:?}"
            )));
        }
        if !(self.between_weight > 0.0 && self.within_weight >= self.between_weight) {
            return Err(Error::InvalidInput(format!(
                "need within_weight >= between_weight > 0, got ({}, {})",
                self.within_weight, self.between_weight
            )));
        }
        let n = self.n();
        let cluster_sizes: Vec<usize> = self.blocks.iter().map(|b| b.iter().sum()).collect();
        let group_sizes: Vec<usize> = (0..h)
            .map(|j| self.blocks.iter().map(|b| b[j]).sum())
            .collect();
        if cluster_sizes.iter().any(|&c| c == 0) {
            return Err(Error::InvalidInput("empty cluster block".into()));
        }
        if let Some(j) = group_sizes.iter().position(|&g| g == 0) {
            return Err(Error::EmptyGroup { group: j });
        }
        // Exact fair-block condition in integer arithmetic:
        // u_i^(j) / |C_i| == |V_j| / n  <=>  u_i^(j) * n == |V_j| * |C_i|.
        for (i, block) in self.blocks.iter().enumerate() {
            for (j, &u) in block.iter().enumerate() {
                if u * n != group_sizes[j] * cluster_sizes[i] {
                    return Err(Error::FairBlockViolation {
                        cluster: i,
                        group: j,
                    });
                }
            }
        }
        Ok(())
    }
}

/// A generated graph with its planted clustering and group partition.
#[derive(Debug, Clone)]
pub struct SyntheticInstance {
    pub graph: WeightedGraph,
    pub ground_truth: Clustering,
    pub groups: GroupPartition,
}

/// Generates a plain SBM instance; the group partition is trivial.
pub fn generate_sbm(spec: &SbmSpec) -> Result<SyntheticInstance> {
    spec.validate()?;
    let n = spec.n();
    let mut truth = Vec::with_capacity(n);
    for (cluster, &size) in spec.block_sizes.iter().enumerate() {
        truth.extend(std::iter::repeat_n(cluster, size));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let same = truth[i] == truth[j];
            let p = if same { spec.within_prob } else { spec.between_prob };
            let draw = rng.random::<f64>();
            if draw < p {
                let w = if same { spec.within_weight } else { spec.between_weight };
                edges.push((i, j, w));
            }
        }
    }
    let graph = WeightedGraph::from_undirected_edges(n, &edges)?;
    Ok(SyntheticInstance {
        graph,
        ground_truth: Clustering::from_assignment(truth, spec.block_sizes.len())?,
        groups: GroupPartition::trivial(n),
    })
}

/// Generates a group-fair SBM instance. Vertices are laid out cluster by
/// cluster, groups in order within each cluster, so the planted indicator
/// structure is reproducible.
pub fn generate_msbm(spec: &MsbmSpec) -> Result<SyntheticInstance> {
    spec.validate()?;
    let n = spec.n();
    let k = spec.k();
    let h = spec.h();
    let mut truth = Vec::with_capacity(n);
    let mut membership = Vec::with_capacity(n);
    for (cluster, block) in spec.blocks.iter().enumerate() {
        for (group, &count) in block.iter().enumerate() {
            for _ in 0..count {
                truth.push(cluster);
                membership.push(group);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let same_cluster = truth[i] == truth[j];
            let same_group = membership[i] == membership[j];
            let p = match (same_cluster, same_group) {
                (true, true) => spec.p_within_within,
                (false, true) => spec.p_between_within,
                (true, false) => spec.p_within_between,
                (false, false) => spec.p_between_between,
            };
            let draw = rng.random::<f64>();
            if draw < p {
                let w = if same_cluster {
                    spec.within_weight
                } else {
                    spec.between_weight
                };
                edges.push((i, j, w));
            }
        }
    }
    let graph = WeightedGraph::from_undirected_edges(n, &edges)?;
    Ok(SyntheticInstance {
        graph,
        ground_truth: Clustering::from_assignment(truth, k)?,
        groups: GroupPartition::new(h, membership)?,
    })
}

/// Builds the experiment spec used throughout the sweeps: equal fair
/// blocks of size n/(k h) and probabilities `scales * (ln n / n)^(2/3)`,
/// clamped to 1.
pub fn msbm_spec_for_experiment(
    n: usize,
    k: usize,
    h: usize,
    prob_scales: [f64; 4],
    weights: (f64, f64),
    seed: u64,
) -> Result<MsbmSpec> {
    if k == 0 || h == 0 || n == 0 || n % (k * h) != 0 {
        return Err(Error::IndivisibleSize { n, k, h });
    }
    let q = n / (k * h);
    let base = ((n as f64).ln() / n as f64).powf(2.0 / 3.0);
    let p: Vec<f64> = prob_scales.iter().map(|s| (s * base).min(1.0)).collect();
    let spec = MsbmSpec {
        blocks: vec![vec![q; h]; k],
        p_within_within: p[0],
        p_between_within: p[1],
        p_within_between: p[2],
        p_between_between: p[3],
        within_weight: weights.0,
        between_weight: weights.1,
        seed,
    };
    spec.validate()?;
    Ok(spec)
}

/// Default probability multipliers for the experiment sweeps.
pub const EXPERIMENT_PROB_SCALES: [f64; 4] = [10.0, 7.0, 4.0, 1.0];

/// Default edge weights for the experiment sweeps. Chosen close to each
/// other so the group structure stays the dominant cut in the weighted
/// graph, which is what distinguishes the fair methods from plain
/// spectral clustering on these instances.
pub const EXPERIMENT_WEIGHTS: (f64, f64) = (1.2, 1.0);

/// Sparse random graph with roughly `avg_degree` neighbors per vertex and
/// uniform random weights; every vertex draws at least one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomGraphSpec {
    pub n: usize,
    pub avg_degree: usize,
    pub seed: u64,
}

pub fn generate_random_graph(spec: &RandomGraphSpec) -> Result<WeightedGraph> {
    if spec.n < 2 || spec.avg_degree == 0 {
        return Err(Error::InvalidInput(
            "random graph needs n >= 2 and avg_degree >= 1".into(),
        ));
    }
    let n = spec.n;
    let per_vertex = (spec.avg_degree / 2).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::with_capacity(n * per_vertex);
    for i in 0..n {
        for _ in 0..per_vertex {
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let w = rng.random_range(0.1..1.0);
            edges.push((i, j, w));
        }
    }
    WeightedGraph::from_undirected_edges(n, &edges)
}

/// Uniformly shuffled group labels with every group non-empty.
pub fn random_groups(n: usize, h: usize, seed: u64) -> Result<GroupPartition> {
    if h == 0 || h > n {
        return Err(Error::InvalidInput(format!(
            "cannot split {n} vertices into {h} groups"
        )));
    }
    let mut membership: Vec<usize> = (0..n).map(|i| i % h).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        membership.swap(i, j);
    }
    GroupPartition::new(h, membership)
}

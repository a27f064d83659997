//! Weighted graphs, Laplacians, group partitions, and the group-fairness
//! constraint matrices built from them.

use crate::cluster::Clustering;
use crate::dense::{cholesky_spd, qr, CholeskyFactor, DenseMatrix};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Undirected weighted graph with positive vertex degrees.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    adjacency: CsrMatrix,
    degrees: Vec<f64>,
}

impl WeightedGraph {
    /// Wraps a symmetric adjacency matrix with zero diagonal.
    pub fn from_adjacency(adjacency: CsrMatrix) -> Result<Self> {
        let n = adjacency.n_rows();
        if adjacency.n_cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: adjacency.n_cols(),
            });
        }
        for i in 0..n {
            let (cols, vals) = adjacency.row(i);
            for (&j, &w) in cols.iter().zip(vals) {
                if i == j {
                    return Err(Error::InvalidInput(format!(
                        "self-loop stored at vertex {i}"
                    )));
                }
                if w < 0.0 || !w.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "edge ({i}, {j}) has invalid weight {w}"
                    )));
                }
            }
        }
        if !adjacency.is_symmetric() {
            return Err(Error::InvalidInput(
                "adjacency matrix is not symmetric".into(),
            ));
        }
        let degrees: Vec<f64> = (0..n).map(|i| adjacency.row(i).1.iter().sum()).collect();
        if let Some(v) = degrees.iter().position(|&d| d <= 0.0) {
            return Err(Error::IsolatedVertex { vertex: v });
        }
        Ok(Self {
            n,
            adjacency,
            degrees,
        })
    }

    /// Builds from an undirected edge list; each edge is mirrored, and
    /// repeated edges are summed.
    pub fn from_undirected_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut triplets = Vec::with_capacity(edges.len() * 2);
        for &(u, v, w) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            triplets.push((u, v, w));
            triplets.push((v, u, w));
        }
        Self::from_adjacency(CsrMatrix::from_triplets(n, n, &triplets)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &CsrMatrix {
        &self.adjacency
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.nnz() / 2
    }
}

/// Laplacian `L = D - W` and its symmetric normalization, kept sparse.
#[derive(Debug, Clone)]
pub struct LaplacianPair {
    pub laplacian: CsrMatrix,
    pub normalized: CsrMatrix,
    pub inv_sqrt_degrees: Vec<f64>,
}

/// Builds `L = D - W` and `L_n = D^{-1/2} L D^{-1/2}` with per-entry
/// scaling; the normalized diagonal is exactly 1.
pub fn build_laplacians(g: &WeightedGraph) -> Result<LaplacianPair> {
    let n = g.n();
    let inv_sqrt_degrees: Vec<f64> = g.degrees().iter().map(|d| 1.0 / d.sqrt()).collect();

    let mut lap_triplets = Vec::with_capacity(g.adjacency().nnz() + n);
    let mut norm_triplets = Vec::with_capacity(g.adjacency().nnz() + n);
    for i in 0..n {
        let (cols, vals) = g.adjacency().row(i);
        for (&j, &w) in cols.iter().zip(vals) {
            lap_triplets.push((i, j, -w));
            norm_triplets.push((i, j, -w * inv_sqrt_degrees[i] * inv_sqrt_degrees[j]));
        }
        lap_triplets.push((i, i, g.degrees()[i]));
        norm_triplets.push((i, i, 1.0));
    }
    Ok(LaplacianPair {
        laplacian: CsrMatrix::from_triplets(n, n, &lap_triplets)?,
        normalized: CsrMatrix::from_triplets(n, n, &norm_triplets)?,
        inv_sqrt_degrees,
    })
}

impl LaplacianPair {
    pub fn n(&self) -> usize {
        self.laplacian.n_rows()
    }

    /// Vertex degrees, read back off the Laplacian diagonal.
    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.laplacian.get(i, i)).collect()
    }
}

/// Partition of the vertices into h non-empty groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPartition {
    n: usize,
    h: usize,
    membership: Vec<usize>,
}

impl GroupPartition {
    pub fn new(h: usize, membership: Vec<usize>) -> Result<Self> {
        let n = membership.len();
        if h == 0 || n == 0 {
            return Err(Error::InvalidInput("empty partition".into()));
        }
        let mut counts = vec![0usize; h];
        for (i, &g) in membership.iter().enumerate() {
            if g >= h {
                return Err(Error::InvalidInput(format!(
                    "vertex {i} has group id {g} >= h = {h}"
                )));
            }
            counts[g] += 1;
        }
        if let Some(g) = counts.iter().position(|&c| c == 0) {
            return Err(Error::EmptyGroup { group: g });
        }
        Ok(Self { n, h, membership })
    }

    /// All vertices in one group.
    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            h: 1,
            membership: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.h];
        for &g in &self.membership {
            counts[g] += 1;
        }
        counts
    }
}

/// Group indicator matrix: one row per vertex with a single 1 in the
/// column of its group.
pub fn build_group_indicator(p: &GroupPartition) -> DenseMatrix {
    let mut g = DenseMatrix::zeros(p.n(), p.h());
    for (i, &s) in p.membership().iter().enumerate() {
        g.set(i, s, 1.0);
    }
    g
}

/// The linear fairness constraint.
///
/// `raw` holds the first h-1 columns of `G - 1 z^T` (acting on raw cluster
/// indicators); `scaled` is the degree-scaled version acting on the
/// normalized coordinates. The Gram factor of `scaled` backs the
/// least-squares projector.
#[derive(Debug, Clone)]
pub struct FairnessConstraint {
    pub raw: DenseMatrix,
    pub scaled: DenseMatrix,
    gram_factor: Option<CholeskyFactor>,
    pub group_fractions: Vec<f64>,
}

impl FairnessConstraint {
    pub fn n(&self) -> usize {
        self.raw.n_rows()
    }

    /// Number of constraint columns (h - 1).
    pub fn n_constraints(&self) -> usize {
        self.raw.n_cols()
    }

    pub fn is_empty(&self) -> bool {
        self.n_constraints() == 0
    }

    pub fn gram_factor(&self) -> Option<&CholeskyFactor> {
        self.gram_factor.as_ref()
    }
}

/// Builds the fairness constraint from a partition, dropping the last
/// column of the centered group indicator (any h-1 columns span the same
/// space). For h = 1 the constraint is empty.
pub fn build_fairness_constraint(
    p: &GroupPartition,
    lap: &LaplacianPair,
) -> Result<FairnessConstraint> {
    let n = p.n();
    if lap.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: lap.n(),
        });
    }
    let h = p.h();
    let sizes = p.group_sizes();
    let group_fractions: Vec<f64> = sizes.iter().map(|&c| c as f64 / n as f64).collect();

    let mut raw = DenseMatrix::zeros(n, h.saturating_sub(1));
    for (i, &g) in p.membership().iter().enumerate() {
        for s in 0..h.saturating_sub(1) {
            let indicator = if g == s { 1.0 } else { 0.0 };
            raw.set(i, s, indicator - group_fractions[s]);
        }
    }

    if h > 1 {
        // Non-overlapping partitions always give full column rank; the QR
        // diagonal check guards against malformed inputs.
        let f = qr(&raw)?;
        let threshold = 1e-10 * raw.frobenius_norm();
        if f.numerical_rank(threshold) != h - 1 {
            return Err(Error::RankDeficientConstraint);
        }
    }

    let mut scaled = raw.clone();
    scaled.scale_rows(&lap.inv_sqrt_degrees);

    let gram_factor = if h > 1 {
        let gram = scaled.transpose_times(&scaled);
        match cholesky_spd(&gram) {
            Ok(fct) => Some(fct),
            Err(Error::NotPositiveDefinite { .. }) => {
                return Err(Error::RankDeficientConstraint)
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    Ok(FairnessConstraint {
        raw,
        scaled,
        gram_factor,
        group_fractions,
    })
}

/// Result of checking exact group fairness of a clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct FairnessCheck {
    pub exactly_fair: bool,
    /// Max over (group, non-empty cluster) of the deviation between the
    /// in-cluster group fraction and the global group fraction.
    pub max_deviation: f64,
    pub has_empty_cluster: bool,
}

/// Checks statistical parity: each non-empty cluster must contain every
/// group in its global proportion. Exactness is decided in integer
/// arithmetic.
pub fn check_group_fairness(clustering: &Clustering, p: &GroupPartition) -> Result<FairnessCheck> {
    let n = p.n();
    if clustering.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: clustering.n(),
        });
    }
    let h = p.h();
    let k = clustering.k();
    let mut counts = vec![vec![0usize; k]; h];
    for (i, &c) in clustering.assignment().iter().enumerate() {
        counts[p.membership()[i]][c] += 1;
    }
    let group_sizes = p.group_sizes();
    let cluster_sizes = clustering.cluster_sizes();

    let mut max_deviation = 0.0f64;
    let mut exactly_fair = true;
    let mut has_empty_cluster = false;
    for (l, &cl_size) in cluster_sizes.iter().enumerate() {
        if cl_size == 0 {
            has_empty_cluster = true;
            continue;
        }
        for (s, &gr_size) in group_sizes.iter().enumerate() {
            if counts[s][l] * n != gr_size * cl_size {
                exactly_fair = false;
            }
            let dev =
                (counts[s][l] as f64 / cl_size as f64 - gr_size as f64 / n as f64).abs();
            max_deviation = max_deviation.max(dev);
        }
    }
    Ok(FairnessCheck {
        exactly_fair,
        max_deviation,
        has_empty_cluster,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::symmetric_eig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single_edge_graph() -> WeightedGraph {
        WeightedGraph::from_undirected_edges(2, &[(0, 1, 1.0)]).unwrap()
    }

    fn random_graph(n: usize, p_edge: f64, seed: u64) -> WeightedGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random::<f64>() < p_edge {
                        edges.push((i, j, rng.random_range(0.1..2.0)));
                    }
                }
            }
            if let Ok(g) = WeightedGraph::from_undirected_edges(n, &edges) {
                return g;
            }
        }
    }

    fn random_partition(n: usize, h: usize, seed: u64) -> GroupPartition {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut membership: Vec<usize> = (0..n).map(|i| i % h).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            membership.swap(i, j);
        }
        GroupPartition::new(h, membership).unwrap()
    }

    #[test]
    fn single_edge_laplacians() {
        let g = single_edge_graph();
        let lap = build_laplacians(&g).unwrap();
        let expect = [[1.0, -1.0], [-1.0, 1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(lap.laplacian.get(i, j), expect[i][j]);
                assert_eq!(lap.normalized.get(i, j), expect[i][j]);
            }
        }
    }

    #[test]
    fn triangle_normalized_entries() {
        let g = WeightedGraph::from_undirected_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
            .unwrap();
        let lap = build_laplacians(&g).unwrap();
        for i in 0..3 {
            assert_eq!(lap.normalized.get(i, i), 1.0);
            for j in 0..3 {
                if i != j {
                    assert!((lap.normalized.get(i, j) + 0.5).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn laplacian_quadratic_form_oracle() {
        let g = random_graph(30, 0.3, 5);
        let lap = build_laplacians(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let x: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
        let lx = lap.laplacian.spmv(&x).unwrap();
        let quad: f64 = x.iter().zip(&lx).map(|(a, b)| a * b).sum();
        let mut oracle = 0.0;
        for i in 0..30 {
            let (cols, vals) = g.adjacency().row(i);
            for (&j, &w) in cols.iter().zip(vals) {
                if j > i {
                    oracle += w * (x[i] - x[j]).powi(2);
                }
            }
        }
        assert!((quad - oracle).abs() <= 1e-12 * oracle.abs().max(1.0));
    }

    #[test]
    fn laplacian_row_sums_vanish() {
        let g = random_graph(25, 0.4, 9);
        let lap = build_laplacians(&g).unwrap();
        let ones = vec![1.0; 25];
        let sums = lap.laplacian.spmv(&ones).unwrap();
        let max_d = g.degrees().iter().cloned().fold(0.0, f64::max);
        for s in sums {
            assert!(s.abs() <= 1e-12 * max_d);
        }
    }

    #[test]
    fn isolated_vertex_rejected() {
        let err = WeightedGraph::from_undirected_edges(3, &[(0, 1, 1.0)]);
        assert!(matches!(err, Err(Error::IsolatedVertex { vertex: 2 })));
    }

    #[test]
    fn group_indicator_small() {
        let p = GroupPartition::new(2, vec![0, 0, 1, 1]).unwrap();
        let g = build_group_indicator(&p);
        let expect = [[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]];
        for i in 0..4 {
            for j in 0..2 {
                assert_eq!(g.get(i, j), expect[i][j]);
            }
        }
    }

    #[test]
    fn group_indicator_single_group() {
        let p = GroupPartition::trivial(5);
        let g = build_group_indicator(&p);
        assert_eq!(g.n_cols(), 1);
        assert!(g.col(0).iter().all(|&v| v == 1.0));
    }

    /// Ten-vertex example with two equal groups interleaved across three
    /// clusters; the indicator columns must match the membership vectors.
    #[test]
    fn group_indicator_two_group_example() {
        let g1 = [1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0];
        let membership: Vec<usize> = g1.iter().map(|&v| if v == 1.0 { 0 } else { 1 }).collect();
        let p = GroupPartition::new(2, membership).unwrap();
        let g = build_group_indicator(&p);
        for i in 0..10 {
            assert_eq!(g.get(i, 0), g1[i]);
            assert_eq!(g.get(i, 1), 1.0 - g1[i]);
        }
    }

    #[test]
    fn constraint_two_even_groups() {
        let g = random_graph(4, 0.9, 3);
        let lap = build_laplacians(&g).unwrap();
        let p = GroupPartition::new(2, vec![0, 0, 1, 1]).unwrap();
        let fc = build_fairness_constraint(&p, &lap).unwrap();
        assert_eq!(fc.group_fractions, vec![0.5, 0.5]);
        assert_eq!(fc.n_constraints(), 1);
        let expect = [0.5, 0.5, -0.5, -0.5];
        for i in 0..4 {
            assert_eq!(fc.raw.get(i, 0), expect[i]);
        }
    }

    #[test]
    fn constraint_single_group_is_empty() {
        let g = single_edge_graph();
        let lap = build_laplacians(&g).unwrap();
        let fc = build_fairness_constraint(&GroupPartition::trivial(2), &lap).unwrap();
        assert!(fc.is_empty());
        assert_eq!(fc.raw.n_cols(), 0);
        assert_eq!(fc.scaled.n_cols(), 0);
        assert!(fc.gram_factor().is_none());
    }

    /// The constraint annihilates the indicator of an exactly fair
    /// clustering (two groups of five spread evenly over three clusters).
    #[test]
    fn constraint_annihilates_fair_indicator() {
        let membership = vec![0, 0, 1, 1, 0, 0, 1, 1, 0, 1];
        let assignment = vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2];
        let g = random_graph(10, 0.8, 11);
        let lap = build_laplacians(&g).unwrap();
        let p = GroupPartition::new(2, membership).unwrap();
        let fc = build_fairness_constraint(&p, &lap).unwrap();
        let clustering = Clustering::from_assignment(assignment, 3).unwrap();
        let h_ind = clustering.indicator();
        let fth = fc.raw.transpose_times(&h_ind);
        assert!(fth.max_abs() < 1e-12);
        let check = check_group_fairness(&clustering, &p).unwrap();
        assert!(check.exactly_fair);
        assert_eq!(check.max_deviation, 0.0);
    }

    #[test]
    fn all_in_one_cluster_is_fair() {
        let p = GroupPartition::new(2, vec![0, 0, 0, 1, 1, 1, 1]).unwrap();
        let clustering = Clustering::from_assignment(vec![0; 7], 1).unwrap();
        let check = check_group_fairness(&clustering, &p).unwrap();
        assert!(check.exactly_fair);
    }

    /// Deviation computed from a 155-vertex two-group split shaped like a
    /// small social network: fractions 0.6528 vs global 0.4516.
    #[test]
    fn deviation_matches_table_arithmetic() {
        let n = 155;
        // groups: first 70 vertices in group 0, remaining 85 in group 1
        let membership: Vec<usize> = (0..n).map(|i| usize::from(i >= 70)).collect();
        let p = GroupPartition::new(2, membership).unwrap();
        // cluster 0: 47 from group 0 + 25 from group 1 (size 72)
        let mut assignment = vec![1usize; n];
        for a in assignment.iter_mut().take(47) {
            *a = 0;
        }
        for a in assignment.iter_mut().skip(70).take(25) {
            *a = 0;
        }
        let clustering = Clustering::from_assignment(assignment, 2).unwrap();
        let check = check_group_fairness(&clustering, &p).unwrap();
        assert!(!check.exactly_fair);
        assert!((check.max_deviation - 0.2012).abs() < 1e-4);
    }

    /// Exhaustive equivalence on small instances: the constraint matrix
    /// annihilates the raw indicator iff the clustering is exactly fair.
    #[test]
    fn constraint_iff_fair_exhaustive() {
        let cases: Vec<(usize, Vec<usize>)> = vec![
            (2, vec![0, 1, 0, 1]),
            (2, vec![0, 0, 0, 1, 1, 1]),
            (3, vec![0, 0, 1, 1, 2, 2]),
            (2, vec![0, 0, 1, 1, 0, 1, 0, 1]),
            (3, vec![0, 1, 2, 0, 1, 2, 0, 1]),
        ];
        for (h, membership) in cases {
            let n = membership.len();
            let g = random_graph(n, 0.9, n as u64);
            let lap = build_laplacians(&g).unwrap();
            let p = GroupPartition::new(h, membership).unwrap();
            let fc = build_fairness_constraint(&p, &lap).unwrap();
            for k in 2..=3usize {
                for code in 0..k.pow(n as u32) {
                    let mut assignment = vec![0usize; n];
                    let mut c = code;
                    for a in assignment.iter_mut() {
                        *a = c % k;
                        c /= k;
                    }
                    let clustering = Clustering::from_assignment(assignment, k).unwrap();
                    let h_ind = clustering.indicator();
                    let fth = fc.raw.transpose_times(&h_ind);
                    let annihilated = fth.max_abs() < 1e-12 * n as f64;
                    let check = check_group_fairness(&clustering, &p).unwrap();
                    assert_eq!(
                        annihilated, check.exactly_fair,
                        "h={h} k={k} code={code}"
                    );
                }
            }
        }
    }

    #[test]
    fn constraint_columns_sum_to_zero_and_full_rank() {
        for seed in 0..10u64 {
            let n = 12 + (seed as usize % 17);
            let h = 2 + (seed as usize % 3);
            let g = random_graph(n, 0.5, seed + 100);
            let lap = build_laplacians(&g).unwrap();
            let p = random_partition(n, h, seed);
            let fc = build_fairness_constraint(&p, &lap).unwrap();
            for s in 0..fc.n_constraints() {
                let col_sum: f64 = fc.raw.col(s).iter().sum();
                assert!(col_sum.abs() < 1e-12 * n as f64);
            }
            let f = qr(&fc.raw).unwrap();
            assert_eq!(
                f.numerical_rank(1e-10 * fc.raw.frobenius_norm()),
                h - 1
            );
        }
    }

    #[test]
    fn normalized_spectrum_within_bounds() {
        for seed in 0..5u64 {
            let n = 20 + 6 * seed as usize;
            let g = random_graph(n, 0.25, seed + 41);
            let lap = build_laplacians(&g).unwrap();
            let (vals, _) = symmetric_eig(&lap.normalized.to_dense()).unwrap();
            assert!(vals[0] > -1e-10, "lambda_min = {}", vals[0]);
            assert!(vals[n - 1] < 2.0 + 1e-10, "lambda_max = {}", vals[n - 1]);
        }
    }
}

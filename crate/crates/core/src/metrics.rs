//! Accuracy and fairness metrics: error rate under the optimal label
//! permutation, per-cluster balance, group-fraction tables, and the
//! normalized-cut objective value.

use crate::cluster::Clustering;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::graph::{GroupPartition, WeightedGraph};
use serde::Serialize;

/// Intersection counts between two labelings (rows x cols).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<usize>>,
}

impl ContingencyTable {
    pub fn new(
        row_labels: &[usize],
        col_labels: &[usize],
        n_rows: usize,
        n_cols: usize,
    ) -> Result<Self> {
        if row_labels.len() != col_labels.len() {
            return Err(Error::DimensionMismatch {
                expected: row_labels.len(),
                got: col_labels.len(),
            });
        }
        let mut counts = vec![vec![0usize; n_cols]; n_rows];
        for (&r, &c) in row_labels.iter().zip(col_labels) {
            counts[r][c] += 1;
        }
        Ok(Self { counts })
    }

    pub fn n_rows(&self) -> usize {
        self.counts.len()
    }

    pub fn n_cols(&self) -> usize {
        self.counts.first().map_or(0, |r| r.len())
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|r| r.iter().sum::<usize>()).sum()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.n_cols())
            .map(|c| self.counts.iter().map(|r| r[c]).sum())
            .collect()
    }
}

/// Minimum-cost perfect assignment on a square integer cost matrix
/// (Hungarian algorithm with potentials, O(n^3)). Returns the column
/// chosen for each row and the total cost.
pub fn min_cost_assignment(cost: &[Vec<i64>]) -> (Vec<usize>, i64) {
    let n = cost.len();
    assert!(n > 0 && cost.iter().all(|r| r.len() == n), "square matrix");
    const INF: i64 = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut matched_row = vec![0usize; n + 1]; // row matched to column j (1-based, 0 = none)
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    let mut total = 0i64;
    for j in 1..=n {
        let row = matched_row[j];
        if row > 0 {
            assignment[row - 1] = j - 1;
            total += cost[row - 1][j - 1];
        }
    }
    (assignment, total)
}

/// Error rate of a computed clustering against the ground truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRate {
    /// Squared-Frobenius indicator discrepancy under the best label
    /// permutation, divided by n. Twice the misclustered fraction.
    pub err: f64,
    /// Fraction of vertices whose matched label disagrees with the truth.
    pub misclustered_fraction: f64,
    /// Best permutation: computed label `c` maps to truth label `perm[c]`.
    #[serde(skip)]
    pub permutation: Vec<usize>,
}

/// Minimizes the indicator discrepancy over all label permutations via
/// optimal assignment on the contingency table; exact for any k.
pub fn error_rate(computed: &Clustering, truth: &Clustering) -> Result<ErrorRate> {
    if computed.n() != truth.n() {
        return Err(Error::DimensionMismatch {
            expected: truth.n(),
            got: computed.n(),
        });
    }
    if computed.k() != truth.k() {
        return Err(Error::DimensionMismatch {
            expected: truth.k(),
            got: computed.k(),
        });
    }
    let n = computed.n();
    let k = computed.k();
    let table = ContingencyTable::new(computed.assignment(), truth.assignment(), k, k)?;
    // Maximize matched count == minimize (n - count) entrywise.
    let cost: Vec<Vec<i64>> = table
        .counts
        .iter()
        .map(|row| row.iter().map(|&c| -(c as i64)).collect())
        .collect();
    let (permutation, neg_matched) = min_cost_assignment(&cost);
    let matched = (-neg_matched) as usize;
    let mis = n - matched;
    Ok(ErrorRate {
        err: 2.0 * mis as f64 / n as f64,
        misclustered_fraction: mis as f64 / n as f64,
        permutation,
    })
}

/// Per-cluster balance and its average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceReport {
    pub per_cluster: Vec<f64>,
    pub average: f64,
    pub has_empty_cluster: bool,
}

/// Balance of a cluster: the minimum over ordered group pairs of the
/// intersection-size ratio. Empty clusters and clusters missing a group
/// entirely score 0; a single group scores 1 vacuously.
pub fn balance(clustering: &Clustering, groups: &GroupPartition) -> Result<BalanceReport> {
    if clustering.n() != groups.n() {
        return Err(Error::DimensionMismatch {
            expected: groups.n(),
            got: clustering.n(),
        });
    }
    let k = clustering.k();
    let h = groups.h();
    let table = ContingencyTable::new(
        groups.membership(),
        clustering.assignment(),
        h,
        k,
    )?;
    let cluster_sizes = table.col_sums();
    let mut per_cluster = Vec::with_capacity(k);
    let mut has_empty_cluster = false;
    for l in 0..k {
        if cluster_sizes[l] == 0 {
            has_empty_cluster = true;
            per_cluster.push(0.0);
            continue;
        }
        if h == 1 {
            per_cluster.push(1.0);
            continue;
        }
        let mut min_ratio = f64::INFINITY;
        for s in 0..h {
            for s2 in 0..h {
                if s == s2 {
                    continue;
                }
                let num = table.counts[s][l] as f64;
                let den = table.counts[s2][l] as f64;
                let ratio = if den == 0.0 {
                    if num == 0.0 {
                        // Both groups absent: the pair is uninformative,
                        // but some other pair with a present group scores 0.
                        continue;
                    }
                    f64::INFINITY
                } else {
                    num / den
                };
                min_ratio = min_ratio.min(ratio);
            }
        }
        if !min_ratio.is_finite() {
            min_ratio = 0.0;
        }
        per_cluster.push(min_ratio);
    }
    let average = per_cluster.iter().sum::<f64>() / k as f64;
    Ok(BalanceReport {
        per_cluster,
        average,
        has_empty_cluster,
    })
}

/// Fraction of each group within each cluster (h x k); columns of
/// non-empty clusters sum to one, empty clusters yield zero columns.
pub fn fairness_fractions(
    clustering: &Clustering,
    groups: &GroupPartition,
) -> Result<(DenseMatrix, bool)> {
    if clustering.n() != groups.n() {
        return Err(Error::DimensionMismatch {
            expected: groups.n(),
            got: clustering.n(),
        });
    }
    let k = clustering.k();
    let h = groups.h();
    let table = ContingencyTable::new(groups.membership(), clustering.assignment(), h, k)?;
    let cluster_sizes = table.col_sums();
    let mut out = DenseMatrix::zeros(h, k);
    let mut has_empty_cluster = false;
    for l in 0..k {
        if cluster_sizes[l] == 0 {
            has_empty_cluster = true;
            continue;
        }
        for s in 0..h {
            out.set(s, l, table.counts[s][l] as f64 / cluster_sizes[l] as f64);
        }
    }
    Ok((out, has_empty_cluster))
}

/// Normalized cut: sum over clusters of the boundary weight divided by
/// the cluster volume.
pub fn ncut_value(clustering: &Clustering, g: &WeightedGraph) -> Result<f64> {
    if clustering.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: clustering.n(),
        });
    }
    let k = clustering.k();
    let assignment = clustering.assignment();
    let mut cut = vec![0.0f64; k];
    let mut volume = vec![0.0f64; k];
    for i in 0..g.n() {
        let ci = assignment[i];
        volume[ci] += g.degrees()[i];
        let (cols, vals) = g.adjacency().row(i);
        for (&j, &w) in cols.iter().zip(vals) {
            if assignment[j] != ci {
                cut[ci] += w;
            }
        }
    }
    let mut ncut = 0.0;
    for l in 0..k {
        if volume[l] <= 0.0 {
            return Err(Error::ZeroVolumeCluster { cluster: l });
        }
        ncut += cut[l] / volume[l];
    }
    Ok(ncut)
}

/// Aggregated evaluation of one clustering; fields are present when the
/// corresponding reference input was supplied.
#[derive(Debug, Clone, Serialize, Default)]
pub struct EvaluationReport {
    pub err: Option<f64>,
    pub misclustered_fraction: Option<f64>,
    pub per_cluster_balance: Option<Vec<f64>>,
    pub average_balance: Option<f64>,
    /// Row-major h x k group-fraction table.
    pub fraction_table: Option<Vec<Vec<f64>>>,
    pub ncut: Option<f64>,
    pub has_empty_cluster: bool,
    pub build_secs: Option<f64>,
    pub eigs_secs: Option<f64>,
    pub kmeans_secs: Option<f64>,
    pub matvec_count: Option<usize>,
}

/// Evaluates a clustering against whichever references are available.
pub fn evaluate(
    computed: &Clustering,
    truth: Option<&Clustering>,
    groups: Option<&GroupPartition>,
    graph: Option<&WeightedGraph>,
) -> Result<EvaluationReport> {
    let mut report = EvaluationReport::default();
    if let Some(t) = truth {
        let e = error_rate(computed, t)?;
        report.err = Some(e.err);
        report.misclustered_fraction = Some(e.misclustered_fraction);
    }
    if let Some(p) = groups {
        let b = balance(computed, p)?;
        report.has_empty_cluster = b.has_empty_cluster;
        report.per_cluster_balance = Some(b.per_cluster);
        report.average_balance = Some(b.average);
        let (table, _) = fairness_fractions(computed, p)?;
        let rows: Vec<Vec<f64>> = (0..table.n_rows()).map(|s| table.row_copy(s)).collect();
        report.fraction_table = Some(rows);
    }
    if let Some(g) = graph {
        report.ncut = Some(ncut_value(computed, g)?);
    }
    Ok(report)
}

//! Plain-text persistence: edge lists, group files, assignment files, the
//! flat key-value experiment configuration, and the CSV run-record schema.
//!
//! All formats use '#' line comments and whitespace separation. Edge lists
//! store each undirected edge once and are mirrored on load; a duplicate
//! line for the same ordered pair accumulates, and listing both
//! orientations with conflicting totals is an error.

use crate::cluster::Clustering;
use crate::error::{Error, Result};
use crate::graph::{GroupPartition, WeightedGraph};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn parse_tok<T: FromStr>(tok: &str, what: &str, path: &Path, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(path, line, format!("cannot parse {what} from '{tok}'")))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(idx, line)| {
        let stripped = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        }
        .trim();
        if stripped.is_empty() {
            None
        } else {
            Some((idx + 1, stripped))
        }
    })
}

// ---------------------------------------------------------------------------
// Edge lists
// ---------------------------------------------------------------------------

/// Loads an undirected weighted graph from `i j [w]` lines. An optional
/// header `n <count>` fixes the vertex count; otherwise it is inferred
/// from the largest index.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut declared_n: Option<usize> = None;
    let mut entries: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut max_index = 0usize;

    for (line_no, line) in content_lines(&text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "n" {
            if toks.len() != 2 {
                return Err(parse_err(path, line_no, "header must be 'n <count>'"));
            }
            declared_n = Some(parse_tok(toks[1], "vertex count", path, line_no)?);
            continue;
        }
        if toks.len() != 2 && toks.len() != 3 {
            return Err(parse_err(path, line_no, "expected 'i j [w]'"));
        }
        let u: usize = parse_tok(toks[0], "vertex id", path, line_no)?;
        let v: usize = parse_tok(toks[1], "vertex id", path, line_no)?;
        let w: f64 = if toks.len() == 3 {
            parse_tok(toks[2], "weight", path, line_no)?
        } else {
            1.0
        };
        if u == v {
            return Err(parse_err(path, line_no, format!("self-loop at vertex {u}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(parse_err(path, line_no, format!("invalid weight {w}")));
        }
        max_index = max_index.max(u).max(v);
        *entries.entry((u, v)).or_insert(0.0) += w;
    }

    let n = declared_n.unwrap_or(max_index + 1);
    // Resolve orientations: an edge listed both ways must agree.
    let mut edges = Vec::with_capacity(entries.len());
    for (&(u, v), &w) in &entries {
        if u < v {
            match entries.get(&(v, u)) {
                Some(&w_rev) if w_rev != w => {
                    return Err(Error::AsymmetricDuplicate { u, v });
                }
                _ => edges.push((u, v, w)),
            }
        } else if !entries.contains_key(&(v, u)) {
            edges.push((v, u, w));
        }
    }
    WeightedGraph::from_undirected_edges(n, &edges)
}

/// Writes each undirected edge once (upper triangle), with a header line.
pub fn save_edge_list(path: impl AsRef<Path>, g: &WeightedGraph) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "n {}", g.n()).unwrap();
    for i in 0..g.n() {
        let (cols, vals) = g.adjacency().row(i);
        for (&j, &w) in cols.iter().zip(vals) {
            if j > i {
                writeln!(out, "{i} {j} {w}").unwrap();
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Label files (groups, assignments, ground truth)
// ---------------------------------------------------------------------------

fn load_labels(path: &Path, what: &str) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path)?;
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (line_no, line) in content_lines(&text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(path, line_no, format!("expected 'i {what}'")));
        }
        let i: usize = parse_tok(toks[0], "vertex id", path, line_no)?;
        let label: usize = parse_tok(toks[1], what, path, line_no)?;
        pairs.push((i, label, line_no));
    }
    if pairs.is_empty() {
        return Err(parse_err(path, 0, "empty label file"));
    }
    let n = pairs.len();
    let mut labels = vec![usize::MAX; n];
    for (i, label, line_no) in pairs {
        if i >= n {
            return Err(parse_err(
                path,
                line_no,
                format!("vertex id {i} out of range for {n} lines"),
            ));
        }
        if labels[i] != usize::MAX {
            return Err(parse_err(path, line_no, format!("vertex {i} listed twice")));
        }
        labels[i] = label;
    }
    Ok(labels)
}

/// Loads a vertex-to-group mapping; every vertex 0..n-1 must appear
/// exactly once and every group must be non-empty.
pub fn load_groups(path: impl AsRef<Path>) -> Result<GroupPartition> {
    let path = path.as_ref();
    let labels = load_labels(path, "group id")?;
    let h = labels.iter().copied().max().unwrap_or(0) + 1;
    GroupPartition::new(h, labels)
}

pub fn save_groups(path: impl AsRef<Path>, p: &GroupPartition) -> Result<()> {
    let mut out = String::new();
    for (i, g) in p.membership().iter().enumerate() {
        writeln!(out, "{i} {g}").unwrap();
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Loads a per-vertex cluster assignment ("i c" lines).
pub fn load_assignment(path: impl AsRef<Path>) -> Result<Clustering> {
    let path = path.as_ref();
    let labels = load_labels(path, "cluster id")?;
    let k = labels.iter().copied().max().unwrap_or(0) + 1;
    Clustering::from_assignment(labels, k)
}

pub fn save_assignment(path: impl AsRef<Path>, c: &Clustering) -> Result<()> {
    let mut out = String::new();
    for (i, a) in c.assignment().iter().enumerate() {
        writeln!(out, "{i} {a}").unwrap();
    }
    std::fs::write(path, out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

/// Flat key-value configuration with comma-separated list values.
#[derive(Debug, Clone, Default)]
pub struct ExperimentConfig {
    values: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn parse_str(text: &str, path: &Path) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (line_no, line) in content_lines(text) {
            let Some((key, value)) = line.split_once('=') else {
                return Err(parse_err(path, line_no, "expected 'key = value'"));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(parse_err(path, line_no, "empty key or value"));
            }
            if values.insert(key.clone(), value).is_some() {
                return Err(parse_err(path, line_no, format!("duplicate key '{key}'")));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse_str(&text, path)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn require_str(&self, key: &str) -> Result<&str> {
        self.get_str(key)
            .ok_or_else(|| Error::Config(format!("missing required key '{key}'")))
    }

    fn parse_scalar<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get_str(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("cannot parse '{s}' for key '{key}'"))),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        self.parse_scalar(key)
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        self.parse_scalar(key)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.parse_scalar(key)
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        match self.get_str(key) {
            None => Ok(None),
            Some("true" | "1" | "yes") => Ok(Some(true)),
            Some("false" | "0" | "no") => Ok(Some(false)),
            Some(other) => Err(Error::Config(format!(
                "cannot parse boolean '{other}' for key '{key}'"
            ))),
        }
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.get_str(key) {
            None => Ok(None),
            Some(s) => {
                let mut out = Vec::new();
                for tok in s.split(',') {
                    let tok = tok.trim();
                    if tok.is_empty() {
                        continue;
                    }
                    out.push(tok.parse().map_err(|_| {
                        Error::Config(format!("cannot parse list item '{tok}' for key '{key}'"))
                    })?);
                }
                Ok(Some(out))
            }
        }
    }

    /// Block vector syntax: clusters split by ';', group counts by ','.
    pub fn get_blocks(&self, key: &str) -> Result<Option<Vec<Vec<usize>>>> {
        match self.get_str(key) {
            None => Ok(None),
            Some(s) => {
                let mut blocks = Vec::new();
                for part in s.split(';') {
                    let mut block = Vec::new();
                    for tok in part.split(',') {
                        let tok = tok.trim();
                        if tok.is_empty() {
                            continue;
                        }
                        block.push(tok.parse().map_err(|_| {
                            Error::Config(format!("cannot parse block entry '{tok}'"))
                        })?);
                    }
                    if !block.is_empty() {
                        blocks.push(block);
                    }
                }
                Ok(Some(blocks))
            }
        }
    }

    /// Rejects keys outside the allowed schema.
    pub fn validate_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.values.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key '{key}'")));
            }
        }
        Ok(())
    }

    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            writeln!(out, "{k} = {v}").unwrap();
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Run records
// ---------------------------------------------------------------------------

/// One CSV row per (algorithm, instance, seed) run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub n: usize,
    pub nnz: usize,
    pub h: usize,
    pub k: usize,
    pub seed: u64,
    pub build_secs: f64,
    pub eigs_secs: f64,
    pub kmeans_secs: f64,
    pub matvec_count: usize,
    pub err: Option<f64>,
    pub misclustered_fraction: Option<f64>,
    pub average_balance: Option<f64>,
    pub ncut: Option<f64>,
    pub status: String,
}

pub const RUN_RECORD_HEADER: &str = "algorithm,n,nnz,h,k,seed,build_secs,eigs_secs,kmeans_secs,\
matvec_count,err,misclustered_fraction,average_balance,ncut,status";

fn opt_to_csv(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.n,
            self.nnz,
            self.h,
            self.k,
            self.seed,
            self.build_secs,
            self.eigs_secs,
            self.kmeans_secs,
            self.matvec_count,
            opt_to_csv(self.err),
            opt_to_csv(self.misclustered_fraction),
            opt_to_csv(self.average_balance),
            opt_to_csv(self.ncut),
            self.status
        )
    }
}

/// Appends run records, writing the header when the file is new or empty.
pub fn append_run_records(path: impl AsRef<Path>, records: &[RunRecord]) -> Result<()> {
    let path = path.as_ref();
    let needs_header = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut out = String::new();
    if needs_header {
        out.push_str(RUN_RECORD_HEADER);
        out.push('\n');
    }
    for r in records {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    use std::io::Write as _;
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// Writes a whitespace-delimited data file with a commented column header;
/// missing values print as "nan".
pub fn write_plot_data(
    path: impl AsRef<Path>,
    columns: &[&str],
    rows: &[Vec<Option<f64>>],
) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "# {}", columns.join(" ")).unwrap();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|v| match v {
                Some(x) => x.to_string(),
                None => "nan".to_string(),
            })
            .collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    std::fs::write(path, out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Conversion helpers (raw external datasets)
// ---------------------------------------------------------------------------

/// Leniently parses raw edge data: whitespace or comma separated, ignores
/// weights beyond the first two columns, drops self-loops.
pub fn load_raw_edges(path: impl AsRef<Path>) -> Result<(usize, Vec<(usize, usize)>)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut edges = Vec::new();
    let mut max_index = 0usize;
    for (line_no, line) in content_lines(&text) {
        let toks: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if toks.len() < 2 {
            return Err(parse_err(path, line_no, "expected at least two columns"));
        }
        // Skip non-numeric header rows.
        let (Ok(u), Ok(v)) = (toks[0].parse::<usize>(), toks[1].parse::<usize>()) else {
            continue;
        };
        if u == v {
            continue;
        }
        max_index = max_index.max(u).max(v);
        edges.push((u, v));
    }
    Ok((max_index + 1, edges))
}

/// Restricts to the largest connected component, relabels vertices
/// contiguously, and assigns unit weights. Returns the graph and the
/// old-to-new vertex mapping.
pub fn largest_component_unit_weights(
    n: usize,
    edges: &[(usize, usize)],
) -> Result<(WeightedGraph, Vec<Option<usize>>)> {
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    let mut component = vec![usize::MAX; n];
    let mut comp_sizes = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX || adjacency[start].is_empty() {
            continue;
        }
        let id = comp_sizes.len();
        let mut stack = vec![start];
        component[start] = id;
        let mut size = 0usize;
        while let Some(u) = stack.pop() {
            size += 1;
            for &v in &adjacency[u] {
                if component[v] == usize::MAX {
                    component[v] = id;
                    stack.push(v);
                }
            }
        }
        comp_sizes.push(size);
    }
    let Some((largest, _)) = comp_sizes.iter().enumerate().max_by_key(|&(i, &s)| (s, usize::MAX - i))
    else {
        return Err(Error::InvalidInput("input graph has no edges".into()));
    };
    let mut mapping = vec![None; n];
    let mut next = 0usize;
    for (v, m) in mapping.iter_mut().enumerate() {
        if component[v] == largest {
            *m = Some(next);
            next += 1;
        }
    }
    let mut kept: std::collections::BTreeSet<(usize, usize)> = std::collections::BTreeSet::new();
    for &(u, v) in edges {
        if let (Some(nu), Some(nv)) = (mapping[u], mapping[v]) {
            kept.insert((nu.min(nv), nu.max(nv)));
        }
    }
    let unit_edges: Vec<(usize, usize, f64)> =
        kept.into_iter().map(|(u, v)| (u, v, 1.0)).collect();
    let graph = WeightedGraph::from_undirected_edges(next, &unit_edges)?;
    Ok((graph, mapping))
}

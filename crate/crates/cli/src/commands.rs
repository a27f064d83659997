//! Subcommand implementations.

use crate::runner::{self, Instance};
use crate::ReportFormat;
use fairsc_core::error::{Error, Result};
use fairsc_core::io::{self, ExperimentConfig, RunRecord};
use fairsc_core::metrics;
use fairsc_core::synthetic::{generate_msbm, generate_sbm};
use std::path::Path;

const GENERATE_KEYS: &[&str] = &[
    "model", "n", "k", "k_true", "h", "u", "a", "b", "c", "d", "prob_scales", "alpha", "beta",
    "avg_degree", "seed", "output_dir",
];

fn output_dir(cfg: &ExperimentConfig) -> Result<std::path::PathBuf> {
    let dir = cfg.get_str("output_dir").unwrap_or(".");
    let path = std::path::PathBuf::from(dir);
    std::fs::create_dir_all(&path)?;
    Ok(path)
}

pub fn generate(config_path: &Path) -> Result<()> {
    let cfg = ExperimentConfig::load(config_path)?;
    cfg.validate_keys(GENERATE_KEYS)?;
    let dir = output_dir(&cfg)?;
    let seed = runner::env_seed().or(cfg.get_u64("seed")?).unwrap_or(1);
    let model = cfg.get_str("model").unwrap_or("msbm");

    let (graph, groups, truth) = match model {
        "msbm" => {
            let k = cfg
                .get_usize("k")?
                .or(cfg.get_usize("k_true")?)
                .ok_or_else(|| Error::Config("generate msbm requires 'k'".into()))?;
            let n = match cfg.get_blocks("u")? {
                Some(blocks) => blocks.iter().map(|b| b.iter().sum::<usize>()).sum(),
                None => cfg
                    .get_usize("n")?
                    .ok_or_else(|| Error::Config("generate msbm requires 'n' or 'u'".into()))?,
            };
            let spec = runner::msbm_spec_from_config(&cfg, n, k, seed)?;
            let inst = generate_msbm(&spec)?;
            (inst.graph, Some(inst.groups), Some(inst.ground_truth))
        }
        "sbm" => {
            let sizes = match cfg.get_list::<usize>("u")? {
                Some(u) => u,
                None => {
                    let n = cfg
                        .get_usize("n")?
                        .ok_or_else(|| Error::Config("generate sbm requires 'n' or 'u'".into()))?;
                    let k = cfg
                        .get_usize("k")?
                        .ok_or_else(|| Error::Config("generate sbm requires 'k'".into()))?;
                    if n % k != 0 {
                        return Err(Error::IndivisibleSize { n, k, h: 1 });
                    }
                    vec![n / k; k]
                }
            };
            let spec = fairsc_core::synthetic::SbmSpec {
                block_sizes: sizes,
                within_prob: cfg.get_f64("a")?.unwrap_or(0.6),
                between_prob: cfg.get_f64("b")?.unwrap_or(0.2),
                within_weight: cfg.get_f64("alpha")?.unwrap_or(3.0),
                between_weight: cfg.get_f64("beta")?.unwrap_or(1.0),
                seed,
            };
            let inst = generate_sbm(&spec)?;
            (inst.graph, Some(inst.groups), Some(inst.ground_truth))
        }
        "random" => {
            let n = cfg
                .get_usize("n")?
                .ok_or_else(|| Error::Config("generate random requires 'n'".into()))?;
            let inst = runner::build_instance(&cfg, n, 1, seed)?;
            (inst.graph, inst.groups, inst.truth)
        }
        other => return Err(Error::Config(format!("unknown model '{other}'"))),
    };

    io::save_edge_list(dir.join("graph.edges"), &graph)?;
    if let Some(groups) = &groups {
        io::save_groups(dir.join("groups.groups"), groups)?;
    }
    if let Some(truth) = &truth {
        io::save_assignment(dir.join("truth.labels"), truth)?;
    }
    let mut echo = cfg.clone();
    echo.set("seed", seed);
    std::fs::write(dir.join("spec.cfg"), echo.to_config_text())?;
    println!(
        "generated {} vertices, {} edges into {}",
        graph.n(),
        graph.n_edges(),
        dir.display()
    );
    Ok(())
}

pub fn cluster(config_path: &Path) -> Result<()> {
    let cfg = ExperimentConfig::load(config_path)?;
    let allowed: Vec<&str> = runner::SOURCE_KEYS
        .iter()
        .chain(runner::SOLVER_KEYS)
        .copied()
        .collect();
    cfg.validate_keys(&allowed)?;
    let dir = output_dir(&cfg)?;
    let algorithm = cfg.require_str("algorithm")?.to_string();
    let k = cfg
        .get_usize("k")?
        .ok_or_else(|| Error::Config("cluster requires 'k'".into()))?;
    let seed = runner::env_seed().or(cfg.get_u64("seed")?).unwrap_or(7);
    let gen_seed = cfg.get_u64("gen_seed")?.unwrap_or(seed);
    let n = cfg.get_usize("n")?.unwrap_or(0);

    let instance = runner::build_instance(&cfg, n, k, gen_seed)?;
    let pc = runner::pipeline_config(&cfg, seed)?;
    let (record, clustering) = runner::run_algorithm(&algorithm, &instance, k, &pc, seed)?;

    io::save_assignment(dir.join("assignment.txt"), &clustering)?;
    println!(
        "{algorithm}: n={} k={k} seed={seed} err={} balance={} ncut={} ({:.3}s)",
        record.n,
        record
            .misclustered_fraction
            .map_or("-".into(), |v| format!("{v:.4}")),
        record
            .average_balance
            .map_or("-".into(), |v| format!("{v:.4}")),
        record.ncut.map_or("-".into(), |v| format!("{v:.4}")),
        record.build_secs + record.eigs_secs + record.kmeans_secs,
    );
    io::append_run_records(dir.join("runs.csv"), &[record])?;
    Ok(())
}

pub fn evaluate(
    assignment: &Path,
    truth: Option<&Path>,
    groups: Option<&Path>,
    graph: Option<&Path>,
    out: Option<&Path>,
    format: ReportFormat,
) -> Result<()> {
    let computed = io::load_assignment(assignment)?;
    let truth = truth.map(io::load_assignment).transpose()?;
    let groups = groups.map(io::load_groups).transpose()?;
    let graph = graph.map(io::load_edge_list).transpose()?;
    let report = metrics::evaluate(
        &computed,
        truth.as_ref(),
        groups.as_ref(),
        graph.as_ref(),
    )?;
    // Small label spaces admit an exhaustive cross-check of the optimal
    // matching; log the verification next to the report.
    if let Some(truth) = &truth {
        if computed.k() == truth.k() && computed.k() <= 6 {
            verify_matching_exhaustively(&computed, truth)?;
            eprintln!(
                "evaluate: matching optimum verified by exhaustive search over {}! permutations",
                computed.k()
            );
        }
    }

    let text = match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        ReportFormat::Csv => report_to_csv(&report),
    };
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Brute-force check that the assignment-based error equals the minimum
/// over every label permutation.
fn verify_matching_exhaustively(
    computed: &fairsc_core::cluster::Clustering,
    truth: &fairsc_core::cluster::Clustering,
) -> Result<()> {
    let k = computed.k();
    let n = computed.n();
    let table = metrics::ContingencyTable::new(computed.assignment(), truth.assignment(), k, k)?;
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = 0usize;
    permute_all(&mut perm, 0, &mut |p: &[usize]| {
        let matched: usize = (0..k).map(|c| table.counts[c][p[c]]).sum();
        best = best.max(matched);
    });
    let exhaustive_err = 2.0 * (n - best) as f64 / n as f64;
    let reported = metrics::error_rate(computed, truth)?.err;
    if (exhaustive_err - reported).abs() > 0.0 {
        return Err(Error::InvalidInput(format!(
            "matching check failed: exhaustive {exhaustive_err} vs reported {reported}"
        )));
    }
    Ok(())
}

fn permute_all(perm: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize])) {
    if at == perm.len() {
        visit(perm);
        return;
    }
    for i in at..perm.len() {
        perm.swap(at, i);
        permute_all(perm, at + 1, visit);
        perm.swap(at, i);
    }
}

fn report_to_csv(report: &metrics::EvaluationReport) -> String {
    let mut out = String::from("metric,value\n");
    let mut push = |k: &str, v: Option<f64>| {
        if let Some(v) = v {
            out.push_str(&format!("{k},{v}\n"));
        }
    };
    push("err", report.err);
    push("misclustered_fraction", report.misclustered_fraction);
    push("average_balance", report.average_balance);
    push("ncut", report.ncut);
    if let Some(balances) = &report.per_cluster_balance {
        for (l, b) in balances.iter().enumerate() {
            push(&format!("balance_{l}"), Some(*b));
        }
    }
    if let Some(table) = &report.fraction_table {
        for (s, row) in table.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                push(&format!("fraction_{s}_{l}"), Some(*v));
            }
        }
    }
    out.push_str(&format!(
        "has_empty_cluster,{}\n",
        report.has_empty_cluster
    ));
    out
}

const BENCH_KEYS_EXTRA: &[&str] = &["algorithms", "seeds", "warmup"];

pub fn bench(config_path: &Path) -> Result<()> {
    let cfg = ExperimentConfig::load(config_path)?;
    let allowed: Vec<&str> = runner::SOURCE_KEYS
        .iter()
        .chain(runner::SOLVER_KEYS)
        .chain(BENCH_KEYS_EXTRA)
        .copied()
        .collect();
    cfg.validate_keys(&allowed)?;
    let dir = output_dir(&cfg)?;

    let algorithms: Vec<String> = cfg
        .get_list::<String>("algorithms")?
        .or_else(|| cfg.get_str("algorithm").map(|a| vec![a.to_string()]))
        .unwrap_or_default();
    let n_values: Vec<usize> = cfg.get_list::<usize>("n")?.unwrap_or_else(|| vec![0]);
    let k_values: Vec<usize> = cfg
        .get_list::<usize>("k")?
        .ok_or_else(|| Error::Config("bench requires 'k'".into()))?;
    let seeds: Vec<u64> = match runner::env_seed() {
        Some(s) => vec![s],
        None => cfg.get_list::<u64>("seeds")?.unwrap_or_else(|| vec![1]),
    };

    let mut records: Vec<RunRecord> = Vec::new();
    let empty_sweep = algorithms.is_empty() || n_values.is_empty() || k_values.is_empty()
        || seeds.is_empty();

    if !empty_sweep {
        // One discarded warm-up per algorithm on the first sweep point.
        if cfg.get_bool("warmup")?.unwrap_or(true) {
            let (n0, k0, s0) = (n_values[0], k_values[0], seeds[0]);
            if let Ok(instance) = runner::build_instance(&cfg, n0, k0, s0) {
                let pc = runner::pipeline_config(&cfg, s0)?;
                for alg in &algorithms {
                    let _ = runner::run_algorithm(alg, &instance, k0, &pc, s0);
                }
            }
        }
        for &n in &n_values {
            for &seed in &seeds {
                for &k in &k_values {
                    let instance = runner::build_instance(&cfg, n, k, seed)?;
                    let pc = runner::pipeline_config(&cfg, seed)?;
                    for alg in &algorithms {
                        match runner::run_algorithm(alg, &instance, k, &pc, seed) {
                            Ok((record, _)) => records.push(record),
                            Err(Error::TooLargeForDense { .. }) => {
                                records.push(skipped_record(alg, &instance, k, seed));
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
    }

    // Header even for empty sweeps.
    let csv_path = dir.join("runs.csv");
    std::fs::write(&csv_path, format!("{}\n", io::RUN_RECORD_HEADER))?;
    io::append_run_records(&csv_path, &records)?;

    write_sweep_files(&dir, &algorithms, &n_values, &k_values, &records)?;
    println!(
        "bench: {} runs over n={n_values:?} k={k_values:?} seeds={seeds:?} -> {}",
        records.len(),
        dir.display()
    );
    Ok(())
}

fn skipped_record(algorithm: &str, instance: &Instance, k: usize, seed: u64) -> RunRecord {
    RunRecord {
        algorithm: algorithm.to_string(),
        n: instance.graph.n(),
        nnz: instance.graph.adjacency().nnz(),
        h: instance.groups.as_ref().map_or(1, |g| g.h()),
        k,
        seed,
        build_secs: 0.0,
        eigs_secs: 0.0,
        kmeans_secs: 0.0,
        matvec_count: 0,
        err: None,
        misclustered_fraction: None,
        average_balance: None,
        ncut: None,
        status: "skipped: dense guard".to_string(),
    }
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Some(values[values.len() / 2])
}

fn write_sweep_files(
    dir: &Path,
    algorithms: &[String],
    n_values: &[usize],
    k_values: &[usize],
    records: &[RunRecord],
) -> Result<()> {
    let select = |pred: &dyn Fn(&RunRecord) -> bool,
                  field: &dyn Fn(&RunRecord) -> Option<f64>|
     -> Option<f64> {
        let mut vals: Vec<f64> = records
            .iter()
            .filter(|r| r.status == "ok" && pred(r))
            .filter_map(field)
            .collect();
        median(&mut vals)
    };
    let total_time =
        |r: &RunRecord| -> Option<f64> { Some(r.build_secs + r.eigs_secs + r.kmeans_secs) };

    let mut columns: Vec<&str> = vec!["n"];
    let alg_names: Vec<&str> = algorithms.iter().map(|s| s.as_str()).collect();
    columns.extend(&alg_names);

    let per_n = |field: &dyn Fn(&RunRecord) -> Option<f64>| -> Vec<Vec<Option<f64>>> {
        n_values
            .iter()
            .map(|&n| {
                let mut row = vec![Some(n as f64)];
                for alg in algorithms {
                    row.push(select(&|r: &RunRecord| r.n == n && &r.algorithm == alg, field));
                }
                row
            })
            .collect()
    };
    io::write_plot_data(dir.join("err_vs_n.dat"), &columns, &per_n(&|r| r.err))?;
    io::write_plot_data(dir.join("time_vs_n.dat"), &columns, &per_n(&total_time))?;

    let mut k_columns: Vec<&str> = vec!["k"];
    k_columns.extend(&alg_names);
    let per_k = |field: &dyn Fn(&RunRecord) -> Option<f64>| -> Vec<Vec<Option<f64>>> {
        k_values
            .iter()
            .map(|&k| {
                let mut row = vec![Some(k as f64)];
                for alg in algorithms {
                    row.push(select(&|r: &RunRecord| r.k == k && &r.algorithm == alg, field));
                }
                row
            })
            .collect()
    };
    io::write_plot_data(dir.join("time_vs_k.dat"), &k_columns, &per_k(&total_time))?;
    io::write_plot_data(
        dir.join("balance_vs_k.dat"),
        &k_columns,
        &per_k(&|r| r.average_balance),
    )?;
    Ok(())
}

pub fn convert(
    input: &Path,
    groups: Option<&Path>,
    out_graph: &Path,
    out_groups: Option<&Path>,
) -> Result<()> {
    let (n, edges) = io::load_raw_edges(input)?;
    let (graph, mapping) = io::largest_component_unit_weights(n, &edges)?;
    io::save_edge_list(out_graph, &graph)?;
    println!(
        "convert: kept largest component with {} of {} vertices, {} edges",
        graph.n(),
        n,
        graph.n_edges()
    );

    if let Some(groups_path) = groups {
        let out_path = out_groups
            .ok_or_else(|| Error::Config("convert with --groups needs --out-groups".into()))?;
        let raw = load_raw_labels(groups_path)?;
        let mut membership = vec![usize::MAX; graph.n()];
        for (old, label) in raw {
            if let Some(Some(new)) = mapping.get(old) {
                membership[*new] = label;
            }
        }
        if let Some(missing) = membership.iter().position(|&m| m == usize::MAX) {
            return Err(Error::InvalidInput(format!(
                "vertex {missing} of the kept component has no group label"
            )));
        }
        // Compact group ids in first-appearance order.
        let mut remap: std::collections::BTreeMap<usize, usize> = Default::default();
        for label in membership.iter() {
            let next = remap.len();
            remap.entry(*label).or_insert(next);
        }
        let membership: Vec<usize> = membership.into_iter().map(|l| remap[&l]).collect();
        let h = remap.len();
        let partition = fairsc_core::graph::GroupPartition::new(h, membership)?;
        io::save_groups(out_path, &partition)?;
        println!("convert: remapped groups into {h} non-empty groups");
    }
    Ok(())
}

/// Lenient "vertex label" pairs for raw datasets (comma or whitespace).
fn load_raw_labels(path: &Path) -> Result<Vec<(usize, usize)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines() {
        let stripped = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        }
        .trim();
        if stripped.is_empty() {
            continue;
        }
        let toks: Vec<&str> = stripped
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if toks.len() < 2 {
            continue;
        }
        if let (Ok(i), Ok(label)) = (toks[0].parse(), toks[1].parse()) {
            out.push((i, label));
        }
    }
    Ok(out)
}

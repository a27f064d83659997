//! Shared machinery for the `cluster` and `bench` commands: turning a
//! config into an instance, dispatching an algorithm, and assembling the
//! run record.

use fairsc_core::cluster::{fairsc, sc, sfairsc, Clustering, PipelineConfig, PipelineRun};
use fairsc_core::error::{Error, Result};
use fairsc_core::graph::{GroupPartition, WeightedGraph};
use fairsc_core::io::{self, ExperimentConfig, RunRecord};
use fairsc_core::metrics;
use fairsc_core::synthetic::{
    self, generate_msbm, generate_random_graph, generate_sbm, msbm_spec_for_experiment, MsbmSpec,
    RandomGraphSpec, SbmSpec,
};

/// Config keys describing the data source (dataset paths or a generator).
pub const SOURCE_KEYS: &[&str] = &[
    "graph", "groups", "truth", "model", "n", "k_true", "h", "u", "a", "b", "c", "d",
    "prob_scales", "alpha", "beta", "avg_degree", "gen_seed",
];

/// Config keys describing the solver.
pub const SOLVER_KEYS: &[&str] = &[
    "algorithm", "k", "seed", "tol", "max_basis", "max_restarts", "kmeans_restarts", "sigma",
    "dense_guard", "output_dir",
];

/// A fully materialized problem instance.
pub struct Instance {
    pub graph: WeightedGraph,
    pub groups: Option<GroupPartition>,
    pub truth: Option<Clustering>,
}

/// Builds the synthetic spec described by the config (without generating),
/// so `generate` can echo it and `bench` can resize it per sweep point.
pub fn msbm_spec_from_config(
    cfg: &ExperimentConfig,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<MsbmSpec> {
    let alpha = cfg.get_f64("alpha")?.unwrap_or(synthetic::EXPERIMENT_WEIGHTS.0);
    let beta = cfg.get_f64("beta")?.unwrap_or(synthetic::EXPERIMENT_WEIGHTS.1);

    if let Some(blocks) = cfg.get_blocks("u")? {
        let (a, b, c, d) = explicit_probs(cfg)?;
        let spec = MsbmSpec {
            blocks,
            p_within_within: a,
            p_between_within: b,
            p_within_between: c,
            p_between_between: d,
            within_weight: alpha,
            between_weight: beta,
            seed,
        };
        return Ok(spec);
    }
    let h = cfg
        .get_usize("h")?
        .ok_or_else(|| Error::Config("msbm model requires 'h' (or explicit 'u')".into()))?;
    if cfg.contains("a") {
        let (a, b, c, d) = explicit_probs(cfg)?;
        if n % (k * h) != 0 {
            return Err(Error::IndivisibleSize { n, k, h });
        }
        let q = n / (k * h);
        return Ok(MsbmSpec {
            blocks: vec![vec![q; h]; k],
            p_within_within: a,
            p_between_within: b,
            p_within_between: c,
            p_between_between: d,
            within_weight: alpha,
            between_weight: beta,
            seed,
        });
    }
    let scales = cfg
        .get_list::<f64>("prob_scales")?
        .unwrap_or_else(|| synthetic::EXPERIMENT_PROB_SCALES.to_vec());
    if scales.len() != 4 {
        return Err(Error::Config("prob_scales must list four values".into()));
    }
    msbm_spec_for_experiment(n, k, h, [scales[0], scales[1], scales[2], scales[3]], (alpha, beta), seed)
}

fn explicit_probs(cfg: &ExperimentConfig) -> Result<(f64, f64, f64, f64)> {
    let need = |key: &str| -> Result<f64> {
        cfg.get_f64(key)?
            .ok_or_else(|| Error::Config(format!("explicit probabilities require '{key}'")))
    };
    Ok((need("a")?, need("b")?, need("c")?, need("d")?))
}

/// Loads or generates the instance named by the config. `k_default` sizes
/// synthetic ground truth when `k_true` is absent.
pub fn build_instance(cfg: &ExperimentConfig, n: usize, k_default: usize, seed: u64) -> Result<Instance> {
    if let Some(graph_path) = cfg.get_str("graph") {
        let graph = io::load_edge_list(graph_path)?;
        let groups = match cfg.get_str("groups") {
            Some(p) => Some(io::load_groups(p)?),
            None => None,
        };
        let truth = match cfg.get_str("truth") {
            Some(p) => Some(io::load_assignment(p)?),
            None => None,
        };
        return Ok(Instance {
            graph,
            groups,
            truth,
        });
    }
    let model = cfg.get_str("model").unwrap_or("msbm");
    let k_true = cfg.get_usize("k_true")?.unwrap_or(k_default);
    match model {
        "msbm" => {
            let spec = msbm_spec_from_config(cfg, n, k_true, seed)?;
            let inst = generate_msbm(&spec)?;
            Ok(Instance {
                graph: inst.graph,
                groups: Some(inst.groups),
                truth: Some(inst.ground_truth),
            })
        }
        "sbm" => {
            let sizes = match cfg.get_list::<usize>("u")? {
                Some(u) => u,
                None => {
                    if n % k_true != 0 {
                        return Err(Error::IndivisibleSize { n, k: k_true, h: 1 });
                    }
                    vec![n / k_true; k_true]
                }
            };
            let spec = SbmSpec {
                block_sizes: sizes,
                within_prob: cfg.get_f64("a")?.unwrap_or(0.6),
                between_prob: cfg.get_f64("b")?.unwrap_or(0.2),
                within_weight: cfg.get_f64("alpha")?.unwrap_or(3.0),
                between_weight: cfg.get_f64("beta")?.unwrap_or(1.0),
                seed,
            };
            let inst = generate_sbm(&spec)?;
            Ok(Instance {
                graph: inst.graph,
                groups: Some(inst.groups),
                truth: Some(inst.ground_truth),
            })
        }
        "random" => {
            let avg_degree = cfg.get_usize("avg_degree")?.unwrap_or(12);
            let graph = generate_random_graph(&RandomGraphSpec {
                n,
                avg_degree,
                seed,
            })?;
            let groups = match cfg.get_usize("h")? {
                Some(h) if h > 1 => Some(synthetic::random_groups(n, h, seed ^ 0x517c_c1b7)?),
                _ => None,
            };
            Ok(Instance {
                graph,
                groups,
                truth: None,
            })
        }
        other => Err(Error::Config(format!("unknown model '{other}'"))),
    }
}

/// Solver options shared by `cluster` and `bench`.
pub fn pipeline_config(cfg: &ExperimentConfig, seed: u64) -> Result<PipelineConfig> {
    let mut pc = PipelineConfig::default().with_seed(seed);
    if let Some(tol) = cfg.get_f64("tol")? {
        pc.eig_tol = tol;
    }
    if let Some(mb) = cfg.get_usize("max_basis")? {
        pc.max_basis = Some(mb);
    }
    if let Some(mr) = cfg.get_usize("max_restarts")? {
        pc.max_restarts = mr;
    }
    if let Some(kr) = cfg.get_usize("kmeans_restarts")? {
        pc.kmeans_restarts = kr;
    }
    if let Some(sigma) = cfg.get_f64("sigma")? {
        pc.sigma_override = Some(sigma);
    }
    if let Some(guard) = cfg.get_usize("dense_guard")? {
        pc.dense_guard = guard;
    }
    Ok(pc)
}

/// Runs one algorithm on one instance and assembles the run record.
pub fn run_algorithm(
    algorithm: &str,
    instance: &Instance,
    k: usize,
    pc: &PipelineConfig,
    seed: u64,
) -> Result<(RunRecord, Clustering)> {
    let need_groups = || -> Result<&GroupPartition> {
        instance
            .groups
            .as_ref()
            .ok_or_else(|| Error::Config(format!("algorithm '{algorithm}' requires groups")))
    };
    let run: PipelineRun = match algorithm {
        "sc" => sc(&instance.graph, k, pc)?,
        "sfairsc" => sfairsc(&instance.graph, need_groups()?, k, pc)?,
        "fairsc" => fairsc(&instance.graph, need_groups()?, k, pc)?,
        other => return Err(Error::Config(format!("unknown algorithm '{other}'"))),
    };
    let record = record_for(algorithm, instance, k, seed, &run)?;
    Ok((record, run.clustering))
}

pub fn record_for(
    algorithm: &str,
    instance: &Instance,
    k: usize,
    seed: u64,
    run: &PipelineRun,
) -> Result<RunRecord> {
    let (err, mis) = match &instance.truth {
        Some(truth) if truth.k() == k => {
            let e = metrics::error_rate(&run.clustering, truth)?;
            (Some(e.err), Some(e.misclustered_fraction))
        }
        _ => (None, None),
    };
    let average_balance = match &instance.groups {
        Some(groups) => Some(metrics::balance(&run.clustering, groups)?.average),
        None => None,
    };
    let ncut = metrics::ncut_value(&run.clustering, &instance.graph).ok();
    Ok(RunRecord {
        algorithm: algorithm.to_string(),
        n: instance.graph.n(),
        nnz: instance.graph.adjacency().nnz(),
        h: instance.groups.as_ref().map_or(1, |g| g.h()),
        k,
        seed,
        build_secs: run.timings.build_secs,
        eigs_secs: run.timings.eigs_secs,
        kmeans_secs: run.timings.kmeans_secs,
        matvec_count: run.matvec_count,
        err,
        misclustered_fraction: mis,
        average_balance,
        ncut,
        status: "ok".to_string(),
    })
}

/// Seed override from the environment, per the interface contract.
pub fn env_seed() -> Option<u64> {
    std::env::var("FAIRSC_SEED").ok()?.parse().ok()
}

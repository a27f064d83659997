//! Parallel-vs-sequential comparison of the data-parallel kernels and one
//! end-to-end pipeline. Build with `--features parallel` (default) to see
//! the rayon paths; the `*_seq` (or single-thread pool) variants are the
//! sequential fallback either way.

use criterion::{criterion_group, criterion_main, Criterion};
use fairsc_core::cluster::{kmeans, sfairsc, KMeansConfig, PipelineConfig};
use fairsc_core::dense::DenseMatrix;
use fairsc_core::synthetic::{
    generate_msbm, generate_random_graph, msbm_spec_for_experiment, random_groups,
    RandomGraphSpec, EXPERIMENT_PROB_SCALES, EXPERIMENT_WEIGHTS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

#[cfg(feature = "parallel")]
fn single_thread_pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool")
}

fn bench_spmv(c: &mut Criterion) {
    let g = generate_random_graph(&RandomGraphSpec {
        n: 50_000,
        avg_degree: 16,
        seed: 1,
    })
    .unwrap();
    let a = g.adjacency().clone();
    let x: Vec<f64> = (0..a.n_cols()).map(|i| (i % 97) as f64 / 97.0 - 0.5).collect();
    let mut y = vec![0.0; a.n_rows()];

    let mut group = c.benchmark_group("spmv_50k");
    group.bench_function("parallel", |b| {
        b.iter(|| a.spmv_into(black_box(&x), black_box(&mut y)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| a.spmv_into_seq(black_box(&x), black_box(&mut y)))
    });
    group.finish();
}

fn bench_dense_panels(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 700;
    let a = DenseMatrix::from_column_major(
        n,
        n,
        (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect(),
    );
    let b = DenseMatrix::from_column_major(
        n,
        n,
        (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect(),
    );

    let mut group = c.benchmark_group("dense_at_b_700");
    group.sample_size(10);
    group.bench_function("parallel", |bch| {
        bch.iter(|| black_box(a.transpose_times(black_box(&b))))
    });
    group.bench_function("sequential", |bch| {
        bch.iter(|| black_box(a.transpose_times_seq(black_box(&b))))
    });
    group.finish();
}

fn bench_kmeans(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 20_000;
    let d = 8;
    let rows = DenseMatrix::from_column_major(
        n,
        d,
        (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect(),
    );
    let cfg = KMeansConfig::for_k(8).with_seed(4);

    let mut group = c.benchmark_group("kmeans_20k_x8");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(kmeans(black_box(&rows), &cfg).unwrap()))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("single_thread_pool", |b| {
        let pool = single_thread_pool();
        b.iter(|| pool.install(|| black_box(kmeans(black_box(&rows), &cfg).unwrap())))
    });
    group.finish();
}

fn bench_pipeline(c: &mut Criterion) {
    let spec =
        msbm_spec_for_experiment(2000, 5, 5, EXPERIMENT_PROB_SCALES, EXPERIMENT_WEIGHTS, 6)
            .unwrap();
    let inst = generate_msbm(&spec).unwrap();
    let groups = random_groups(2000, 5, 7).unwrap();
    let _ = groups;
    let cfg = PipelineConfig::default().with_seed(8);

    let mut group = c.benchmark_group("sfairsc_2000");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(sfairsc(&inst.graph, &inst.groups, 5, &cfg).unwrap()))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("single_thread_pool", |b| {
        let pool = single_thread_pool();
        b.iter(|| {
            pool.install(|| black_box(sfairsc(&inst.graph, &inst.groups, 5, &cfg).unwrap()))
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_spmv,
    bench_dense_panels,
    bench_kmeans,
    bench_pipeline
);
criterion_main!(benches);

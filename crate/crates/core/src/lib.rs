//! Group-fair spectral clustering.
//!
//! This crate implements normalized-cut spectral clustering together with two
//! group-fair variants: a dense nullspace pipeline that reduces the
//! constrained trace minimization to a dense eigenproblem, and a scalable
//! matrix-free formulation that enforces the fairness constraints through a
//! nullspace projector combined with a deflation shift, so that the
//! constrained eigenproblem is solved with nothing but sparse matrix-vector
//! products.
//!
//! The crate also ships the supporting cast needed to run experiments end to
//! end: a stochastic block model generator with planted fair ground truth,
//! accuracy and fairness metrics (error rate under optimal label matching,
//! per-cluster balance, normalized cut), and plain-text graph/group file
//! formats with a CSV run-record schema.
//!
//! With the default `parallel` feature, the data-parallel inner loops (sparse
//! products, dense panels, k-means) run on rayon; results are identical to
//! the sequential fallback for any thread count.

pub mod cluster;
pub mod dense;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod operator;
pub mod sparse;
pub mod synthetic;
pub mod vecops;

pub use cluster::{fairsc, kmeans, sc, sfairsc, Clustering, KMeansConfig, PipelineConfig, PipelineRun};
pub use dense::DenseMatrix;
pub use eigen::{
    fairsc_dense_pipeline, sfairsc_eigs, smallest_eigs, variant_oracle_eigs, EigResult,
    LanczosConfig,
};
pub use error::{Error, Result};
pub use graph::{
    build_fairness_constraint, build_group_indicator, build_laplacians, check_group_fairness,
    FairnessCheck, FairnessConstraint, GroupPartition, LaplacianPair, WeightedGraph,
};
pub use metrics::{balance, error_rate, fairness_fractions, ncut_value, EvaluationReport};
pub use operator::{choose_shift, LinearOperator, Projector, ShiftedProjectedOperator};
pub use sparse::CsrMatrix;
pub use synthetic::{
    generate_msbm, generate_sbm, msbm_spec_for_experiment, MsbmSpec, SbmSpec, SyntheticInstance,
};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("entry ({row}, {col}) out of range for a {n_rows}x{n_cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("dense eigensolver did not converge for eigenvalue {index} after {iterations} QL sweeps")]
    EigNonConvergence { index: usize, iterations: usize },

    #[error(
        "iterative eigensolver did not converge after {restarts} restarts \
         (best residuals {residuals:?}, tolerance {tol:.3e})"
    )]
    ConvergenceFailure {
        restarts: usize,
        residuals: Vec<f64>,
        tol: f64,
    },

    #[error("vertex {vertex} is isolated (zero degree)")]
    IsolatedVertex { vertex: usize },

    #[error("group {group} is empty")]
    EmptyGroup { group: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("fairness constraint is rank deficient (groups may overlap or be degenerate)")]
    RankDeficientConstraint,

    #[error("deflation shift {sigma:.6e} too small: {detail}")]
    ShiftTooSmall { sigma: f64, detail: String },

    #[error("problem size {n} exceeds the dense-path guard {guard}")]
    TooLargeForDense { n: usize, guard: usize },

    #[error("invalid cluster count k={k} for {n} points")]
    InvalidK { k: usize, n: usize },

    #[error("block sizes violate the fair-block condition at cluster {cluster}, group {group}")]
    FairBlockViolation { cluster: usize, group: usize },

    #[error("n={n} is not divisible into equal blocks for k={k}, h={h}")]
    IndivisibleSize { n: usize, k: usize, h: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("edge ({u}, {v}) appears in both orientations with conflicting weights")]
    AsymmetricDuplicate { u: usize, v: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cluster {cluster} has zero volume")]
    ZeroVolumeCluster { cluster: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

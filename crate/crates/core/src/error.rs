//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("point ({0:?}) lies outside the domain")]
    PointOutsideDomain(Vec<f64>),

    #[error("grid too coarse: no interior lattice point at h = {h}")]
    GridTooCoarse { h: f64 },

    #[error("field length {got} does not match interior point count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("requested {k} eigenpairs but the matrix dimension is {dim}")]
    KTooLarge { k: usize, dim: usize },

    #[error("matrix is not positive definite (pivot {pivot:.3e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("eigensolver did not converge to {requested} pairs; {achieved} verified, best rejected residual {best_residual:.3e}")]
    NonConvergence {
        requested: usize,
        achieved: usize,
        best_residual: f64,
    },

    #[error("no eigenvalue at or below lambda_max = {lambda_max}")]
    EmptySpectrum { lambda_max: f64 },

    #[error("Bessel order {nu} is not supported")]
    UnsupportedOrder { nu: f64 },

    #[error("failed to bracket zero #{k} of J_{nu}")]
    BracketFailure { nu: f64, k: usize },

    #[error("lambda = {lambda} exceeds the trusted cutoff {cutoff}")]
    BeyondCutoff { lambda: f64, cutoff: f64 },

    #[error("fit window contains only {count} eigenvalues (need at least 10)")]
    WindowTooSmall { count: usize },

    #[error("tau grid reaches {tau_max:.6} but the spectrum resolves |tau| <= {resolved:.6}")]
    GridExceedsResolution { tau_max: f64, resolved: f64 },

    #[error("spectral window lambda_c = {lambda_c} exceeds cutoff/4 = {limit}")]
    WindowExceedsCutoff { lambda_c: f64, limit: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("missing prerequisite: {0}")]
    MissingPrerequisite(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

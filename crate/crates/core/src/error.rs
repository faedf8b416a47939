//! Error type shared by all modules.

use thiserror::Error;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised while validating inputs or evaluating the algorithms.
#[derive(Debug, Error)]
pub enum Error {
    #[error("inputs and labels have different lengths: {inputs} inputs vs {labels} labels")]
    LengthMismatch { inputs: usize, labels: usize },

    #[error("label at index {index} is {value}, expected exactly +1 or -1")]
    InvalidLabel { index: usize, value: f64 },

    #[error("non-finite input coordinate at row {row}, column {col}")]
    NonFiniteInput { row: usize, col: usize },

    #[error("dataset must contain at least one point with at least one coordinate")]
    EmptyDataset,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("model `{model}` expects inputs of dimension {expected}, dataset has dimension {got}")]
    InputDimMismatch {
        model: String,
        expected: usize,
        got: usize,
    },

    #[error("model `{model}` returned {value}, outside the required range [-1, 1]")]
    ModelRange { model: String, value: f64 },

    #[error("invalid hyper-parameters: m={m}, q={q} (need m >= 2 and 1 <= q <= m)")]
    InvalidHyperParams { m: usize, q: usize },

    #[error("invalid kernel parameter: {0}")]
    KernelParam(String),

    #[error("{family} kernel is not admissible for {context} (bounded translation-invariant kernel required)")]
    KernelNotAdmissible {
        family: &'static str,
        context: &'static str,
    },

    #[error("need at least {min} samples, got m={m}")]
    SampleCount { m: usize, min: usize },

    #[error("k_n={k} is out of range for a dataset of size {n}")]
    KnnRange { k: usize, n: usize },

    #[error("kernel smoother normalizer is {value} at a query point; it must be positive")]
    ZeroNormalizer { value: f64 },

    #[error("Monte-Carlo point set is empty")]
    EmptyMcPoints,

    #[error("domain box is invalid: {0}")]
    DomainBox(String),

    #[error("statistic at index {index} is not finite")]
    NonFiniteStatistic { index: usize },

    #[error("permutation of length {len} is not a bijection on 0..{len}")]
    InvalidPermutation { len: usize },

    #[error("squared distance evaluated to {value}, below the -1e-10 clamp tolerance")]
    NegativeSquaredDistance { value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("failed to parse {what} from `{input}`: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("grid axis is empty or has a non-positive step")]
    InvalidAxis,

    #[error("trial count must be positive")]
    NoTrials,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

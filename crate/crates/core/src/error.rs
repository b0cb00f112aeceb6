use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported function kind `{0}`")]
    UnsupportedKind(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },

    #[error("sample {index} is not positive ({value})")]
    NonPositiveSample { index: usize, value: f64 },

    #[error("s = {s} lies outside the evaluation domain [{lo}, {hi}]")]
    OutOfDomain { s: f64, lo: f64, hi: f64 },

    #[error("warping function of block {block} is not positive at s = {s} (h = {value})")]
    NonPositiveWarping { block: usize, s: f64, value: f64 },

    #[error("derivative of order {needed} required, only {available} available")]
    DerivativeOrderUnavailable { needed: usize, available: usize },

    #[error("block {block} is an abstract Einstein fiber of dimension {dim}; its full curvature is unknown")]
    InsufficientFiberData { block: usize, dim: usize },

    #[error("operation needs total dimension >= {needed}, spec has {got}")]
    DimensionTooLow { needed: usize, got: usize },

    #[error("operation needs exactly {expected} blocks, spec has {got}")]
    WrongBlockCount { expected: usize, got: usize },

    #[error("integration blew up; last valid s = {last_valid_s}")]
    BlowUp { last_valid_s: f64 },

    #[error("input must be positive: {0}")]
    NonPositiveInput(String),

    #[error("lapse scale must be nonzero")]
    ZeroScale,

    #[error("fiber curvature k must be nonzero")]
    ZeroK,

    #[error("k = {k} does not exceed the threshold k0 = {k0}")]
    BelowThreshold { k: f64, k0: f64 },

    #[error("scalar curvature has the wrong sign for this family (R = {0})")]
    WrongSign(f64),

    #[error("parameter out of range: {0}")]
    BadRange(String),

    #[error("zero scalar curvature required for r = n - 1 (R = {0})")]
    ZeroScalarRequired(f64),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("spec failed validation: {0}")]
    InvalidSpec(String),

    #[error("malformed spec: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("cannot parse {0:?} as an exact number")]
    Parse(String),

    #[error("square root of a ball that reaches negative values")]
    NegativeSqrt,

    #[error("division by a ball that contains zero")]
    BallDivisionByZero,

    #[error("floor not certifiable below {max_precision} digits; the value may be an integer")]
    FloorOnBoundary { max_precision: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tau_k = 1: the leading term alone equals pi/4, no companion term exists")]
    ExactQuadrant,

    #[error("splitting identity undefined for z = {0} in [0, 1)")]
    SplittingDomain(String),

    #[error("Lehmer measure undefined: |beta| = 1 at term {0}")]
    MeasureUndefined(usize),

    #[error("Lehmer measure: |beta| < 1 at term {0} gives a negative logarithm")]
    NegativeLog(usize),

    #[error("{kernel} series diverges for beta = {beta} (needs |beta| >= 1)")]
    Divergence { kernel: &'static str, beta: String },

    #[error("{kernel} is not supported for beta = {beta}: {reason}")]
    KernelDomain {
        kernel: &'static str,
        beta: String,
        reason: &'static str,
    },

    #[error("{kernel} needs more than {max_terms} terms for {precision} digits")]
    TermBudget {
        kernel: &'static str,
        precision: u32,
        max_terms: usize,
    },

    #[error("precision cap of {cap} digits reached: {what}")]
    PrecisionCap { cap: u32, what: String },

    #[error("reference routes disagree at decimal {position}")]
    InternalConsistency { position: usize },

    #[error("unsupported formula: {0}")]
    Unsupported(String),

    #[error("json: {0}")]
    Json(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

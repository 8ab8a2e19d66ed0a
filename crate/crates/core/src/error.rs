use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{func} did not converge within {iterations} iterations")]
    NoConvergence { func: &'static str, iterations: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("density evaluation failed: {0}")]
    Evaluation(String),

    #[error("sample is empty")]
    EmptySample,

    #[error("sample has zero variance")]
    DegenerateSample,

    #[error("sample too small: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("insufficient tail data: {side} tail has {got} observations, need {needed}")]
    InsufficientTailData {
        side: &'static str,
        got: usize,
        needed: usize,
    },

    #[error("degenerate {side} tail: mean excess over the threshold is zero")]
    DegenerateTail { side: &'static str },

    #[error("fits were computed on different sample sizes ({0} vs {1})")]
    MismatchedSampleSize(usize, usize),

    #[error("no converged fit to rank")]
    NoConvergedFit,

    #[error("ingestion failed: {0}")]
    Ingestion(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable class name, used by the CLI error line.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::NoConvergence { .. } => "no_convergence",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Evaluation(_) => "evaluation",
            Error::EmptySample => "empty_sample",
            Error::DegenerateSample => "degenerate_sample",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::InsufficientTailData { .. } => "insufficient_tail_data",
            Error::DegenerateTail { .. } => "degenerate_tail",
            Error::MismatchedSampleSize(..) => "mismatched_sample_size",
            Error::NoConvergedFit => "no_converged_fit",
            Error::Ingestion(_) => "ingestion",
            Error::Parse(_) => "parse",
            Error::Usage(_) => "usage",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }

    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty prediction")]
    EmptyPrediction,
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("incompatible scale: {0}")]
    IncompatibleScale(String),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("point {0} is outside the domain")]
    UndefinedPoint(usize),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("exceeds desk scale: {0}")]
    ExceedsDeskScale(String),
    #[error("sample is not realizable by the class")]
    Unrealizable,
    #[error("cover violation: {0}")]
    CoverViolation(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("game value target not reached; best certificate {best}")]
    GameTarget { best: String },
    #[error("subsequence selection failed after {attempts} attempts: {diagnostics}")]
    SelectionFailed { attempts: usize, diagnostics: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

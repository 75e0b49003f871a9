use thiserror::Error;

/// Errors raised by the library. The CLI maps the variants onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BggError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported rank {0} (expected 1..=7)")]
    UnsupportedRank(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("crossed_p must be contained in crossed_q ({0})")]
    Nesting(String),
    #[error("not representable: {0}")]
    Representability(String),
    #[error("module dimension {dim} exceeds the guard {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("coefficient module is not relative: {0}")]
    NotRelative(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("calibration failure: {0}")]
    Calibration(String),
}

impl BggError {
    pub fn kind(&self) -> &'static str {
        match self {
            BggError::Parse(_) => "parse",
            BggError::UnsupportedRank(_) => "unsupported-rank",
            BggError::Shape(_) => "shape",
            BggError::Nesting(_) => "nesting",
            BggError::Representability(_) => "representability",
            BggError::TooLarge { .. } => "too-large",
            BggError::NotRelative(_) => "not-relative",
            BggError::Internal(_) => "internal",
            BggError::Calibration(_) => "calibration",
        }
    }
}

pub type Result<T> = std::result::Result<T, BggError>;

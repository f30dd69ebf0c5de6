use thiserror::Error;

/// Everything that can go wrong in the pipeline.
///
/// Structural problems (shapes, unknown labels, malformed files) are kept
/// apart from mathematical failures so the CLI can map them to different
/// exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("group table is not a group: {0}")]
    NotAGroup(String),

    #[error("unknown irrep label `{0}`")]
    UnknownLabel(String),

    #[error("catalog integrity: {0}")]
    Integrity(String),

    #[error("not a projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },

    #[error("matrix is not positive: eigenvalue {min_eigenvalue:.3e} below tolerance")]
    NotPositive { min_eigenvalue: f64 },

    #[error("not a Morita equivalence: left inner products do not span the unit (residual {residual:.3e})")]
    NotMorita { residual: f64 },

    #[error("system is not free: Ellwood rank deficit {deficit}")]
    NotFree { deficit: usize },

    #[error("precondition failed: {what} (residual {residual:.3e})")]
    Precondition { what: String, residual: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by malformed input rather than a failed check.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::Shape(_)
                | Error::UnknownLabel(_)
                | Error::Invalid(_)
                | Error::Parse(_)
                | Error::NotAGroup(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

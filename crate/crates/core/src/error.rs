use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error at {locator}: {message}")]
    Parse { locator: String, message: String },

    #[error("invalid span for {0}")]
    InvalidSpan(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("too small: need at least {needed}, got {got}")]
    TooSmall { needed: usize, got: usize },

    #[error("degenerate training set: {0}")]
    DegenerateTrainingSet(String),

    #[error("kernel error: {0}")]
    Kernel(String),

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Wraps an error raised while processing a specific candidate.
    #[error("candidate {candidate}: {source}")]
    Candidate {
        candidate: String,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
}

impl Error {
    pub(crate) fn for_candidate(self, candidate: &str) -> Self {
        match self {
            e @ Error::Candidate { .. } => e,
            other => Error::Candidate {
                candidate: candidate.into(),
                source: alloc::boxed::Box::new(other),
            },
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

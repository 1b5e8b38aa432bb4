use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A bound or routine was used outside the hypotheses it is proved under.
    #[error("{bound}: requires {condition}")]
    Regime { bound: String, condition: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("search space of {estimate:.3e} candidates exceeds the cap {cap:.3e}")]
    SearchTooLarge { estimate: f64, cap: f64 },
    #[error("measure comparison still undecided at {bits} bits")]
    Undecided { bits: u32 },
    #[error("degree {degree} exceeds the factorization cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("rejection sampling for {what} accepted {accepted} of {attempts} draws")]
    Rejection {
        what: String,
        accepted: u64,
        attempts: u64,
    },
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn regime(bound: &str, condition: &str) -> Self {
        Error::Regime {
            bound: bound.to_string(),
            condition: condition.to_string(),
        }
    }

    /// Whether the error reports a violated precondition (CLI exit code 2).
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Regime { .. } | Error::Invalid(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

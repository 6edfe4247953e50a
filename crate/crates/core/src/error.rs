use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("entry ({row}, {col}) = {value} is not an integer after scaling")]
    NotIntegral {
        row: usize,
        col: usize,
        value: String,
    },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("homomorphism is not well defined: relation {relation} of the source does not map into the target relations")]
    IllDefinedMap { relation: usize },

    #[error("exterior power of degree {q} requested for a {n}x{n} matrix")]
    ExteriorDegree { q: usize, n: usize },

    #[error("could not parse {what}: {detail}")]
    Parse { what: String, detail: String },

    #[error("invalid input: {0}")]
    Schema(String),

    #[error("action is not transitive on the alphabet ({orbits} orbits)")]
    NotTransitive { orbits: usize },

    #[error("closure exceeded the bound of {bound} elements")]
    BoundExceeded { bound: usize },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
}

impl Error {
    /// True for malformed input, false for failed mathematical preconditions.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Schema(_) | Error::Dimension(_)
        )
    }

    pub(crate) fn parse(what: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Parse {
            what: what.into(),
            detail: detail.into(),
        }
    }
}

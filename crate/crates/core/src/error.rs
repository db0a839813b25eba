use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid singularity type: {0}")]
    InvalidSingularity(String),

    #[error("{field}: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("{0} is not a node of the subordination diagram")]
    NotInDag(String),

    #[error("enumeration bound exceeded: {param} = {value} (limit {limit})")]
    EnumerationLimit {
        param: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("coefficients are not l2-normalized (sum of squares = {0})")]
    NotNormalized(f64),

    #[error("empty lattice cap")]
    EmptyCap,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("unsupported phase-variable count k = {0} (only k = 1, 2)")]
    UnsupportedDimension(usize),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the polynomial core and the algebra built on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    UniverseMismatch { left: usize, right: usize },

    #[error("index out of range: {what} (ambient n = {n})")]
    IndexOutOfRange { what: String, n: usize },

    #[error("n = {n} is not supported: {reason}")]
    UnsupportedDimension { n: usize, reason: &'static str },

    #[error("membership is only decided in t-degree 2 and 3, got degree {degree}")]
    UnsupportedDegree { degree: u32 },

    #[error("polynomial involves variable {var} outside the ring {ring}")]
    NotInRing { var: String, ring: &'static str },

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("subsets A and B overlap in {0:?}")]
    OverlappingSubsets(Vec<usize>),

    #[error("malformed multiplication table: {0}")]
    MalformedTable(String),

    #[error("evaluation matrix of 1, x_1, ..., x_n at the points is singular")]
    BasisCriterionFailure,

    #[error("certificate not found: {0}")]
    CertificateNotFound(String),

    #[error("element has a component outside the {0} summand")]
    WrongSummand(&'static str),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

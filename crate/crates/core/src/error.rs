use thiserror::Error;

use crate::curve::MAX_COMPONENTS;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a curve needs at least one component")]
    NoComponents,

    #[error("{0} components exceed the enumeration limit of {MAX_COMPONENTS}")]
    TooManyComponents(usize),

    #[error("invalid intersection data: {0}")]
    InvalidIntersection(String),

    #[error("the dual graph is disconnected")]
    Disconnected,

    #[error("invalid point record {index}: {reason}")]
    InvalidPoint { index: usize, reason: String },

    #[error("point records do not reproduce |C{i} ∩ C{j}|: records give {records}, matrix gives {matrix}")]
    PointMismatch {
        i: usize,
        j: usize,
        records: u32,
        matrix: u32,
    },

    #[error("invalid subcurve mask {mask:#x} for {components} components")]
    InvalidSubcurve { mask: u32, components: usize },

    #[error("query needs singular point records, but the curve has none")]
    MissingPoints,

    #[error("separating point {point} lies on {incidences} branches; every separating point must be a node")]
    DaggerViolation { point: usize, incidences: usize },

    #[error("expected a vector of length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("total degree {total} is not an integer")]
    NonIntegralTotal { total: String },

    #[error("cannot parse rational {0:?}: expected an integer or \"num/den\"")]
    ParseRational(String),

    #[error("degree mismatch: multidegree has total {multidegree}, polarization has total {polarization}")]
    DegreeMismatch { multidegree: i64, polarization: i64 },

    #[error("polarization is not general (integral at subcurve {witness:?})")]
    NotGeneral { witness: Vec<usize> },

    #[error("value out of range: {0}")]
    Overflow(String),

    #[error("grid denominator must be positive")]
    ZeroDenominator,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by space construction, solvers and certificates.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch { expected: usize, found: usize },
    InvalidSpace(String),
    InvalidMatrix(String),
    /// A point that must lie on the unit sphere does not.
    NotUnit { norm: f64 },
    ZeroVector,
    ZeroFunctional,
    /// The supplied functional is not a support functional at the given point.
    NotSupporting { value: f64, dual_norm: f64 },
    ConflictingPins,
    /// The derivative interval test and the line minimization disagree.
    InternalInconsistency(String),
    NotInMaxSet { image_norm: f64, operator_norm: f64 },
    NotInMinSet { image_norm: f64, minimum: f64 },
    Unsupported(String),
    NoConvergence,
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidSpace(msg) => write!(f, "invalid norm space: {msg}"),
            Error::InvalidMatrix(msg) => write!(f, "invalid matrix: {msg}"),
            Error::NotUnit { norm } => write!(f, "vector is not on the unit sphere (norm {norm})"),
            Error::ZeroVector => write!(f, "vector must be nonzero"),
            Error::ZeroFunctional => write!(f, "functional must be nonzero"),
            Error::NotSupporting { value, dual_norm } => write!(
                f,
                "functional does not support the point (value {value}, dual norm {dual_norm})"
            ),
            Error::ConflictingPins => write!(f, "selector already pins a different functional at this point"),
            Error::InternalInconsistency(msg) => write!(f, "internal inconsistency: {msg}"),
            Error::NotInMaxSet { image_norm, operator_norm } => write!(
                f,
                "point is not in the norm attainment set (|Tx| = {image_norm}, |T| = {operator_norm})"
            ),
            Error::NotInMinSet { image_norm, minimum } => write!(
                f,
                "point is not in the minimum norm attainment set (|Tx| = {image_norm}, m(T) = {minimum})"
            ),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::NoConvergence => write!(f, "no optimization start converged"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

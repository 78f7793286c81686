use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants mirror the failure modes callers need to tell apart: a
/// non-split input, an input outside the supported arithmetic, or a
/// malformed value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("level or algebra mismatch: {0}")]
    LevelMismatch(String),

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("element is not a unit")]
    NonUnit,

    #[error("constant polynomial has no separability")]
    ConstantPolynomial,

    #[error("polynomial is not separable")]
    NotSeparable,

    #[error("invalid roots: {0}")]
    InvalidRoots(String),

    #[error("component of degree {0} is outside the supported arithmetic (degree <= 2)")]
    UnsupportedDegree(usize),

    #[error("discriminant {disc} exceeds the configured bound {bound}")]
    DiscriminantTooLarge { disc: String, bound: String },

    #[error("maximum number of tries exceeded: {0}")]
    MaxTriesExceeded(String),

    #[error("linear system is singular: {0}")]
    SingularSystem(String),

    #[error("divisor is not in the kernel of the differential")]
    NotInKernel,

    #[error("divisor is supported above a ramified prime")]
    RamifiedSupport,

    #[error("not a coboundary: {0}")]
    NotACoboundary(String),

    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),

    #[error("algebra is not associative: {0}")]
    NotAssociative(String),

    #[error("algebra has no unit")]
    NoUnit,

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag used in JSON error reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::LevelMismatch(_) => "LevelMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NonUnit => "NonUnit",
            Error::ConstantPolynomial => "ConstantPolynomial",
            Error::NotSeparable => "NotSeparable",
            Error::InvalidRoots(_) => "InvalidRoots",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::DiscriminantTooLarge { .. } => "DiscriminantTooLarge",
            Error::MaxTriesExceeded(_) => "MaxTriesExceeded",
            Error::SingularSystem(_) => "SingularSystem",
            Error::NotInKernel => "NotInKernel",
            Error::RamifiedSupport => "RamifiedSupport",
            Error::NotACoboundary(_) => "NotACoboundary",
            Error::InconsistentPresentation(_) => "InconsistentPresentation",
            Error::NotAssociative(_) => "NotAssociative",
            Error::NoUnit => "NoUnit",
            Error::Malformed(_) => "Malformed",
        }
    }
}

//! Crate-wide error type. Variants mirror the failure modes of each module so
//! callers can match on them without string inspection.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A per-draw operation on the triangular scheme needs the row length `n`.
    #[error("the triangular weight scheme needs an explicit sample size n")]
    MissingSampleSize,

    /// Moment computation would divide by a non-positive variance.
    #[error("weight variance must be positive")]
    NonPositiveVariance,

    /// All data values are equal, so S_n = 0 and the pivot is undefined.
    #[error("sample variance is zero (constant data)")]
    ZeroVariance,

    /// All shifted weights w_i - theta are zero.
    #[error("degenerate weights: every w_i - theta is zero")]
    DegenerateWeights,

    /// Method II needs a weight law that is symmetric about its mean.
    #[error("weight scheme is not symmetric about its mean")]
    NotSymmetric,

    /// Method I forbids theta inside the exclusion gap around the weight mean;
    /// for a symmetric scheme with delta = 0 the only SRF root is the mean
    /// itself, so no admissible window constant exists.
    #[error("only SRF root is the excluded weight mean (symmetric scheme, delta 0)")]
    ExclusionViolation,

    /// No sign change of SRF - delta inside the search bracket.
    #[error("no root of SRF - delta in bracket [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },

    /// Triangular weights must sum to the sample size exactly.
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    /// Bootstrap resampling kept producing zero-variance resamples.
    #[error("degenerate resample: {consecutive} consecutive zero-variance redraws")]
    DegenerateResample { consecutive: u32 },

    /// Input lengths or dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The standardizer S^(-1/2) has a vanishing determinant.
    #[error("singular standardizer matrix")]
    SingularStandardizer,

    /// The covariance matrix cannot be inverted even after regularization.
    #[error("singular covariance matrix")]
    SingularCovariance,

    /// No closed-form skewness/kurtosis is defined for this law.
    #[error("no closed form for this law: {0}")]
    NoClosedForm(String),

    /// A plain-text descriptor or experiment file failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// An experiment spec is internally inconsistent.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem failure while reading or writing experiment data.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

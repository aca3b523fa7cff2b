use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. The CLI prints [`Error::name`]
/// verbatim, so variant names are part of the external interface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("adaptive quadrature exhausted {limit} subdivisions (estimated error {error:e})")]
    SubdivisionLimitExceeded { limit: usize, error: f64 },

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadratureSpec(&'static str),

    #[error("shift bound {0} outside (0, 1/2]")]
    InvalidBound(f64),

    #[error("window mismatch: {0}")]
    WindowMismatch(String),

    #[error("invalid window half-width {0}")]
    InvalidWindow(i64),

    #[error("correlation matrix is numerically singular (condition number {cond:e})")]
    SingularCorrelation { cond: f64 },

    #[error("grid spacing {0} exceeds 0.05")]
    GridTooCoarse(f64),

    #[error("jitter {0} must be below 1/2")]
    JitterTooLarge(f64),

    #[error("invalid gap range [{lo}, {hi}]")]
    InvalidGapRange { lo: f64, hi: f64 },

    #[error("abscissae are not strictly increasing at position {0}")]
    NonMonotoneAbscissae(usize),

    #[error("signal sup-norm {0:e} is numerically zero")]
    ZeroSignal(f64),

    #[error("no crossings of the reference curve were found")]
    NoCrossings,

    #[error("sampling set is empty")]
    EmptySampleSet,

    #[error("Galerkin system is numerically singular (condition number {cond:e})")]
    SingularSystem { cond: f64 },

    #[error("least-squares system lacks full column rank (singular value ratio {ratio:e})")]
    RankDeficient { ratio: f64 },

    #[error("iteration diverged after {steps} steps (certified bound {rho})")]
    DivergenceDetected { steps: usize, rho: f64 },

    #[error("Gram matrix is not positive definite")]
    SingularGram,

    #[error("matrix is singular (smallest singular value underflows)")]
    SingularMatrix,

    #[error("no covering sampling set after {attempts} draws")]
    CoverageNotReached { attempts: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// Stable variant name, e.g. `"JitterTooLarge"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::SubdivisionLimitExceeded { .. } => "SubdivisionLimitExceeded",
            Error::InvalidQuadratureSpec(_) => "InvalidQuadratureSpec",
            Error::InvalidBound(_) => "InvalidBound",
            Error::WindowMismatch(_) => "WindowMismatch",
            Error::InvalidWindow(_) => "InvalidWindow",
            Error::SingularCorrelation { .. } => "SingularCorrelation",
            Error::GridTooCoarse(_) => "GridTooCoarse",
            Error::JitterTooLarge(_) => "JitterTooLarge",
            Error::InvalidGapRange { .. } => "InvalidGapRange",
            Error::NonMonotoneAbscissae(_) => "NonMonotoneAbscissae",
            Error::ZeroSignal(_) => "ZeroSignal",
            Error::NoCrossings => "NoCrossings",
            Error::EmptySampleSet => "EmptySampleSet",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::DivergenceDetected { .. } => "DivergenceDetected",
            Error::SingularGram => "SingularGram",
            Error::SingularMatrix => "SingularMatrix",
            Error::CoverageNotReached { .. } => "CoverageNotReached",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse { .. } => "Parse",
        }
    }
}

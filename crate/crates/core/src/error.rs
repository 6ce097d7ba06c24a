use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("rho must lie in 4..=10, got {0}")]
    RhoOutOfRange(usize),

    #[error("self-product must be positive, got {0}")]
    NotSpacelike(String),

    #[error("vector {0} is not isotropic")]
    NotIsotropic(String),

    #[error("reflection in {0} does not preserve the lattice")]
    NonIntegral(String),

    #[error("self-product {0} is not a perfect square")]
    NotPerfectSquare(String),

    #[error("curvature is zero: the center lies at infinity")]
    CurvatureZero,

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("no real intersection: {0}")]
    NoIntersection(String),

    #[error("cannot parse vector {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("descent exceeded {0} steps")]
    IterationCap(usize),

    #[error("membership of {0} could not be certified")]
    NotCertified(String),

    #[error("nothing to render")]
    EmptyRender,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate linear-fractional map: ad - bc = 0")]
    Degenerate,
    #[error("map has a pole at the input point")]
    PoleAtInput,
    #[error("map is not a self-map of the unit disk")]
    NotSelfMap,
    #[error("map is not parabolic")]
    NotParabolic,
    #[error("map has no fixed point on the unit circle")]
    NoBoundaryFixedPoint,
    #[error("map is not eligible: {0}")]
    NotEligible(String),
    #[error("map is not an automorphism of the disk")]
    NotAutomorphism,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("crossed-product elements have different bases or fixed points; rebase first")]
    BaseMismatch,
    #[error("map derivative {derivative} is not an integral power of base {base}")]
    BaseIncompatible { derivative: f64, base: f64 },
    #[error("element is not triangular (support must lie in [0, N])")]
    NotTriangular,
    #[error("polynomial vanishes on the unit circle")]
    VanishesOnCircle,
    #[error("winding number mismatch: root count {roots}, argument integral {argument}")]
    CrossCheckMismatch { roots: i64, argument: i64 },
    #[error("punctured determinant is singular")]
    SingularDenominator,
    #[error("power series diverges on the closed disk (|c| >= |d|)")]
    SeriesDivergence,
    #[error("parse error: {0}")]
    Parse(String),
}

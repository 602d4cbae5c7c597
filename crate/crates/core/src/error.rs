use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {0} lies on a pole of the map")]
    PoleAtPoint(Complex64),
    #[error("point {0} is a critical point of the map (|f'| <= {1:e})")]
    CriticalPoint(Complex64, f64),
    #[error("equation f(z) = w is degenerate (P - wQ vanishes identically)")]
    DegenerateEquation,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("images f(z1) and f(z2) coincide or are infinite")]
    CoincidentImages,
    #[error("curve endpoints coincide")]
    DegeneratePair,
    #[error("curve parameter t must be nonzero")]
    ZeroParameter,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("point set contains duplicate points")]
    DuplicatePoints,
    #[error("domain not supported here: {0}")]
    UnsupportedDomain(String),
    #[error("point {0} is not interior to the domain")]
    NotInterior(Complex64),
    #[error("invalid rational map: {0}")]
    InvalidMap(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("map is not normalized: expected f(z1) = -1 and f(z2) = 1")]
    NotNormalized,
    #[error("inverse branch continuation failed near {0}")]
    ContinuationFailed(Complex64),
    #[error("condenser plates {0} and {1} overlap")]
    PlateOverlap(usize, usize),
    #[error("condenser plate {0} is not strictly inside the domain")]
    PlateOutsideDomain(usize),
    #[error("plate {index} of radius {radius:e} spans fewer than 3 grid cells (h = {h:e})")]
    GridTooCoarse { index: usize, radius: f64, h: f64 },
    #[error("plate {0} meets the imaginary axis")]
    PlateOnAxis(usize),
    #[error("plate radius {0:e} is too large for the asymptotic expansion")]
    RadiusTooLarge(f64),
    #[error("Monte Carlo budget exhausted: standard error {stderr:e} above tolerance {tolerance:e}")]
    BudgetExhausted { stderr: f64, tolerance: f64 },
    #[error("iterative solver did not converge: {0}")]
    NoConvergence(String),
    #[error("report list is empty")]
    EmptyReport,
    #[error("report list mixes record types")]
    MixedReportTypes,
    #[error("scene is empty")]
    EmptyScene,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

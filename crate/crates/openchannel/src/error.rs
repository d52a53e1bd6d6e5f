use thiserror::Error;

/// Errors produced by the channel, kernel, solver and evaluation layers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate channel: 2d*sqrt(k2^2-k1^2) = {value:.12} is within tolerance of {n}*pi; the Wronskian vanishes at +-k1")]
    DegenerateChannel { value: f64, n: i64 },

    #[error("root polishing failed near xi = {xi}: bracket did not converge")]
    RootPolishFailure { xi: f64 },

    #[error("frequency xi = {xi} is within {dist:.3e} of a Wronskian root; route the contour around the pole")]
    NearPole { xi: f64, dist: f64 },

    #[error("quadrature budget exceeded: attained error estimate {attained:.3e} > requested {requested:.3e}")]
    QuadratureBudgetExceeded { attained: f64, requested: f64 },

    #[error("the order-2 boundary kernel is log-singular at coincident points inside the channel (x2 = y2 = {x2})")]
    DiagonalSingularity { x2: f64 },

    #[error("Neumann iteration diverged after {iterations} terms; contrast too large for the series")]
    ContrastTooLarge { iterations: usize },

    #[error("dense transmission system is numerically singular (pivot magnitude {pivot:.3e})")]
    SingularSystem { pivot: f64 },

    #[error("Fresnel 4x4 system is singular at kappa2 = {kappa2}")]
    FresnelSingular { kappa2: f64 },

    #[error("projected mode-scattering system is singular")]
    SingularProjectedSystem,

    #[error("field target coincides with a source node at (0, {y2})")]
    CoincidentSourceTarget { y2: f64 },

    #[error("domain error in {op}: {message}")]
    Domain { op: &'static str, message: String },

    #[error("mode index {index} out of range 1..={count}")]
    ModeIndexOutOfRange { index: usize, count: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

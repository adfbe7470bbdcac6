use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Laplace transform diverges at s = {s} (requires s > {bound})")]
    DivergentTransform { s: f64, bound: f64 },

    #[error("invalid tilt: {0}")]
    InvalidTilt(String),

    #[error("f1 has no positive root: delta * beta = {lhs} <= theta * j_hat(nu) = {rhs}")]
    NoPositiveRoot { lhs: f64, rhs: f64 },

    #[error("B = {value} outside the domain [{lower}, {upper})")]
    OutOfDomain { value: f64, lower: f64, upper: f64 },

    #[error("B-curve self-consistency failed at t = {t}: |G(B(t)) - t| = {residual:e}")]
    GridTooCoarse { t: f64, residual: f64 },

    #[error("horizon {horizon} not covered by the parameter regime: {reason}")]
    HorizonExceedsRegime { horizon: f64, reason: String },

    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),

    #[error("rate function is unbounded or non-finite on [0, {horizon}]")]
    UnboundedRate { horizon: f64 },

    #[error("dominating bound {bound} exceeded by intensity {intensity} at t = {t}")]
    DominationViolated { t: f64, intensity: f64, bound: f64 },

    #[error("statistic overflows f64 (log value {log_value})")]
    Overflow { log_value: f64 },

    #[error("time {t} outside path horizon [0, {horizon}]")]
    OutOfHorizon { t: f64, horizon: f64 },

    #[error("need at least 2 paths, got {0}")]
    InsufficientPaths(usize),

    #[error("unsupported model: {0}")]
    Unsupported(String),
}

impl Error {
    /// Coarse classification used by front ends to choose exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter(_)
            | Error::InvalidTilt(_)
            | Error::InsufficientPaths(_)
            | Error::Unsupported(_) => ErrorKind::Config,
            Error::NoPositiveRoot { .. } | Error::HorizonExceedsRegime { .. } => ErrorKind::Regime,
            _ => ErrorKind::Numerical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Regime,
    Numerical,
}

pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

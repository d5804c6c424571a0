use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid drive parameters: {0}")]
    InvalidParams(String),

    /// The adaptive integrator could not make progress.
    #[error("integration failed at t = {time}: {reason}")]
    IntegrationFailure { time: f64, reason: String },

    /// Adaptive quadrature exhausted its interval budget. `level` is the
    /// nesting depth (1 = outermost integral) at which the failure happened.
    #[error(
        "quadrature failed at nesting level {level} on [0, {upper}]: \
         error estimate {err_estimate:e} exceeds tolerance {tol:e}"
    )]
    QuadratureFailure {
        level: usize,
        upper: f64,
        err_estimate: f64,
        tol: f64,
    },

    /// Quadrature and Bessel-series phase integrals disagree.
    #[error(
        "phase integral cross-check failed at t = {t}: discrepancy {discrepancy:e} > {allowed:e}"
    )]
    CrossCheck {
        t: f64,
        discrepancy: f64,
        allowed: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

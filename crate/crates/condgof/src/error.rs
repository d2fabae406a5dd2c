use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty sample")]
    EmptySample,

    /// All observations are zero, so the conditional law is a point mass and
    /// maximum likelihood estimates are on the boundary.
    #[error("degenerate sample: every observation is zero (t = 0)")]
    DegenerateSample,

    /// Optimizer ran out of iterations. Carries the best iterate seen so the
    /// caller can still report something.
    #[error("estimation did not converge after {iterations} iterations; best iterate {best:?} with log-likelihood {log_likelihood}")]
    EstimationFailure {
        iterations: usize,
        best: (f64, f64),
        log_likelihood: f64,
    },

    #[error("statistic {name} is undefined for this sample: {reason}")]
    UndefinedStatistic { name: &'static str, reason: String },

    #[error("moment estimate undefined: {0}")]
    UndefinedEstimate(String),

    #[error("total t = {t} is infeasible: sum of binomial sizes is {capacity}")]
    InfeasibleTotal { t: u64, capacity: u64 },

    #[error("malformed bar positions: {0}")]
    MalformedBars(String),

    #[error("malformed composition: {0}")]
    MalformedComposition(String),

    /// The power-series coefficient vanished on a state the chain can reach.
    #[error("power-series coefficient a({x}) = 0 on a reachable state")]
    ZeroCoefficient { x: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

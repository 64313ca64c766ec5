use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("contract violation: {0}")]
    Contract(&'static str),

    /// The Gram matrix failed its Cholesky factorization.
    #[error("gram matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite {
        /// Row at which the factorization broke down.
        pivot: usize,
        /// The non-positive pivot value.
        value: f64,
    },

    /// A concentration ratio or relative error was requested for a zero signal.
    #[error("ratio undefined for a zero reference signal")]
    ZeroSignal,

    /// The reconstruction iteration blew up.
    #[error("iteration diverged at iterate {iterate} (residual {residual:e})")]
    Divergence {
        /// Index of the iterate whose residual exceeded the guard.
        iterate: usize,
        /// The offending residual norm.
        residual: f64,
    },

    /// A closed-form bound was evaluated outside the hypothesis that makes
    /// its denominator positive.
    #[error("bound hypothesis violated: {0}")]
    Infeasible(&'static str),

    /// No tabulated constant exists for this decay exponent.
    #[error("unsupported decay exponent alpha = {0}")]
    UnsupportedAlpha(f64),
}

/// Result alias for the core crate.
pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the Gamma function at x = {0}")]
    Pole(f64),

    #[error("result of {0} exceeds the representable range")]
    Overflow(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("jitter variance 4*sigma_p^2 + 4*d_x^2*sigma_o^2 is zero; zeta is undefined")]
    DegenerateJitter,

    #[error("moment matching failed: {0}")]
    MomentMatchFailure(String),

    #[error("k_A - m_A = {0} is (near) an integer; the series form is undefined")]
    DegenerateParameters(f64),

    #[error("outage floor undefined: zeta = {zeta} >= 2 * min(k_A, m_A) = {limit}")]
    FloorUndefined { zeta: f64, limit: f64 },

    #[error("extended-precision evaluation needs {bits} bits, above the working cap")]
    PrecisionExhausted { bits: usize },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

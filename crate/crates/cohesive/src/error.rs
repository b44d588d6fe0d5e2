//! Crate-wide error type.

use thiserror::Error;

use crate::model::HypothesisReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature did not converge: {subdivisions} subdivisions used, error estimate {estimate:.3e}")]
    NonConvergent { subdivisions: usize, estimate: f64 },

    #[error("integrand evaluated to a non-finite value at t = {at}")]
    NonFinite { at: f64 },

    #[error("root is not bracketed on [{lo}, {hi}]: f(lo) = {flo:.3e}, f(hi) = {fhi:.3e}")]
    NoBracket { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("sampled function is not strictly monotone")]
    NotMonotone,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("operation requires the {expected} regime")]
    WrongRegime { expected: &'static str },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypothesis checks failed:\n{0}")]
    HypothesisViolation(HypothesisReport),

    #[error("incompatible ingredients: {0}")]
    Incompatible(String),

    #[error("sampled tail exceeds the declared decay envelope by more than 10x at t = {at}")]
    EnvelopeViolated { at: f64 },

    #[error("target derivative is not invertible: {0}")]
    NotInvertible(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

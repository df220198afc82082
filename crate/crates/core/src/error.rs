use thiserror::Error;

use crate::quadrature::QuadResult;

/// Errors raised by the numerical kernels and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma pole: argument {0} is within 1e-12 of a non-positive integer")]
    Pole(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("jet exhausted: derivative order {requested} requested, amplitude carries {available}")]
    JetExhausted { requested: usize, available: usize },

    #[error("sequence acceleration stalled after {terms} terms (residual {residual:e})")]
    AccelerationStalled {
        terms: usize,
        residual: f64,
        best: QuadResult,
    },

    #[error("divergent integral: Taylor coefficient C_{n} requires n <= {max}")]
    DivergentIntegral { n: usize, max: i64 },

    #[error("ill-conditioned fit: condition number {0:e}")]
    IllConditionedFit(f64),

    #[error("Taylor order {requested} exceeds the remainder order {remainder_order}")]
    OrderTooHigh {
        requested: usize,
        remainder_order: i64,
    },

    #[error("slope fit needs at least 3 positive points, got {0}")]
    InsufficientPoints(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

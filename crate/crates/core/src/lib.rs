//! Oscillatory integrals `∫₀^∞ e^{it x^{-α}} φ(x) dx` with a singular phase and
//! their Laplace analogues: small-`t` expansions with explicit coefficients, and
//! an independent quadrature oracle to check them against.

pub mod amplitude;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};

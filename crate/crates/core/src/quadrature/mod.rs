//! Quadrature oracles for the singular-phase integrals.
//!
//! Everything here is deliberately independent of the expansion machinery in
//! [`crate::asymptotics`]: the oracles only evaluate integrals, by adaptive
//! Gauss–Kronrod panels, substitution, half-period partitioning of infinite
//! oscillatory tails and sequence acceleration of the resulting partial sums.

mod accel;
mod kronrod;
mod oracles;
mod tail;

use serde::{Deserialize, Serialize};

use crate::specfun::C64;

pub use accel::{euler_average, levin_u, Accelerator};
pub use kronrod::{integrate_breaks, integrate_panel, integrate_panel_real, QuadValue};
pub use oracles::{
    amplitude_integral, amplitude_moment, oracle_f, oracle_f_with_offset, oracle_fresnel, oracle_i, oracle_i_deviation,
    oracle_i_with, oracle_l, oracle_l_deviation, Route,
};
pub use tail::{osc_tail, osc_tail_with};

/// Requested accuracy of a quadrature call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_evals: 10_000_000,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Tolerance {
            abs_tol,
            rel_tol,
            ..Tolerance::default()
        }
    }

    /// The tight setting used by the verification experiments.
    pub fn tight() -> Self {
        Tolerance::new(1e-15, 1e-13)
    }

    /// `max(abs_tol, rel_tol·|value|)`.
    pub fn target(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }

    /// Both tolerances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Tolerance {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_evals: self.max_evals,
        }
    }
}

/// Value, error estimate and cost of an oracle computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: C64,
    pub err_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    pub fn exact(value: C64) -> Self {
        QuadResult {
            value,
            err_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Sum of two independent pieces of one integral.
    pub fn combine(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            err_estimate: self.err_estimate + other.err_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(self, factor: f64) -> QuadResult {
        QuadResult {
            value: self.value * factor,
            err_estimate: self.err_estimate * factor.abs(),
            ..self
        }
    }
}

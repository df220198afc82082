//! Infinite oscillatory tails `∫_{y0}^∞ e^{ity} g(y) dy`.

use std::f64::consts::PI;

use super::accel::{euler_average, levin_u, Accelerator};
use super::kronrod::integrate_breaks;
use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};
use crate::specfun::{unit_phase, C64};

const MAX_LEVIN_ORDER: usize = 12;
const EULER_DEPTH: usize = 20;
const MIN_TERMS: usize = 6;
const MAX_TERMS: usize = 300;
/// Consecutive negligible terms after which the plain partial sum is final.
const QUIET_RUN: usize = 4;

/// Interior breakpoints for `[a, b]`, geometric when the segment spans
/// several octaves so that algebraic decay is resolved from the first pass.
fn segment_breaks(a: f64, b: f64) -> Vec<f64> {
    let mut breaks = vec![a];
    if a > 0.0 && b / a > 4.0 {
        let mut x = 2.0 * a;
        while x < b {
            breaks.push(x);
            x *= 2.0;
        }
    }
    breaks.push(b);
    breaks
}

/// `∫_{y0}^∞ e^{ity} g(y) dy` by half-period partition and Levin-u acceleration.
pub fn osc_tail<G>(g: G, y0: f64, t: f64, tol: &Tolerance) -> Result<QuadResult>
where
    G: Fn(f64) -> C64,
{
    osc_tail_with(g, y0, t, tol, Accelerator::Levin)
}

/// [`osc_tail`] with an explicit choice of accelerator.
///
/// Segment `k` covers `[y0 + kh, y0 + (k+1)h]` with `h = π/|t|`; on it
/// `e^{ity} = e^{ity0} (-1)^k e^{its}`, so the series is summed without the
/// common phase and the phase is applied once at the end.
pub fn osc_tail_with<G>(g: G, y0: f64, t: f64, tol: &Tolerance, accel: Accelerator) -> Result<QuadResult>
where
    G: Fn(f64) -> C64,
{
    if t == 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("oscillatory tail needs finite t != 0, got {t}")));
    }
    if !y0.is_finite() {
        return Err(Error::Domain(format!("tail start must be finite, got {y0}")));
    }
    let h = PI / t.abs();
    let seg_tol = Tolerance {
        abs_tol: tol.abs_tol * 1e-2,
        rel_tol: tol.rel_tol * 1e-2,
        max_evals: tol.max_evals,
    };
    let mut terms: Vec<C64> = Vec::new();
    let mut partial: Vec<C64> = Vec::new();
    let mut seg_err = 0.0;
    let mut evals = 0usize;
    let mut segments_ok = true;
    let mut estimates: Vec<Option<C64>> = Vec::new();
    let mut sum = C64::new(0.0, 0.0);
    let mut last_diff = f64::INFINITY;
    let mut best = C64::new(0.0, 0.0);

    let finish = |value: C64, err: f64, evaluations: usize, converged: bool| QuadResult {
        value: value * unit_phase(t * y0),
        err_estimate: err,
        evaluations,
        converged,
    };

    for k in 0..MAX_TERMS {
        let a = y0 + k as f64 * h;
        let b = y0 + (k + 1) as f64 * h;
        let breaks = segment_breaks(a, b);
        let (value, err, n, ok) = integrate_breaks(|y| unit_phase(t * (y - a)) * g(y), &breaks, &seg_tol);
        let term = if k % 2 == 0 { value } else { -value };
        evals += n;
        seg_err += err;
        segments_ok &= ok;
        sum += term;
        terms.push(term);
        partial.push(sum);

        let n_terms = terms.len();
        if n_terms >= QUIET_RUN {
            let quiet = tol.target(sum.norm()) * 1e-3;
            if terms[n_terms - QUIET_RUN..].iter().all(|a| a.norm() <= quiet) {
                return Ok(finish(sum, seg_err + terms[n_terms - 1].norm(), evals, segments_ok));
            }
        }

        let idx = n_terms - 1;
        let est = match accel {
            Accelerator::Levin => {
                let order = idx.min(MAX_LEVIN_ORDER);
                levin_u(&partial, &terms, idx - order, order)
            }
            Accelerator::Euler => euler_average(&partial, idx - idx.min(EULER_DEPTH)),
        };
        estimates.push(est);
        let Some(current) = est else {
            continue;
        };
        best = current;
        if n_terms < 2 {
            continue;
        }
        let Some(Some(prev)) = estimates.get(idx - 1).copied() else {
            continue;
        };
        let diff = (current - prev).norm();
        let target = tol.target(current.norm());
        if n_terms >= MIN_TERMS && diff <= target && last_diff <= target {
            let err = diff.max(last_diff) + seg_err;
            return Ok(finish(current, err, evals, segments_ok && err <= target.max(seg_err)));
        }
        last_diff = diff;
    }
    let best = finish(best, last_diff, evals, false);
    Err(Error::AccelerationStalled {
        terms: MAX_TERMS,
        residual: last_diff,
        best,
    })
}

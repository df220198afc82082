//! Least-squares extraction of Taylor coefficients that have no closed form.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::alpha::AlphaSpec;
use super::expansion::{oracle_deviation, singular_term, taylor_term, ExpansionTerm, Kind};
use crate::amplitude::Amplitude;
use crate::error::{Error, Result};
use crate::quadrature::Tolerance;
use crate::specfun::C64;

pub const DEFAULT_FIT_WINDOW: (f64, f64) = (1e-6, 1e-3);
pub const FIT_POINTS: usize = 24;
/// Largest singular-value ratio accepted before the fit is rejected.
pub const CONDITION_LIMIT: f64 = 1e8;

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalFit {
    /// `(k, C_k)` for every fitted column, including the guard column above `requested`.
    pub coeffs: Vec<(u64, C64)>,
    pub requested: u64,
    pub condition_number: f64,
    pub window: (f64, f64),
    pub points: usize,
    /// Largest weighted residual over the grid.
    pub residual: f64,
}

impl EmpiricalFit {
    pub fn coeff(&self, k: u64) -> Option<C64> {
        self.coeffs.iter().find(|(j, _)| *j == k).map(|&(_, c)| c)
    }

    pub fn requested_coeff(&self) -> C64 {
        self.coeff(self.requested).expect("requested column is always fitted")
    }
}

pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let last = points - 1;
    (0..points)
        .map(|i| match i {
            0 => lo,
            i if i == last => hi,
            i => (a + (b - a) * i as f64 / last as f64).exp(),
        })
        .collect()
}

/// Every term with exponent below `limit` that has a closed form, except `C₀`.
fn known_terms(alpha: &AlphaSpec, phi: &Amplitude, kind: Kind, limit: f64, tol: &Tolerance) -> Result<Vec<ExpansionTerm>> {
    let mut terms = Vec::new();
    let mut n = 1;
    while alpha.term_exponent(n).value() < limit && (n as usize) <= phi.jet_len() {
        if let Some(term) = singular_term(alpha, phi, n, kind)? {
            terms.push(term);
        }
        n += 1;
    }
    for k in 1..=alpha.max_convergent_taylor().max(0) as u64 {
        terms.push(taylor_term(alpha, phi, k, kind, tol)?);
    }
    Ok(terms)
}

/// Fits `C_k` for `k = ⌈1/α⌉ … n+1` to the oracle deviation on a log grid in `window`
/// after removing all closed-form terms below `t^{n+2}`.
///
/// The column `n+1` absorbs the next power so that `C_n` is not biased by it.
pub fn coeff_c_empirical(
    alpha: &AlphaSpec,
    phi: &Amplitude,
    n: u64,
    kind: Kind,
    window: (f64, f64),
    tol: &Tolerance,
) -> Result<EmpiricalFit> {
    let kc = alpha.max_convergent_taylor().max(0) as u64;
    if n <= kc {
        return Err(Error::InvalidSpec(format!(
            "C_{n} has a closed form for alpha = {alpha} (n <= {kc}); the fit is for n > {kc}"
        )));
    }
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidSpec(format!("fit window [{lo}, {hi}] must satisfy 0 < lo < hi")));
    }
    let known = known_terms(alpha, phi, kind, (n + 2) as f64, tol)?;
    let ts = log_grid(lo, hi, FIT_POINTS);
    let devs: Vec<C64> = ts
        .par_iter()
        .map(|&t| oracle_deviation(alpha, phi, kind, t, tol).map(|r| r.value))
        .collect::<Result<_>>()?;

    let first = kc + 1;
    let cols = (n + 2 - first) as usize;
    let rows = ts.len();
    let mut design = DMatrix::<f64>::zeros(rows, cols);
    let mut rhs_re = DVector::<f64>::zeros(rows);
    let mut rhs_im = DVector::<f64>::zeros(rows);
    for (i, (&t, &dev)) in ts.iter().zip(&devs).enumerate() {
        let s = t / hi;
        for j in 0..cols {
            design[(i, j)] = s.powi(j as i32);
        }
        let known_sum: C64 = known.iter().map(|term| term.eval(t)).sum();
        let y = (dev - known_sum) / t.powi(first as i32);
        rhs_re[i] = y.re;
        rhs_im[i] = y.im;
    }

    let svd = design.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition_number = sv.max() / sv.min();
    if !(condition_number <= CONDITION_LIMIT) {
        return Err(Error::IllConditionedFit(condition_number));
    }
    let eps = sv.max() * f64::EPSILON;
    let beta_re = svd.solve(&rhs_re, eps).map_err(|_| Error::IllConditionedFit(condition_number))?;
    let beta_im = svd.solve(&rhs_im, eps).map_err(|_| Error::IllConditionedFit(condition_number))?;

    let res_re = &design * &beta_re - &rhs_re;
    let res_im = &design * &beta_im - &rhs_im;
    let residual = res_re
        .iter()
        .zip(res_im.iter())
        .map(|(a, b)| a.hypot(*b))
        .fold(0.0, f64::max);

    let coeffs = (0..cols)
        .map(|j| {
            let k = first + j as u64;
            let scale = hi.powi(k as i32 - first as i32);
            (k, C64::new(beta_re[j], beta_im[j]) / scale)
        })
        .collect();
    Ok(EmpiricalFit {
        coeffs,
        requested: n,
        condition_number,
        window,
        points: rows,
        residual,
    })
}

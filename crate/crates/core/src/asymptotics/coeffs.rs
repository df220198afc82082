//! Closed-form coefficients of the small-`t` expansions.
//!
//! Notation: `a_k = φ⁽ᵏ⁾(0)/k!`. For `n ≥ 1` the `n`-th singular term has
//! exponent `n/α`; it is a plain power when `n/α ∉ ℕ` and a `t^m log t` term
//! when `n/α = m ∈ ℕ`. Exactly one of the two coefficients at each `n` is
//! structurally present.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::alpha::{AlphaSpec, Exponent};
use super::expansion::ExpansionTerm;
use crate::amplitude::Amplitude;
use crate::error::{Error, Result};
use crate::quadrature::{amplitude_moment, Tolerance};
use crate::specfun::{factorial, gamma, i_pow, unit_phase, unit_phase_pi, C64};

fn check_index(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidSpec("singular-term index n starts at 1".into()))
    } else {
        Ok(())
    }
}

/// True when the `n`-th singular term is a log term (`p | n`, exact test).
pub fn is_log_index(alpha: &AlphaSpec, n: u64) -> bool {
    alpha.integer_ratio(n).is_some()
}

/// `e^{-nπi/(2α)}`, exact on quarter turns for rational `α`.
pub fn power_phase(alpha: &AlphaSpec, n: u64) -> C64 {
    match *alpha {
        AlphaSpec::Rational { p, q } => unit_phase_pi(-((n * q) as i64), 2 * p as i64),
        AlphaSpec::Irrational { value } => unit_phase(-(n as f64) * PI / (2.0 * value)),
    }
}

fn minus_n_over_alpha(alpha: &AlphaSpec, n: u64) -> f64 {
    match *alpha {
        AlphaSpec::Rational { p, q } => -((n * q) as f64 / p as f64),
        AlphaSpec::Irrational { value } => -(n as f64) / value,
    }
}

/// `Â_n = (1/α) a_{n-1} Γ(-n/α)`, zero on log indices.
pub fn coeff_a_hat(alpha: &AlphaSpec, phi: &Amplitude, n: u64) -> Result<f64> {
    check_index(n)?;
    if is_log_index(alpha, n) {
        return Ok(0.0);
    }
    let a = phi.taylor_coeff(n as usize - 1)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(a * gamma(minus_n_over_alpha(alpha, n))? * alpha.recip())
}

/// `A_n = e^{-nπi/(2α)} Â_n`.
pub fn coeff_a(alpha: &AlphaSpec, phi: &Amplitude, n: u64) -> Result<C64> {
    let hat = coeff_a_hat(alpha, phi, n)?;
    Ok(power_phase(alpha, n) * hat)
}

// Shared by the B and Č formulas so that the reindexed forms agree bit for bit.
fn log_coeff(scale: f64, a: f64, m: u64, unit: C64) -> C64 {
    unit * (scale * a / factorial(m as usize))
}

/// `B_n = -(1/α) a_{n-1} i^m/m!` with `m = n/α`; zero unless `p | n`.
pub fn coeff_b(alpha: &AlphaSpec, phi: &Amplitude, n: u64) -> Result<C64> {
    check_index(n)?;
    let Some(m) = alpha.integer_ratio(n) else {
        return Ok(C64::new(0.0, 0.0));
    };
    let a = phi.taylor_coeff(n as usize - 1)?;
    Ok(log_coeff(-alpha.recip(), a, m, i_pow(m)))
}

/// `Č_m = -(q/p) a_{pm-1} i^{qm}/(qm)!`, the log coefficient indexed by `m` for `α = p/q`.
pub fn coeff_b_check(alpha: &AlphaSpec, phi: &Amplitude, m: u64) -> Result<C64> {
    let AlphaSpec::Rational { p, q } = *alpha else {
        return Err(Error::InvalidSpec("the reindexed log coefficient needs a rational alpha".into()));
    };
    check_index(m)?;
    let a = phi.taylor_coeff((p * m) as usize - 1)?;
    Ok(log_coeff(-(q as f64 / p as f64), a, q * m, i_pow(q * m)))
}

/// `B̂_n = -(1/α) a_{n-1} (-1)^m/m!`: the Laplace log coefficient.
///
/// `e^{-ty}` replaces `e^{ity}`, so `i^m` becomes `(-1)^m`.
pub fn coeff_b_hat(alpha: &AlphaSpec, phi: &Amplitude, n: u64) -> Result<f64> {
    check_index(n)?;
    let Some(m) = alpha.integer_ratio(n) else {
        return Ok(0.0);
    };
    let a = phi.taylor_coeff(n as usize - 1)?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(log_coeff(-alpha.recip(), a, m, C64::new(sign, 0.0)).re)
}

fn moment(alpha: &AlphaSpec, phi: &Amplitude, n: u64, tol: &Tolerance) -> Result<f64> {
    let max = alpha.max_convergent_taylor();
    if n as i64 > max {
        return Err(Error::DivergentIntegral { n: n as usize, max });
    }
    let s = match *alpha {
        AlphaSpec::Rational { p, q } => (n * p) as f64 / q as f64,
        AlphaSpec::Irrational { value } => n as f64 * value,
    };
    Ok(amplitude_moment(phi, s, tol)?.value.re)
}

/// `C_n = (iⁿ/n!) ∫₀^R φ(x) x^{-αn} dx` for `n ≤ ⌈1/α⌉ − 1`.
pub fn coeff_c(alpha: &AlphaSpec, phi: &Amplitude, n: u64, tol: &Tolerance) -> Result<C64> {
    let m = moment(alpha, phi, n, tol)?;
    Ok(i_pow(n) * (m / factorial(n as usize)))
}

/// `Ĉ_n = ((-1)ⁿ/n!) ∫₀^R φ(x) x^{-αn} dx`.
pub fn coeff_c_hat(alpha: &AlphaSpec, phi: &Amplitude, n: u64, tol: &Tolerance) -> Result<f64> {
    let m = moment(alpha, phi, n, tol)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * m / factorial(n as usize))
}

/// Singular part of `F_p(t) = ∫ e^{itx} x^{-p-1} χ(x) dx` as `t → 0⁺`.
///
/// `e^{-pπi/2} Γ(-p) t^p` for non-integer `p`; `-(i^p/p!) t^p log t` for `p ∈ ℕ`.
pub fn singular_part_f(p: f64) -> Result<ExpansionTerm> {
    if !(p > -1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("F_p needs p > -1, got {p}")));
    }
    if p >= 0.0 && p.fract() == 0.0 {
        let m = p as u64;
        let coeff = -i_pow(m) / factorial(m as usize);
        return ExpansionTerm::new(coeff, Exponent::integer(m as i64), 1, format!("B~_{m}"));
    }
    let coeff = unit_phase(-p * PI / 2.0) * gamma(-p)?;
    ExpansionTerm::new(coeff, Exponent::Real(p), 0, format!("A~_{p}"))
}

/// Which of the three small-`t` behaviours of `I_α(t) − C₀` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SubOne,
    One,
    SuperOne,
}

/// The scale `I_α(t) − C₀` is divided by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalizer {
    T,
    TLogT,
    TPow(Exponent),
}

impl Normalizer {
    pub fn apply(&self, t: f64) -> f64 {
        match *self {
            Normalizer::T => t,
            Normalizer::TLogT => t * t.ln(),
            Normalizer::TPow(e) => t.powf(e.value()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Normalizer::T => "t".into(),
            Normalizer::TLogT => "t log t".into(),
            Normalizer::TPow(e) => format!("t^({e})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConstant {
    pub regime: Regime,
    pub constant: C64,
    pub normalizer: Normalizer,
}

fn regime(alpha: &AlphaSpec) -> Result<Regime> {
    use std::cmp::Ordering::*;
    match (alpha.cmp_one(), alpha.is_rational()) {
        (Less, _) => Ok(Regime::SubOne),
        (Equal, true) => Ok(Regime::One),
        (Equal, false) => Err(Error::InvalidSpec("alpha = 1 is rational; declare it as 1/1".into())),
        (Greater, _) => Ok(Regime::SuperOne),
    }
}

/// `lim (I_α(t) − C₀)/normalizer(t)` as `t → 0⁺`.
pub fn limit_constant(alpha: &AlphaSpec, phi: &Amplitude, tol: &Tolerance) -> Result<LimitConstant> {
    let regime = regime(alpha)?;
    let (constant, normalizer) = match regime {
        Regime::SubOne => (coeff_c(alpha, phi, 1, tol)?, Normalizer::T),
        Regime::One => (coeff_b(alpha, phi, 1)?, Normalizer::TLogT),
        Regime::SuperOne => (coeff_a(alpha, phi, 1)?, Normalizer::TPow(alpha.term_exponent(1))),
    };
    Ok(LimitConstant {
        regime,
        constant,
        normalizer,
    })
}

/// The Laplace counterpart: `lim (L_α(t) − C₀)/normalizer(t)`.
pub fn laplace_limit_constant(alpha: &AlphaSpec, phi: &Amplitude, tol: &Tolerance) -> Result<LimitConstant> {
    let regime = regime(alpha)?;
    let (constant, normalizer) = match regime {
        Regime::SubOne => (coeff_c_hat(alpha, phi, 1, tol)?, Normalizer::T),
        Regime::One => (coeff_b_hat(alpha, phi, 1)?, Normalizer::TLogT),
        Regime::SuperOne => (coeff_a_hat(alpha, phi, 1)?, Normalizer::TPow(alpha.term_exponent(1))),
    };
    Ok(LimitConstant {
        regime,
        constant: C64::new(constant, 0.0),
        normalizer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::{default_amplitude, make_poly_plateau, CutoffSpec};

    fn alpha(p: u64, q: u64) -> AlphaSpec {
        AlphaSpec::rational(p, q).unwrap()
    }

    fn poly(coeffs: &[f64], jet: usize) -> Amplitude {
        make_poly_plateau(coeffs, CutoffSpec::default(), jet).unwrap()
    }

    const SQRT_PI: f64 = 1.7724538509055160;

    #[test]
    fn leading_power_coefficient_at_alpha_two() {
        let a1 = coeff_a(&alpha(2, 1), &default_amplitude(), 1).unwrap();
        // (1/2) e^{-iπ/4} Γ(-1/2) = -√π e^{-iπ/4} = √(π/2) (-1, 1).
        let v = (PI / 2.0).sqrt();
        assert!((a1.re + v).abs() < 1e-14 && (a1.im - v).abs() < 1e-14, "{a1}");
        assert!((a1.re + 1.2533141373155003).abs() < 1e-14);
    }

    #[test]
    fn gated_power_coefficients_vanish() {
        assert_eq!(coeff_a(&alpha(2, 1), &default_amplitude(), 2).unwrap(), C64::new(0.0, 0.0));
        // α = 1/2, φ''(0) = 0 by construction.
        let phi = poly(&[1.0, 1.0], 8);
        assert_eq!(coeff_a(&alpha(1, 2), &phi, 3).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn log_coefficients() {
        let b1 = coeff_b(&alpha(1, 1), &default_amplitude(), 1).unwrap();
        assert_eq!(b1, C64::new(0.0, -1.0));
        let phi = poly(&[1.0, 1.0], 8);
        let b2 = coeff_b(&alpha(2, 1), &phi, 2).unwrap();
        assert!((b2 - C64::new(0.0, -0.5)).norm() < 1e-16);
        let irr = AlphaSpec::irrational(std::f64::consts::SQRT_2).unwrap();
        assert!((1..20).all(|n| coeff_b(&irr, &phi, n).unwrap() == C64::new(0.0, 0.0)));
    }

    #[test]
    fn reindexed_log_coefficient() {
        let phi = default_amplitude();
        let c1 = coeff_b_check(&alpha(1, 2), &phi, 1).unwrap();
        assert_eq!(c1.re, 1.0);
        assert_eq!(c1, coeff_b(&alpha(1, 2), &phi, 1).unwrap());
        let flat = poly(&[1.0, 1.0], 8);
        assert_eq!(coeff_b_check(&alpha(3, 2), &flat, 1).unwrap().norm(), 0.0);
        assert!(coeff_b_check(&AlphaSpec::irrational(1.3).unwrap(), &phi, 1).is_err());
    }

    #[test]
    fn laplace_coefficients() {
        let phi = default_amplitude();
        let a1 = coeff_a_hat(&alpha(2, 1), &phi, 1).unwrap();
        assert!((a1 + SQRT_PI).abs() < 1e-14);
        assert_eq!(coeff_a_hat(&alpha(1, 1), &phi, 1).unwrap(), 0.0);
        // (-1)^m with m = 1 flips the sign relative to the oscillatory i^m pattern.
        assert_eq!(coeff_b_hat(&alpha(1, 1), &phi, 1).unwrap(), 1.0);
        assert_eq!(coeff_b_hat(&alpha(1, 2), &phi, 1).unwrap(), -1.0);
        assert_eq!(coeff_b_hat(&AlphaSpec::irrational(0.7).unwrap(), &phi, 3).unwrap(), 0.0);
    }

    #[test]
    fn taylor_coefficients() {
        let phi = default_amplitude();
        let tol = Tolerance::tight();
        let c0 = coeff_c(&alpha(1, 1), &phi, 0, &tol).unwrap();
        assert!((c0.re - 1.5).abs() < 1e-13 && c0.im == 0.0);
        let c1 = coeff_c(&alpha(1, 2), &phi, 1, &tol).unwrap();
        assert!(c1.re == 0.0 && (c1.im - 2.4457963688392467).abs() < 1e-12, "{c1}");
        assert!(matches!(
            coeff_c(&alpha(1, 1), &phi, 1, &tol),
            Err(Error::DivergentIntegral { n: 1, max: 0 })
        ));
        let chat = coeff_c_hat(&alpha(1, 2), &phi, 1, &tol).unwrap();
        assert_eq!(chat, -c1.im);
    }

    #[test]
    fn f_singular_parts() {
        let t0 = singular_part_f(0.0).unwrap();
        assert_eq!(t0.coeff, C64::new(-1.0, 0.0));
        assert_eq!(t0.log_power, 1);
        assert_eq!(t0.exponent.as_nonneg_integer(), Some(0));
        let half = singular_part_f(0.5).unwrap();
        // e^{-iπ/4} Γ(-1/2) = -2√π (1 - i)/√2 = √(2π) (-1, 1).
        let v = (2.0 * PI).sqrt();
        assert!((half.coeff - C64::new(-v, v)).norm() < 1e-14, "{}", half.coeff);
        assert_eq!(half.log_power, 0);
        let one = singular_part_f(1.0).unwrap();
        assert_eq!(one.coeff, C64::new(-0.0, -1.0));
        assert!(singular_part_f(-1.0).is_err());
    }

    #[test]
    fn limit_constants() {
        let phi = default_amplitude();
        let tol = Tolerance::tight();
        let sub = limit_constant(&alpha(1, 2), &phi, &tol).unwrap();
        assert_eq!(sub.regime, Regime::SubOne);
        assert!((sub.constant.im - 2.4457963688392467).abs() < 1e-12);
        let one = limit_constant(&alpha(1, 1), &phi, &tol).unwrap();
        assert_eq!((one.regime, one.constant), (Regime::One, C64::new(0.0, -1.0)));
        let sup = limit_constant(&alpha(2, 1), &phi, &tol).unwrap();
        assert_eq!(sup.regime, Regime::SuperOne);
        assert_eq!(sup.constant, coeff_a(&alpha(2, 1), &phi, 1).unwrap());
        assert_eq!(sup.normalizer.apply(4.0), 2.0);
        assert!(limit_constant(&AlphaSpec::irrational(1.0).unwrap(), &phi, &tol).is_err());
    }
}

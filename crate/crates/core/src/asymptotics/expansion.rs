//! Assembled small-`t` expansions and their residuals against the oracle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::alpha::{AlphaSpec, Exponent};
use super::coeffs::{coeff_a, coeff_a_hat, coeff_b, coeff_b_hat, coeff_c, coeff_c_hat, is_log_index};
use super::fit::{coeff_c_empirical, DEFAULT_FIT_WINDOW};
use crate::amplitude::Amplitude;
use crate::error::{Error, Result};
use crate::quadrature::{oracle_i_deviation, oracle_l_deviation, QuadResult, Tolerance};
use crate::specfun::{unit_phase, unit_phase_pi, C64};

/// Oscillatory `I_α` or Laplace `L_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Oscillatory,
    Laplace,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Oscillatory => "oscillatory",
            Kind::Laplace => "laplace",
        }
    }
}

/// Side of `t = 0` an expansion is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    PositiveAxis,
    NegativeAxis,
}

impl Branch {
    pub fn for_t(t: f64) -> Branch {
        if t < 0.0 {
            Branch::NegativeAxis
        } else {
            Branch::PositiveAxis
        }
    }
}

/// `coeff · t^exponent · (log t)^log_power`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTerm {
    pub coeff: C64,
    pub exponent: Exponent,
    pub log_power: u8,
    pub label: String,
}

impl ExpansionTerm {
    pub fn new(coeff: C64, exponent: Exponent, log_power: u8, label: impl Into<String>) -> Result<Self> {
        if log_power > 1 {
            return Err(Error::InvalidSpec(format!("log power {log_power} is not 0 or 1")));
        }
        if log_power == 1 && exponent.as_nonneg_integer().is_none() {
            return Err(Error::InvalidSpec(format!(
                "log terms need a nonnegative integer exponent, got {exponent}"
            )));
        }
        Ok(ExpansionTerm {
            coeff,
            exponent,
            log_power,
            label: label.into(),
        })
    }

    /// `e^{iπ·exponent}`, the factor `t^e` picks up on the negative axis.
    fn negative_axis_phase(&self) -> C64 {
        match self.exponent {
            Exponent::Rational(r) => unit_phase_pi(*r.numer(), *r.denom()),
            Exponent::Real(x) => unit_phase(PI * x),
        }
    }

    /// Value at `t ≠ 0`: `|t|^e`, times `e^{iπe}` on the negative axis, times `log|t|` for log terms.
    pub fn eval(&self, t: f64) -> C64 {
        let at = t.abs();
        let mut v = self.coeff * at.powf(self.exponent.value());
        if self.log_power == 1 {
            v *= at.ln();
        }
        if t < 0.0 {
            v *= self.negative_axis_phase();
        }
        v
    }

    pub fn is_constant(&self) -> bool {
        self.log_power == 0 && self.exponent.as_nonneg_integer() == Some(0)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "label": self.label,
            "re": self.coeff.re,
            "im": self.coeff.im,
        });
        let map = obj.as_object_mut().expect("object literal");
        match self.exponent {
            Exponent::Rational(r) => {
                map.insert("exp_num".into(), json!(r.numer()));
                map.insert("exp_den".into(), json!(r.denom()));
            }
            Exponent::Real(x) => {
                map.insert("exp_real".into(), json!(x));
            }
        }
        map.insert("log_power".into(), json!(self.log_power));
        obj
    }
}

/// A truncated expansion with its metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub terms: Vec<ExpansionTerm>,
    pub order_n: u64,
    pub remainder_order: i64,
    pub kind: Kind,
    pub alpha: AlphaSpec,
}

impl Expansion {
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha.to_string(),
            "kind": self.kind.name(),
            "order_n": self.order_n,
            "remainder_order": self.remainder_order,
            "terms": self.terms.iter().map(ExpansionTerm::to_json).collect::<Vec<_>>(),
        })
    }

    /// Smallest exponent among the terms dropped by truncating at `order_n`
    /// and `taylor_orders`, capped by the first omitted Taylor power.
    ///
    /// Omitted singular terms with a vanishing coefficient are skipped.
    pub fn first_omitted_exponent(&self, phi: &Amplitude, taylor_orders: u64) -> Result<Exponent> {
        let cap = Exponent::integer(taylor_orders as i64 + 1);
        let mut n = self.order_n + 1;
        loop {
            let e = self.alpha.term_exponent(n);
            if e.total_cmp(&cap).is_ge() || n as usize > phi.jet_len() {
                return Ok(cap);
            }
            let present = match self.kind {
                Kind::Oscillatory => coeff_a(&self.alpha, phi, n)?.norm() + coeff_b(&self.alpha, phi, n)?.norm(),
                Kind::Laplace => coeff_a_hat(&self.alpha, phi, n)?.abs() + coeff_b_hat(&self.alpha, phi, n)?.abs(),
            };
            if present != 0.0 {
                return Ok(e);
            }
            n += 1;
        }
    }
}

fn sort_terms(terms: &mut [ExpansionTerm]) {
    terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent).then(a.log_power.cmp(&b.log_power)));
}

/// The `n`-th singular term of the given kind, or `None` when its coefficient vanishes.
pub fn singular_term(alpha: &AlphaSpec, phi: &Amplitude, n: u64, kind: Kind) -> Result<Option<ExpansionTerm>> {
    let log = is_log_index(alpha, n);
    let coeff = match (kind, log) {
        (Kind::Oscillatory, false) => coeff_a(alpha, phi, n)?,
        (Kind::Oscillatory, true) => coeff_b(alpha, phi, n)?,
        (Kind::Laplace, false) => C64::new(coeff_a_hat(alpha, phi, n)?, 0.0),
        (Kind::Laplace, true) => C64::new(coeff_b_hat(alpha, phi, n)?, 0.0),
    };
    if coeff.norm() == 0.0 {
        return Ok(None);
    }
    let (name, hat) = (if log { "B" } else { "A" }, if kind == Kind::Laplace { "^" } else { "" });
    let term = ExpansionTerm::new(
        coeff,
        alpha.term_exponent(n),
        u8::from(log),
        format!("{name}{hat}_{n}"),
    )?;
    Ok(Some(term))
}

/// Closed-form Taylor coefficient `C_k` (or `Ĉ_k`).
pub fn taylor_term(alpha: &AlphaSpec, phi: &Amplitude, k: u64, kind: Kind, tol: &Tolerance) -> Result<ExpansionTerm> {
    let coeff = match kind {
        Kind::Oscillatory => coeff_c(alpha, phi, k, tol)?,
        Kind::Laplace => C64::new(coeff_c_hat(alpha, phi, k, tol)?, 0.0),
    };
    let hat = if kind == Kind::Laplace { "^" } else { "" };
    ExpansionTerm::new(coeff, Exponent::integer(k as i64), 0, format!("C{hat}_{k}"))
}

/// Expansion with `N` singular terms and Taylor terms `C_0 … C_{taylor_orders}`.
///
/// Taylor coefficients past the convergent range are fitted against the
/// oracle on the default window.
pub fn build_expansion(
    alpha: &AlphaSpec,
    phi: &Amplitude,
    order_n: u64,
    kind: Kind,
    taylor_orders: u64,
    tol: &Tolerance,
) -> Result<Expansion> {
    build_expansion_with(alpha, phi, order_n, kind, taylor_orders, tol, DEFAULT_FIT_WINDOW)
}

/// [`build_expansion`] with an explicit fit window for empirical Taylor terms.
pub fn build_expansion_with(
    alpha: &AlphaSpec,
    phi: &Amplitude,
    order_n: u64,
    kind: Kind,
    taylor_orders: u64,
    tol: &Tolerance,
    fit_window: (f64, f64),
) -> Result<Expansion> {
    if order_n == 0 {
        return Err(Error::InvalidSpec("expansion order N must be at least 1".into()));
    }
    if (phi.jet_len() as u64) < order_n {
        return Err(Error::JetExhausted {
            requested: order_n as usize - 1,
            available: phi.jet_len(),
        });
    }
    let remainder_order = alpha.remainder_order(order_n);
    if taylor_orders as i64 > remainder_order {
        return Err(Error::OrderTooHigh {
            requested: taylor_orders as usize,
            remainder_order,
        });
    }
    let mut terms = Vec::new();
    for n in 1..=order_n {
        if let Some(term) = singular_term(alpha, phi, n, kind)? {
            terms.push(term);
        }
    }
    let closed = (alpha.max_convergent_taylor().max(0) as u64).min(taylor_orders);
    for k in 0..=closed {
        terms.push(taylor_term(alpha, phi, k, kind, tol)?);
    }
    if taylor_orders > closed {
        let fit = coeff_c_empirical(alpha, phi, taylor_orders, kind, fit_window, tol)?;
        for &(k, c) in fit.coeffs.iter().filter(|(k, _)| *k <= taylor_orders) {
            let hat = if kind == Kind::Laplace { "^" } else { "" };
            terms.push(ExpansionTerm::new(c, Exponent::integer(k as i64), 0, format!("C{hat}_{k} (fit)"))?);
        }
    }
    sort_terms(&mut terms);
    Ok(Expansion {
        terms,
        order_n,
        remainder_order,
        kind,
        alpha: *alpha,
    })
}

/// Sum of the expansion at `t ≠ 0` on the given branch.
pub fn eval_expansion(expansion: &Expansion, t: f64, branch: Branch) -> Result<C64> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!(
            "expansions are evaluated at finite t != 0 (got {t}); use the constant term as the t -> 0 limit"
        )));
    }
    if branch != Branch::for_t(t) {
        return Err(Error::Domain(format!("t = {t} does not lie on the {branch:?} branch")));
    }
    if expansion.kind == Kind::Laplace && t < 0.0 {
        return Err(Error::Domain("the Laplace expansion exists only for t > 0".into()));
    }
    Ok(expansion.terms.iter().map(|term| term.eval(t)).sum())
}

/// `I_α(t) − C₀` (or `L_α(t) − C₀`) from the oracle.
pub fn oracle_deviation(alpha: &AlphaSpec, phi: &Amplitude, kind: Kind, t: f64, tol: &Tolerance) -> Result<QuadResult> {
    match kind {
        Kind::Oscillatory => oracle_i_deviation(alpha.value(), phi, t, tol),
        Kind::Laplace => oracle_l_deviation(alpha.value(), phi, t, tol),
    }
}

/// Oracle value minus the expansion, at `t`.
///
/// The constant term is never subtracted numerically: the oracle returns the
/// deviation from `∫φ` directly, so the residual at `t = 0` is exactly 0.
pub fn remainder_of(expansion: &Expansion, phi: &Amplitude, t: f64, tol: &Tolerance) -> Result<C64> {
    remainder_detail(expansion, phi, t, tol).map(|r| r.value)
}

/// [`remainder_of`] with the oracle's error estimate attached.
pub fn remainder_detail(expansion: &Expansion, phi: &Amplitude, t: f64, tol: &Tolerance) -> Result<QuadResult> {
    if t == 0.0 {
        return Ok(QuadResult::exact(C64::new(0.0, 0.0)));
    }
    if t < 0.0 && expansion.kind == Kind::Laplace {
        return Err(Error::Domain("the Laplace integral needs t >= 0".into()));
    }
    let dev = oracle_deviation(&expansion.alpha, phi, expansion.kind, t, tol)?;
    let rest: C64 = expansion
        .terms
        .iter()
        .filter(|term| !term.is_constant())
        .map(|term| term.eval(t))
        .sum();
    Ok(QuadResult {
        value: dev.value - rest,
        ..dev
    })
}

/// Residual of the `N`-term expansion carrying every Taylor term up to the remainder order.
pub fn remainder(
    alpha: &AlphaSpec,
    phi: &Amplitude,
    order_n: u64,
    kind: Kind,
    t: f64,
    tol: &Tolerance,
) -> Result<C64> {
    let taylor = alpha.remainder_order(order_n).max(0) as u64;
    let expansion = build_expansion(alpha, phi, order_n, kind, taylor, tol)?;
    remainder_of(&expansion, phi, t, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::default_amplitude;

    fn alpha(p: u64, q: u64) -> AlphaSpec {
        AlphaSpec::rational(p, q).unwrap()
    }

    fn single(coeff: C64, exponent: Exponent, log_power: u8) -> Expansion {
        Expansion {
            terms: vec![ExpansionTerm::new(coeff, exponent, log_power, "x").unwrap()],
            order_n: 1,
            remainder_order: 0,
            kind: Kind::Oscillatory,
            alpha: alpha(1, 1),
        }
    }

    #[test]
    fn evaluation_on_both_axes() {
        let e = single(C64::new(1.0, 0.0), Exponent::ratio(1, 2), 0);
        assert_eq!(eval_expansion(&e, 4.0, Branch::PositiveAxis).unwrap(), C64::new(2.0, 0.0));
        assert_eq!(eval_expansion(&e, -4.0, Branch::NegativeAxis).unwrap(), C64::new(0.0, 2.0));
        assert!(eval_expansion(&e, -4.0, Branch::PositiveAxis).is_err());
        assert!(eval_expansion(&e, 0.0, Branch::PositiveAxis).is_err());

        let e = single(C64::new(0.0, -1.0), Exponent::integer(1), 1);
        let t = (-1.0f64).exp();
        let v = eval_expansion(&e, t, Branch::PositiveAxis).unwrap();
        assert!((v - C64::new(0.0, t)).norm() < 1e-16);
    }

    #[test]
    fn log_terms_need_integer_exponents() {
        assert!(ExpansionTerm::new(C64::new(1.0, 0.0), Exponent::ratio(1, 2), 1, "x").is_err());
        assert!(ExpansionTerm::new(C64::new(1.0, 0.0), Exponent::Real(2.0), 1, "x").is_err());
        assert!(ExpansionTerm::new(C64::new(1.0, 0.0), Exponent::integer(2), 2, "x").is_err());
    }

    #[test]
    fn build_respects_remainder_order() {
        let phi = default_amplitude();
        let tol = Tolerance::default();
        let e = build_expansion(&alpha(2, 1), &phi, 1, Kind::Oscillatory, 0, &tol).unwrap();
        assert_eq!(e.remainder_order, 0);
        let labels: Vec<_> = e.terms.iter().map(|t| t.label.as_str()).collect();
        assert_eq!(labels, ["C_0", "A_1"]);
        assert!(matches!(
            build_expansion(&alpha(2, 1), &phi, 1, Kind::Oscillatory, 1, &tol),
            Err(Error::OrderTooHigh { requested: 1, remainder_order: 0 })
        ));

        let e = build_expansion(&alpha(1, 1), &phi, 1, Kind::Oscillatory, 0, &tol).unwrap();
        assert_eq!(e.remainder_order, 1);
        assert_eq!(e.terms[1].coeff, C64::new(0.0, -1.0));
        assert_eq!(e.terms[1].log_power, 1);
    }

    #[test]
    fn irrational_alpha_has_no_log_terms() {
        let phi = default_amplitude();
        let irr = AlphaSpec::irrational(std::f64::consts::SQRT_2).unwrap();
        let e = build_expansion(&irr, &phi, 3, Kind::Oscillatory, 0, &Tolerance::default()).unwrap();
        assert!(e.terms.iter().all(|t| t.log_power == 0));
    }

    #[test]
    fn terms_sorted_plain_before_log() {
        let phi = crate::amplitude::make_poly_plateau(&[1.0, 1.0, 1.0], Default::default(), 8).unwrap();
        let e = build_expansion(&alpha(1, 1), &phi, 2, Kind::Oscillatory, 0, &Tolerance::default()).unwrap();
        for w in e.terms.windows(2) {
            let ord = w[0].exponent.total_cmp(&w[1].exponent);
            assert!(ord.is_lt() || (ord.is_eq() && w[0].log_power < w[1].log_power));
        }
    }

    #[test]
    fn remainder_vanishes_at_zero() {
        let phi = default_amplitude();
        let r = remainder(&alpha(2, 1), &phi, 1, Kind::Oscillatory, 0.0, &Tolerance::default()).unwrap();
        assert_eq!(r, C64::new(0.0, 0.0));
    }

    #[test]
    fn json_shape() {
        let phi = default_amplitude();
        let e = build_expansion(&alpha(2, 1), &phi, 1, Kind::Oscillatory, 0, &Tolerance::default()).unwrap();
        let v = e.to_json();
        assert_eq!(v["remainder_order"], 0);
        assert_eq!(v["kind"], "oscillatory");
        assert_eq!(v["terms"][1]["exp_num"], 1);
        assert_eq!(v["terms"][1]["exp_den"], 2);
        assert_eq!(v["terms"][1]["log_power"], 0);
    }

    #[test]
    fn negative_axis_conjugates_for_irrational_alpha() {
        let phi = default_amplitude();
        let irr = AlphaSpec::irrational(0.7).unwrap();
        let e = build_expansion(&irr, &phi, 3, Kind::Oscillatory, 1, &Tolerance::default()).unwrap();
        for t in [1e-3, 0.02, 0.5] {
            let pos = eval_expansion(&e, t, Branch::PositiveAxis).unwrap();
            let neg = eval_expansion(&e, -t, Branch::NegativeAxis).unwrap();
            assert!((neg - pos.conj()).norm() < 1e-14 * pos.norm(), "t {t}");
        }
    }
}

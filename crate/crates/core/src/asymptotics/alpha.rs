//! The exponent `α`, declared rational `p/q` or flagged irrational.

use std::cmp::Ordering;
use std::fmt;

use num::integer::Integer;
use num::rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `α` as declared by the caller. Rationality is never inferred from a float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlphaSpec {
    Rational { p: u64, q: u64 },
    Irrational { value: f64 },
}

impl AlphaSpec {
    /// `p/q` in lowest terms.
    pub fn rational(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidSpec(format!("alpha = {p}/{q} must be positive")));
        }
        if p > i32::MAX as u64 || q > i32::MAX as u64 {
            return Err(Error::InvalidSpec(format!("alpha = {p}/{q}: numerator and denominator must fit in 31 bits")));
        }
        let g = p.gcd(&q);
        Ok(AlphaSpec::Rational { p: p / g, q: q / g })
    }

    pub fn irrational(value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidSpec(format!("alpha must be positive and finite, got {value}")));
        }
        Ok(AlphaSpec::Irrational { value })
    }

    /// Parses `"P/Q"` or `"P"`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("alpha must be P/Q with positive integers, got {text:?}"));
        let (p, q) = match text.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (text.trim(), "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        AlphaSpec::rational(p, q).map_err(|_| bad())
    }

    pub fn value(&self) -> f64 {
        match *self {
            AlphaSpec::Rational { p, q } => p as f64 / q as f64,
            AlphaSpec::Irrational { value } => value,
        }
    }

    /// `1/α`.
    pub fn recip(&self) -> f64 {
        match *self {
            AlphaSpec::Rational { p, q } => q as f64 / p as f64,
            AlphaSpec::Irrational { value } => 1.0 / value,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, AlphaSpec::Rational { .. })
    }

    /// `m = n/α` when it is a nonnegative integer (so `p | n`); always `None` for irrational `α`.
    pub fn integer_ratio(&self, n: u64) -> Option<u64> {
        match *self {
            AlphaSpec::Rational { p, q } if n % p == 0 => Some(n / p * q),
            _ => None,
        }
    }

    /// The exponent `n/α` of the `n`-th singular term.
    pub fn term_exponent(&self, n: u64) -> Exponent {
        match *self {
            AlphaSpec::Rational { p, q } => Exponent::ratio((n * q) as i64, p as i64),
            AlphaSpec::Irrational { value } => Exponent::Real(n as f64 / value),
        }
    }

    /// `⌈(N+1)/α⌉ − 1`, exact for rational `α`.
    pub fn remainder_order(&self, order_n: u64) -> i64 {
        match *self {
            AlphaSpec::Rational { p, q } => ((order_n + 1) * q).div_ceil(p) as i64 - 1,
            AlphaSpec::Irrational { value } => ((order_n + 1) as f64 / value).ceil() as i64 - 1,
        }
    }

    /// `⌈1/α⌉ − 1`: the largest `n` for which `∫ φ x^{-αn}` converges.
    pub fn max_convergent_taylor(&self) -> i64 {
        self.remainder_order(0)
    }

    /// `α` compared with 1.
    pub fn cmp_one(&self) -> Ordering {
        match *self {
            AlphaSpec::Rational { p, q } => p.cmp(&q),
            AlphaSpec::Irrational { value } => value.total_cmp(&1.0),
        }
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AlphaSpec::Rational { p, q: 1 } => write!(f, "{p}"),
            AlphaSpec::Rational { p, q } => write!(f, "{p}/{q}"),
            AlphaSpec::Irrational { value } => write!(f, "{value} (irrational)"),
        }
    }
}

/// Power of `t` carried by an expansion term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Rational(Ratio<i64>),
    Real(f64),
}

impl Exponent {
    pub fn ratio(num: i64, den: i64) -> Self {
        Exponent::Rational(Ratio::new(num, den))
    }

    pub fn integer(k: i64) -> Self {
        Exponent::Rational(Ratio::from_integer(k))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Exponent::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            Exponent::Real(x) => x,
        }
    }

    /// The exponent as a nonnegative integer, when it is one exactly.
    pub fn as_nonneg_integer(&self) -> Option<i64> {
        match *self {
            Exponent::Rational(r) if r.is_integer() && *r.numer() >= 0 => Some(*r.numer()),
            _ => None,
        }
    }

    /// Exact for two rationals, by value otherwise.
    pub fn total_cmp(&self, other: &Exponent) -> Ordering {
        match (self, other) {
            (Exponent::Rational(a), Exponent::Rational(b)) => a.cmp(b),
            _ => self.value().total_cmp(&other.value()),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Exponent::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Exponent::Real(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_reduces_and_rejects() {
        assert_eq!(AlphaSpec::rational(4, 2).unwrap(), AlphaSpec::Rational { p: 2, q: 1 });
        assert_eq!(AlphaSpec::parse("6/4").unwrap(), AlphaSpec::Rational { p: 3, q: 2 });
        assert_eq!(AlphaSpec::parse(" 2 ").unwrap(), AlphaSpec::Rational { p: 2, q: 1 });
        assert!(AlphaSpec::rational(0, 3).is_err());
        assert!(AlphaSpec::parse("1/0").is_err());
        assert!(AlphaSpec::parse("-1/2").is_err());
        assert!(AlphaSpec::parse("0.5").is_err());
        assert!(AlphaSpec::irrational(-1.0).is_err());
        assert!(AlphaSpec::irrational(f64::NAN).is_err());
    }

    #[test]
    fn integer_ratio_examples() {
        let two = AlphaSpec::rational(2, 1).unwrap();
        assert_eq!(two.integer_ratio(4), Some(2));
        assert_eq!(two.integer_ratio(3), None);
        let half = AlphaSpec::rational(1, 2).unwrap();
        assert_eq!(half.integer_ratio(3), Some(6));
        let irr = AlphaSpec::irrational(std::f64::consts::SQRT_2).unwrap();
        assert!((1..50).all(|n| irr.integer_ratio(n).is_none()));
    }

    #[test]
    fn remainder_order_examples() {
        assert_eq!(AlphaSpec::rational(2, 1).unwrap().remainder_order(1), 0);
        assert_eq!(AlphaSpec::rational(1, 1).unwrap().remainder_order(1), 1);
        assert_eq!(AlphaSpec::rational(3, 2).unwrap().remainder_order(3), 2);
        assert_eq!(AlphaSpec::rational(1, 2).unwrap().max_convergent_taylor(), 1);
        assert_eq!(AlphaSpec::rational(1, 1).unwrap().max_convergent_taylor(), 0);
        assert_eq!(AlphaSpec::rational(2, 5).unwrap().max_convergent_taylor(), 2);
    }

    #[test]
    fn exponent_ordering_is_exact() {
        let a = Exponent::ratio(1, 3);
        let b = Exponent::ratio(2, 6);
        assert_eq!(a.total_cmp(&b), Ordering::Equal);
        assert_eq!(Exponent::ratio(4, 2).as_nonneg_integer(), Some(2));
        assert_eq!(Exponent::ratio(3, 2).as_nonneg_integer(), None);
        assert_eq!(Exponent::Real(2.0).as_nonneg_integer(), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn remainder_order_agrees_with_float_away_from_integers(p in 1u64..50, q in 1u64..50, n in 1u64..40) {
            let alpha = AlphaSpec::rational(p, q).unwrap();
            let (p, q) = match alpha { AlphaSpec::Rational { p, q } => (p, q), _ => unreachable!() };
            let x = (n + 1) as f64 * q as f64 / p as f64;
            let exact = alpha.remainder_order(n);
            if (x - x.round()).abs() > 1e-9 {
                prop_assert_eq!(exact, x.ceil() as i64 - 1);
            } else {
                // On an integer boundary the exact computation decides.
                prop_assert_eq!(exact, ((n + 1) * q / p) as i64 - 1);
                prop_assert_eq!(((n + 1) * q) % p, 0);
            }
        }

        #[test]
        fn integer_ratio_iff_p_divides_n(p in 1u64..20, q in 1u64..20, n in 1u64..64) {
            let alpha = AlphaSpec::rational(p, q).unwrap();
            let (p, q) = match alpha { AlphaSpec::Rational { p, q } => (p, q), _ => unreachable!() };
            match alpha.integer_ratio(n) {
                Some(m) => { prop_assert_eq!(n % p, 0); prop_assert_eq!(m * p, n * q); }
                None => prop_assert!(n % p != 0),
            }
        }
    }
}

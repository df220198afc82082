//! Real-argument special functions used by the expansion coefficients.
//!
//! `gamma` evaluates a Lanczos approximation on `[1, 2]` only and reaches every
//! other argument through the recurrence `Γ(x + 1) = x Γ(x)`, so relative
//! accuracy is preserved down into the negative axis, where the coefficient
//! formulas evaluate `Γ(-n/α)`.

use std::f64::consts::{E, PI};

use num::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Distance to a non-positive integer below which `gamma` reports a pole.
pub const POLE_GUARD: f64 = 1e-12;

// Lanczos coefficients (Pugh, r = 10.900511), accurate to ~16 digits for x >= 1/2.
const LANCZOS_R: f64 = 10.900511;
#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
#[allow(clippy::excessive_precision)]
const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;

/// Largest `n` whose factorial is held exactly in the table below.
const EXACT_FACTORIALS: usize = 20;

fn lanczos(x: f64) -> f64 {
    let s = LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0));
    s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + LANCZOS_R) / E).powf(x - 0.5)
}

/// Γ(x) for real `x` away from the poles `0, -1, -2, ...`.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite argument {x}")));
    }
    if x <= 0.0 && (x - x.round()).abs() < POLE_GUARD {
        return Err(Error::Pole(x));
    }
    if x >= 1.0 && x <= 21.0 && x.fract() == 0.0 {
        return Ok(factorial(x as usize - 1));
    }
    if (1.0..=2.0).contains(&x) {
        return Ok(lanczos(x));
    }
    if x > 2.0 {
        if x > 30.0 {
            // Past the recurrence range the direct formula is as accurate as
            // thirty multiplications.
            return Ok(lanczos(x));
        }
        let mut y = x;
        let mut prod = 1.0;
        while y > 2.0 {
            y -= 1.0;
            prod *= y;
        }
        return Ok(prod * lanczos(y));
    }
    // x < 1: lift into [1, 2] and divide out x (x+1) ... (x+m-1).
    let mut y = x;
    let mut prod = 1.0;
    while y < 1.0 {
        prod *= y;
        y += 1.0;
        if !prod.is_finite() {
            return Ok(0.0);
        }
    }
    let value = lanczos(y) / prod;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("gamma({x}) overflows")))
    }
}

/// `n!` as a float: exact up to 20!, via `gamma(n + 1)` beyond.
pub fn factorial(n: usize) -> f64 {
    const TABLE: [u64; EXACT_FACTORIALS + 1] = {
        let mut t = [1u64; EXACT_FACTORIALS + 1];
        let mut i = 1;
        while i <= EXACT_FACTORIALS {
            t[i] = t[i - 1] * i as u64;
            i += 1;
        }
        t
    };
    if n <= EXACT_FACTORIALS {
        TABLE[n] as f64
    } else {
        gamma(n as f64 + 1.0).unwrap_or(f64::INFINITY)
    }
}

/// `e^{iθ}`.
pub fn unit_phase(theta: f64) -> C64 {
    let (s, c) = theta.sin_cos();
    C64::new(c, s)
}

/// `e^{iπ num/den}` for an exact rational multiple of π.
///
/// Multiples of π/2 come back with exact `0`, `±1` components.
pub fn unit_phase_pi(num: i64, den: i64) -> C64 {
    assert!(den != 0, "zero denominator in phase");
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let period = 2 * den as i128;
    let mut r = (num as i128).rem_euclid(period);
    if (2 * r) % den as i128 == 0 {
        return match (2 * r / den as i128) % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    if r > den as i128 {
        r -= period;
    }
    unit_phase(PI * r as f64 / den as f64)
}

/// `i^m` with exact components.
pub fn i_pow(m: u64) -> C64 {
    match m % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Orientation of the phase in `∫₀^∞ e^{±i x^{1/α}} dx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// Closed form `e^{±απi/2} Γ(α + 1)` of the generalized Fresnel integral
/// `∫₀^∞ e^{±i x^{1/α}} dx`, valid for `0 < α < 1`.
pub fn fresnel_closed(alpha: f64, sign: Sign) -> Result<C64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "generalized Fresnel closed form needs 0 < alpha < 1, got {alpha}"
        )));
    }
    let g = gamma(alpha + 1.0)?;
    Ok(unit_phase(sign.as_f64() * alpha * PI / 2.0) * g)
}

//! Limits of slowly convergent series from a window of partial sums.

use crate::specfun::C64;

/// Terms smaller than this are treated as zero: their reciprocals would overflow.
const TINY_TERM: f64 = 1e-280;

/// Sequence transformation applied to half-period partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Accelerator {
    /// Levin u-transform, `ω_n = (n + β) a_n` with `β = 1`.
    #[default]
    Levin,
    /// Repeated averaging of neighbouring partial sums (Euler / van Wijngaarden).
    Euler,
}

/// Levin u-transform of order `order` built from `partial[start..=start + order]`.
///
/// `terms[n]` is the n-th term, `partial[n]` the sum of `terms[0..=n]`.
/// Returns `None` if a term in the window vanishes or the window runs past the data.
pub fn levin_u(partial: &[C64], terms: &[C64], start: usize, order: usize) -> Option<C64> {
    const BETA: f64 = 1.0;
    if start + order >= partial.len() || partial.len() != terms.len() {
        return None;
    }
    let last = BETA + (start + order) as f64;
    let mut num = C64::new(0.0, 0.0);
    let mut den = C64::new(0.0, 0.0);
    let mut binom = 1.0;
    for j in 0..=order {
        let n = start + j;
        let a = terms[n];
        if a.norm() < TINY_TERM || !a.norm().is_finite() {
            return None;
        }
        let omega = a * (BETA + n as f64);
        let ratio = ((BETA + n as f64) / last).powi(order as i32 - 1);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let w = omega.inv() * (sign * binom * ratio);
        num += w * partial[n];
        den += w;
        binom = binom * (order - j) as f64 / (j + 1) as f64;
    }
    let value = num / den;
    if value.re.is_finite() && value.im.is_finite() {
        Some(value)
    } else {
        None
    }
}

/// Repeated pairwise averaging of `partial[start..]`, down to a single value.
pub fn euler_average(partial: &[C64], start: usize) -> Option<C64> {
    if start >= partial.len() {
        return None;
    }
    let mut row: Vec<C64> = partial[start..].to_vec();
    while row.len() > 1 {
        row = row.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    }
    row.first().copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partial_sums(terms: &[C64]) -> Vec<C64> {
        terms
            .iter()
            .scan(C64::new(0.0, 0.0), |s, &a| {
                *s += a;
                Some(*s)
            })
            .collect()
    }

    #[test]
    fn levin_sums_alternating_harmonic_series() {
        let terms: Vec<C64> = (1..=20)
            .map(|k| C64::new(if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64, 0.0))
            .collect();
        let partial = partial_sums(&terms);
        let est = levin_u(&partial, &terms, 7, 12).unwrap();
        assert!((est.re - std::f64::consts::LN_2).abs() < 1e-13, "{est}");
    }

    #[test]
    fn levin_sums_eta_half() {
        // Σ (-1)^k / sqrt(k+1) = (1 - sqrt 2) ζ(1/2) = 0.6048986434216303...
        let terms: Vec<C64> = (0..20)
            .map(|k| C64::new(if k % 2 == 0 { 1.0 } else { -1.0 } / ((k + 1) as f64).sqrt(), 0.0))
            .collect();
        let partial = partial_sums(&terms);
        let est = levin_u(&partial, &terms, 7, 12).unwrap();
        assert!((est.re - 0.6048986434216303).abs() < 1e-12, "{est}");
    }

    #[test]
    fn euler_averaging_of_alternating_series() {
        let terms: Vec<C64> = (1..=40)
            .map(|k| C64::new(if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64, 0.0))
            .collect();
        let partial = partial_sums(&terms);
        let est = euler_average(&partial, 20).unwrap();
        assert!((est.re - std::f64::consts::LN_2).abs() < 1e-9, "{est}");
    }

    #[test]
    fn zero_terms_block_levin() {
        let terms = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.5, 0.0)];
        let partial = partial_sums(&terms);
        assert!(levin_u(&partial, &terms, 0, 2).is_none());
    }
}

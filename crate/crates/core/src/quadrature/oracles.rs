//! Oracles for `I_α`, `L_α`, `F_p` and the generalized Fresnel integrals.

use std::f64::consts::PI;

use super::kronrod::integrate_breaks;
use super::tail::osc_tail;
use super::{QuadResult, Tolerance};
use crate::amplitude::{rising_cutoff, Amplitude, CutoffSpec};
use crate::error::{Error, Result};
use crate::specfun::{factorial, i_pow, unit_phase, Sign, C64};

/// Largest phase carried by the direct panel of [`oracle_i`].
const DIRECT_PHASE_SPAN: f64 = 100.0 * PI;
/// `e^{-750}` underflows; the Laplace integrand is cut where the exponent reaches it.
const LAPLACE_UNDERFLOW: f64 = 750.0;
/// Depth of the dyadic mesh toward the Fresnel endpoint singularity.
const FRESNEL_GRADING: i32 = 60;

/// How [`oracle_i_with`] divides the half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Direct panel on `[δ, R]`, substitution tail on `(0, δ]`.
    #[default]
    Split,
    /// Substitution `y = x^{-α}` on all of `(0, R]`.
    PureSubstitution,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must be positive and finite, got {alpha}")))
    }
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("t must be finite, got {t}")))
    }
}

fn sorted_breaks(mut points: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    points.retain(|&x| x > lo && x < hi);
    points.push(lo);
    points.push(hi);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// Dyadic points `lo·2^k` below `hi`.
fn geometric_points(lo: f64, hi: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    if lo <= 0.0 {
        return pts;
    }
    let mut x = 2.0 * lo;
    while x < hi {
        pts.push(x);
        x *= 2.0;
    }
    pts
}

/// Points in `(lo, hi)` where the phase `|t| x^{-α}` crosses a multiple of π.
fn phase_points(alpha: f64, t: f64, lo: f64, hi: f64) -> Vec<f64> {
    let at = t.abs();
    let top = at * lo.powf(-alpha);
    let bottom = at * hi.powf(-alpha);
    let first = (bottom / PI).floor() as i64 + 1;
    let last = (top / PI).ceil() as i64;
    (first..last)
        .map(|j| (at / (j as f64 * PI)).powf(1.0 / alpha))
        .collect()
}

fn to_result<V: super::QuadValue>(raw: (V, f64, usize, bool)) -> QuadResult {
    QuadResult {
        value: raw.0.into_complex(),
        err_estimate: raw.1,
        evaluations: raw.2,
        converged: raw.3,
    }
}

fn amplitude_breaks(phi: &Amplitude, lo: f64, hi: f64) -> Vec<f64> {
    let mut pts = geometric_points(lo, hi);
    if let Some(p) = phi.plateau_radius() {
        pts.push(p);
    }
    sorted_breaks(pts, lo, hi)
}

/// `∫₀^R φ`, the value of every oracle at `t = 0`.
pub fn amplitude_integral(phi: &Amplitude, tol: &Tolerance) -> QuadResult {
    let r = phi.support_radius();
    let mut breaks = vec![0.0];
    if let Some(p) = phi.plateau_radius() {
        breaks.push(p);
        let span = r - p;
        breaks.extend([p + 0.25 * span, p + 0.5 * span, p + 0.75 * span]);
    }
    breaks.push(r);
    let breaks = sorted_breaks(breaks, 0.0, r);
    to_result(integrate_breaks(|x| phi.eval(x), &breaks, tol))
}

/// `∫₀^R φ(x) x^{-s} dx` for `s < 1`.
///
/// Dyadic panels toward 0 down to `R·2^{-60}`; below that the jet series is
/// integrated term by term.
pub fn amplitude_moment(phi: &Amplitude, s: f64, tol: &Tolerance) -> Result<QuadResult> {
    if !(s < 1.0) {
        return Err(Error::Domain(format!("moment of order {s} diverges at 0")));
    }
    if s == 0.0 {
        return Ok(amplitude_integral(phi, tol));
    }
    let r = phi.support_radius();
    let eps = r * 2f64.powi(-FRESNEL_GRADING);
    let head: f64 = phi
        .jet()
        .iter()
        .take(4)
        .enumerate()
        .map(|(k, d)| d / factorial(k) * eps.powf(k as f64 + 1.0 - s) / (k as f64 + 1.0 - s))
        .sum();
    let mut pts: Vec<f64> = (1..FRESNEL_GRADING).map(|k| r * 2f64.powi(-k)).collect();
    if let Some(p) = phi.plateau_radius() {
        pts.push(p);
    }
    let breaks = sorted_breaks(pts, eps, r);
    let body = to_result(integrate_breaks(|x| phi.eval(x) * x.powf(-s), &breaks, tol));
    Ok(QuadResult::exact(C64::new(head, 0.0)).combine(body))
}

/// `∫₀^δ φ`, exactly from the polynomial when `[0, δ]` lies in the plateau.
fn amplitude_integral_to(phi: &Amplitude, delta: f64, tol: &Tolerance) -> QuadResult {
    if delta <= 0.0 {
        return QuadResult::exact(C64::new(0.0, 0.0));
    }
    if let (Some(p), Some(src)) = (phi.plateau_radius(), phi.source()) {
        if delta <= p {
            let v = src
                .coeffs
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (k, c)| acc * delta + c / (k + 1) as f64)
                * delta;
            return QuadResult::exact(C64::new(v, 0.0));
        }
    }
    let breaks = amplitude_breaks(phi, 0.0, delta.min(phi.support_radius()));
    to_result(integrate_breaks(|x| phi.eval(x), &breaks, tol))
}

fn tail_or_best(r: Result<QuadResult>) -> QuadResult {
    match r {
        Ok(q) => q,
        Err(Error::AccelerationStalled { best, .. }) => QuadResult { converged: false, ..best },
        Err(_) => QuadResult {
            value: C64::new(f64::NAN, f64::NAN),
            err_estimate: f64::INFINITY,
            evaluations: 0,
            converged: false,
        },
    }
}

/// `(1/α)∫_{y0}^∞ e^{ity} φ(y^{-1/α}) y^{-1/α-1} dy`.
///
/// Half-periods that still see the non-polynomial part of `φ` are integrated
/// directly before the accelerated tail takes over.
fn substituted_part(alpha: f64, phi: &Amplitude, t: f64, y0: f64, tol: &Tolerance) -> QuadResult {
    let inv = 1.0 / alpha;
    let g = |y: f64| phi.eval(y.powf(-inv)) * y.powf(-inv - 1.0) * inv;
    let h = PI / t.abs();
    let burn_end = phi.plateau_radius().map_or(y0, |p| p.powf(-alpha));
    let mut burn = QuadResult::exact(C64::new(0.0, 0.0));
    let mut start = y0;
    if burn_end > y0 {
        let segments = ((burn_end - y0) / h).ceil().max(1.0) as usize;
        start = y0 + segments as f64 * h;
        let mut pts: Vec<f64> = (1..segments).map(|k| y0 + k as f64 * h).collect();
        pts.extend(geometric_points(y0, start));
        pts.push(phi.support_radius().powf(-alpha));
        pts.push(burn_end);
        let breaks = sorted_breaks(pts, y0, start);
        let raw = integrate_breaks(|y| unit_phase(t * (y - y0)) * g(y), &breaks, tol);
        burn = to_result(raw);
        burn.value *= unit_phase(t * y0);
    }
    let tail = tail_or_best(osc_tail(|y| C64::new(g(y), 0.0), start, t, tol));
    burn.combine(tail)
}

fn split_point(alpha: f64, phi: &Amplitude, t: f64, route: Route) -> f64 {
    let r = phi.support_radius();
    match route {
        Route::Split => r.min((t.abs() / DIRECT_PHASE_SPAN).powf(1.0 / alpha)),
        Route::PureSubstitution => r,
    }
}

/// `I_α(t) = ∫₀^∞ e^{it x^{-α}} φ(x) dx`.
pub fn oracle_i(alpha: f64, phi: &Amplitude, t: f64, tol: &Tolerance) -> Result<QuadResult> {
    oracle_i_with(alpha, phi, t, tol, Route::Split)
}

/// [`oracle_i`] along an explicit route; the two routes share no panels.
pub fn oracle_i_with(alpha: f64, phi: &Amplitude, t: f64, tol: &Tolerance, route: Route) -> Result<QuadResult> {
    check_alpha(alpha)?;
    check_t(t)?;
    if t == 0.0 {
        return Ok(amplitude_integral(phi, tol));
    }
    let r = phi.support_radius();
    let delta = split_point(alpha, phi, t, route);
    let mut direct = QuadResult::exact(C64::new(0.0, 0.0));
    if delta < r {
        let mut pts = phase_points(alpha, t, delta, r);
        pts.extend(amplitude_breaks(phi, delta, r));
        let breaks = sorted_breaks(pts, delta, r);
        direct = to_result(integrate_breaks(
            |x| unit_phase(t * x.powf(-alpha)) * phi.eval(x),
            &breaks,
            tol,
        ));
    }
    let sub = substituted_part(alpha, phi, t, delta.powf(-alpha), tol);
    Ok(direct.combine(sub))
}

/// `I_α(t) − ∫₀^R φ`, computed without forming the difference of two O(1) numbers.
///
/// On the direct panel `e^{iθ} − 1 = −2 sin²(θ/2) + i sin θ`; the piece of
/// `∫φ` below the split point is subtracted on its own.
pub fn oracle_i_deviation(alpha: f64, phi: &Amplitude, t: f64, tol: &Tolerance) -> Result<QuadResult> {
    check_alpha(alpha)?;
    check_t(t)?;
    if t == 0.0 {
        return Ok(QuadResult::exact(C64::new(0.0, 0.0)));
    }
    let r = phi.support_radius();
    let delta = split_point(alpha, phi, t, Route::Split);
    let mut direct = QuadResult::exact(C64::new(0.0, 0.0));
    if delta < r {
        let mut pts = phase_points(alpha, t, delta, r);
        pts.extend(amplitude_breaks(phi, delta, r));
        let breaks = sorted_breaks(pts, delta, r);
        direct = to_result(integrate_breaks(
            |x| {
                let theta = t * x.powf(-alpha);
                let half = (0.5 * theta).sin();
                C64::new(-2.0 * half * half, theta.sin()) * phi.eval(x)
            },
            &breaks,
            tol,
        ));
    }
    let sub = substituted_part(alpha, phi, t, delta.powf(-alpha), tol);
    let below = amplitude_integral_to(phi, delta, tol).scale(-1.0);
    Ok(direct.combine(sub).combine(below))
}

fn laplace_cut(alpha: f64, t: f64) -> f64 {
    (t / LAPLACE_UNDERFLOW).powf(1.0 / alpha)
}

fn check_laplace(alpha: f64, t: f64) -> Result<()> {
    check_alpha(alpha)?;
    check_t(t)?;
    if t < 0.0 {
        return Err(Error::Domain(format!(
            "Laplace integral diverges for t < 0, got t = {t}"
        )));
    }
    Ok(())
}

/// `L_α(t) = ∫₀^∞ e^{-t x^{-α}} φ(x) dx`; real arithmetic throughout.
pub fn oracle_l(alpha: f64, phi: &Amplitude, t: f64, tol: &Tolerance) -> Result<QuadResult> {
    check_laplace(alpha, t)?;
    if t == 0.0 {
        return Ok(amplitude_integral(phi, tol));
    }
    let r = phi.support_radius();
    let cut = laplace_cut(alpha, t);
    if cut >= r {
        return Ok(QuadResult::exact(C64::new(0.0, 0.0)));
    }
    let breaks = amplitude_breaks(phi, cut, r);
    Ok(to_result(integrate_breaks(
        |x| (-t * x.powf(-alpha)).exp() * phi.eval(x),
        &breaks,
        tol,
    )))
}

/// `L_α(t) − ∫₀^R φ` with `expm1` on the integrand.
pub fn oracle_l_deviation(alpha: f64, phi: &Amplitude, t: f64, tol: &Tolerance) -> Result<QuadResult> {
    check_laplace(alpha, t)?;
    if t == 0.0 {
        return Ok(QuadResult::exact(C64::new(0.0, 0.0)));
    }
    let r = phi.support_radius();
    let cut = laplace_cut(alpha, t).min(r);
    let breaks = amplitude_breaks(phi, cut, r);
    let upper = to_result(integrate_breaks(
        |x| (-t * x.powf(-alpha)).exp_m1() * phi.eval(x),
        &breaks,
        tol,
    ));
    let below = amplitude_integral_to(phi, cut, tol).scale(-1.0);
    Ok(upper.combine(below))
}

/// `F_p(t) = ∫₀^∞ e^{itx} x^{-p-1} χ(x) dx` with the rising cutoff `χ`.
pub fn oracle_f(p: f64, cutoff: CutoffSpec, t: f64, tol: &Tolerance) -> Result<QuadResult> {
    oracle_f_with_offset(p, cutoff, t, tol, 0.0)
}

/// [`oracle_f`] with the tail starting `offset` half-periods past the cutoff,
/// so that no panel is shared with the default partition.
pub fn oracle_f_with_offset(p: f64, cutoff: CutoffSpec, t: f64, tol: &Tolerance, offset: f64) -> Result<QuadResult> {
    if !(p > -1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("F_p needs p > -1, got {p}")));
    }
    cutoff.validate()?;
    check_t(t)?;
    if t == 0.0 {
        return Err(Error::Domain("F_p is singular at t = 0".into()));
    }
    if !(offset >= 0.0) {
        return Err(Error::Domain(format!("tail offset must be non-negative, got {offset}")));
    }
    let h = PI / t.abs();
    let start = cutoff.outer + offset * h;
    let power = -p - 1.0;
    let mut pts: Vec<f64> = Vec::new();
    let periods = ((start - cutoff.inner) / h).ceil();
    if periods > 1.0 && periods < 1e5 {
        pts.extend((1..periods as usize).map(|k| cutoff.inner + k as f64 * h));
    }
    pts.push(cutoff.outer);
    pts.push(0.5 * (cutoff.inner + cutoff.outer));
    pts.extend(geometric_points(cutoff.inner, start));
    let breaks = sorted_breaks(pts, cutoff.inner, start);
    let direct = to_result(integrate_breaks(
        |x| unit_phase(t * x) * (x.powf(power) * rising_cutoff(x, cutoff)),
        &breaks,
        tol,
    ));
    let tail = tail_or_best(osc_tail(|x| C64::new(x.powf(power), 0.0), start, t, tol));
    Ok(direct.combine(tail))
}

/// `∫₀^∞ e^{±i x^{1/α}} dx = α ∫₀^∞ e^{±iy} y^{α-1} dy`, `0 < α < 1`.
pub fn oracle_fresnel(alpha: f64, sign: Sign, tol: &Tolerance) -> Result<QuadResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("Fresnel oracle needs 0 < alpha < 1, got {alpha}")));
    }
    let s = sign.as_f64();
    let top = 2.0 * PI;
    let eps = top * 2f64.powi(-FRESNEL_GRADING);
    // Below eps the series of e^{±iy} converges after three terms.
    let head: C64 = (0..3u64)
        .map(|j| {
            let phase = if s > 0.0 { i_pow(j) } else { i_pow(j).conj() };
            let jf = j as f64;
            phase * (eps.powf(alpha + jf) / (factorial(j as usize) * (alpha + jf)))
        })
        .sum();
    let breaks: Vec<f64> = (0..=FRESNEL_GRADING).rev().map(|k| top * 2f64.powi(-k)).collect();
    let body = to_result(integrate_breaks(
        |y| unit_phase(s * y) * y.powf(alpha - 1.0),
        &breaks,
        tol,
    ));
    let tail = tail_or_best(osc_tail(|y| C64::new(y.powf(alpha - 1.0), 0.0), top, s, tol));
    Ok(QuadResult::exact(head).combine(body).combine(tail).scale(alpha))
}

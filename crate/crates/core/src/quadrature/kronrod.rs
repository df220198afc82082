//! Globally adaptive 15/7-point Gauss–Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use super::{QuadResult, Tolerance};
use crate::specfun::C64;

/// Panels are not bisected more than this many times.
const MAX_DEPTH: u32 = 50;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Scalar types the panel rule can integrate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn norm(self) -> f64;
    fn into_complex(self) -> C64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn into_complex(self) -> C64 {
        C64::new(self, 0.0)
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn norm(self) -> f64 {
        C64::norm(self)
    }
    fn into_complex(self) -> C64 {
        self
    }
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
    depth: u32,
    // |K - G| sits at the rounding floor; bisection cannot improve it.
    settled: bool,
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> (f64, bool) {
    let mut scaled = err;
    if resasc != 0.0 && scaled != 0.0 {
        scaled = resasc * (200.0 * scaled / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        if 50.0 * f64::EPSILON * resabs >= scaled {
            return (scaled.max(f64::EPSILON * resabs), true);
        }
    }
    (scaled, false)
}

fn gk15<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64, depth: u32) -> Panel<V> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    let mut resabs = fc.norm() * WGK[7];
    let mut f1 = [V::zero(); 7];
    let mut f2 = [V::zero(); 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let lo = f(center - x);
        let hi = f(center + x);
        f1[j] = lo;
        f2[j] = hi;
        kronrod = kronrod + (lo + hi) * WGK[j];
        resabs += WGK[j] * (lo.norm() + hi.norm());
        if j % 2 == 1 {
            gauss = gauss + (lo + hi) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((f1[j] - mean).norm() + (f2[j] - mean).norm());
    }
    let width = half.abs();
    let raw = (kronrod - gauss).norm() * width;
    let (err, settled) = rescale_error(raw, resabs * width, resasc * width);
    Panel {
        a,
        b,
        value: kronrod * half,
        err,
        depth,
        settled,
    }
}

struct HeapEntry {
    err: f64,
    index: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Adaptive quadrature over `[breaks[0], breaks[last]]` starting from the
/// given panel partition. Returns value, error estimate, evaluations, convergence.
pub fn integrate_breaks<V, F>(f: F, breaks: &[f64], tol: &Tolerance) -> (V, f64, usize, bool)
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let mut panels: Vec<Panel<V>> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            panels.push(gk15(&f, w[0], w[1], 0));
            evals += 15;
        }
    }
    if panels.is_empty() {
        return (V::zero(), 0.0, evals, true);
    }
    let bisectable = |p: &Panel<V>| !p.settled && p.depth < MAX_DEPTH && p.err > 0.0;
    for (i, p) in panels.iter().enumerate() {
        if bisectable(p) {
            heap.push(HeapEntry { err: p.err, index: i });
        }
    }
    let mut total = panels.iter().fold(V::zero(), |acc, p| acc + p.value);
    let mut total_err: f64 = panels.iter().map(|p| p.err).sum();
    let mut converged = total_err <= tol.target(total.norm());
    let mut steps = 0usize;
    while !converged {
        if evals + 30 > tol.max_evals {
            break;
        }
        let Some(entry) = heap.pop() else {
            break;
        };
        let idx = entry.index;
        let (a, b, depth) = (panels[idx].a, panels[idx].b, panels[idx].depth);
        let mid = 0.5 * (a + b);
        if !(mid > a && mid < b) {
            panels[idx].settled = true;
            continue;
        }
        let left = gk15(&f, a, mid, depth + 1);
        let right = gk15(&f, mid, b, depth + 1);
        evals += 30;
        total = total - panels[idx].value + left.value + right.value;
        total_err += left.err + right.err - panels[idx].err;
        panels[idx] = left;
        if bisectable(&panels[idx]) {
            heap.push(HeapEntry { err: panels[idx].err, index: idx });
        }
        panels.push(right);
        let last = panels.len() - 1;
        if bisectable(&panels[last]) {
            heap.push(HeapEntry { err: panels[last].err, index: last });
        }
        steps += 1;
        if steps % 256 == 0 {
            // Running error sums drift; refresh them from the panels.
            total_err = panels.iter().map(|p| p.err).sum();
        }
        converged = total_err <= tol.target(total.norm());
    }
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().fold(V::zero(), |acc, p| acc + p.value);
    let err: f64 = panels.iter().map(|p| p.err).sum();
    let converged = err <= tol.target(value.norm());
    (value, err, evals, converged)
}

/// `∫_a^b f` for complex-valued `f` by adaptive bisection.
///
/// Running out of evaluations is not an error: the best estimate comes back
/// with `converged = false`.
pub fn integrate_panel<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> QuadResult
where
    F: Fn(f64) -> C64,
{
    let (value, err, evaluations, converged) = integrate_breaks(f, &[a, b], tol);
    QuadResult {
        value,
        err_estimate: err,
        evaluations,
        converged,
    }
}

/// Real-valued variant; the imaginary part of the result is exactly zero.
pub fn integrate_panel_real<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> QuadResult
where
    F: Fn(f64) -> f64,
{
    let (value, err, evaluations, converged) = integrate_breaks(f, &[a, b], tol);
    QuadResult {
        value: value.into_complex(),
        err_estimate: err,
        evaluations,
        converged,
    }
}

//! Compactly supported amplitudes with exactly known jets at the origin.
//!
//! The built-in family is a polynomial multiplied by a smooth plateau cutoff
//! that equals 1 on `[0, inner]` and vanishes from `outer` on. Because the
//! cutoff is identically 1 near the origin, the derivatives at 0 are those of
//! the polynomial and are stored exactly.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::factorial;

/// Default number of stored derivatives `φ(0), φ'(0), ...`.
pub const DEFAULT_JET_LENGTH: usize = 32;

/// Plateau and support radii of a smooth cutoff, `0 < inner < outer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub inner: f64,
    pub outer: f64,
}

impl CutoffSpec {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        let spec = CutoffSpec { inner, outer };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.inner.is_finite() && self.outer.is_finite() && 0.0 < self.inner && self.inner < self.outer {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!(
                "cutoff needs 0 < inner < outer, got inner={} outer={}",
                self.inner, self.outer
            )))
        }
    }
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec { inner: 1.0, outer: 2.0 }
    }
}

fn bump_half(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// Smooth step on `[0, 1]`: 0 at 0, 1 at 1, `1/2` at `1/2`, flat to all orders at both ends.
fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let a = bump_half(u);
    let b = bump_half(1.0 - u);
    a / (a + b)
}

/// Falling cutoff: 1 on `x <= inner`, 0 on `x >= outer`.
pub fn plateau_cutoff(x: f64, spec: CutoffSpec) -> f64 {
    if x <= spec.inner {
        1.0
    } else if x >= spec.outer {
        0.0
    } else {
        smooth_step((spec.outer - x) / (spec.outer - spec.inner))
    }
}

/// Rising mirror of [`plateau_cutoff`]: 0 on `x <= inner`, 1 on `x >= outer`.
///
/// Evaluated through the mirrored argument rather than as `1 - plateau_cutoff`
/// so values near 0 keep full relative precision.
pub fn rising_cutoff(x: f64, spec: CutoffSpec) -> f64 {
    if x <= spec.inner {
        0.0
    } else if x >= spec.outer {
        1.0
    } else {
        smooth_step((x - spec.inner) / (spec.outer - spec.inner))
    }
}

type Evaluator = dyn Fn(f64) -> f64 + Send + Sync;

/// A smooth amplitude `φ` supported in `[0, support_radius]`.
#[derive(Clone)]
pub struct Amplitude {
    evaluator: Arc<Evaluator>,
    jet: Vec<f64>,
    support_radius: f64,
    plateau_radius: Option<f64>,
    source: Option<PolyPlateau>,
}

impl fmt::Debug for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Amplitude")
            .field("jet_len", &self.jet.len())
            .field("support_radius", &self.support_radius)
            .field("plateau_radius", &self.plateau_radius)
            .field("source", &self.source)
            .finish()
    }
}

impl Amplitude {
    /// Wraps an arbitrary evaluator. The caller vouches for the jet and support.
    pub fn new<F>(evaluator: F, jet: Vec<f64>, support_radius: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if jet.is_empty() {
            return Err(Error::InvalidSpec("amplitude jet must hold at least phi(0)".into()));
        }
        if !(support_radius > 0.0 && support_radius.is_finite()) {
            return Err(Error::InvalidSpec(format!("support radius must be positive, got {support_radius}")));
        }
        Ok(Amplitude {
            evaluator: Arc::new(evaluator),
            jet,
            support_radius,
            plateau_radius: None,
            source: None,
        })
    }

    /// Marks `[0, radius]` as a region where `φ` equals its Taylor polynomial.
    pub fn with_plateau_radius(mut self, radius: f64) -> Self {
        self.plateau_radius = Some(radius.min(self.support_radius));
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x >= self.support_radius {
            return 0.0;
        }
        (self.evaluator)(x)
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn plateau_radius(&self) -> Option<f64> {
        self.plateau_radius
    }

    pub fn jet(&self) -> &[f64] {
        &self.jet
    }

    pub fn jet_len(&self) -> usize {
        self.jet.len()
    }

    /// `φ⁽ⁿ⁾(0)`.
    pub fn jet_at_zero(&self, n: usize) -> Result<f64> {
        self.jet.get(n).copied().ok_or(Error::JetExhausted {
            requested: n,
            available: self.jet.len(),
        })
    }

    /// Taylor coefficient `a_n = φ⁽ⁿ⁾(0)/n!`.
    pub fn taylor_coeff(&self, n: usize) -> Result<f64> {
        Ok(self.jet_at_zero(n)? / factorial(n))
    }

    /// The poly-plateau description this amplitude was built from, if any.
    pub fn source(&self) -> Option<&PolyPlateau> {
        self.source.as_ref()
    }
}

/// JSON description of a poly-plateau amplitude: `{"coeffs":[...], "inner":r, "outer":R}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyPlateau {
    pub coeffs: Vec<f64>,
    pub inner: f64,
    pub outer: f64,
}

impl Default for PolyPlateau {
    fn default() -> Self {
        PolyPlateau {
            coeffs: vec![1.0],
            inner: 1.0,
            outer: 2.0,
        }
    }
}

impl PolyPlateau {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("amplitude JSON: {e}")))
    }

    pub fn build(&self, jet_length: usize) -> Result<Amplitude> {
        make_poly_plateau(&self.coeffs, CutoffSpec::new(self.inner, self.outer)?, jet_length)
    }
}

/// `x ↦ P(x)·plateau_cutoff(x)` with `P(x) = Σ coeffs[k] x^k`.
pub fn make_poly_plateau(coeffs: &[f64], spec: CutoffSpec, jet_length: usize) -> Result<Amplitude> {
    spec.validate()?;
    if jet_length == 0 {
        return Err(Error::InvalidSpec("jet_length must be at least 1".into()));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidSpec("polynomial coefficients must be finite".into()));
    }
    let jet = (0..jet_length)
        .map(|n| coeffs.get(n).map_or(0.0, |c| c * factorial(n)))
        .collect();
    let poly = coeffs.to_vec();
    let evaluator = move |x: f64| {
        let p = poly.iter().rev().fold(0.0, |acc, c| acc * x + c);
        p * plateau_cutoff(x, spec)
    };
    Ok(Amplitude {
        evaluator: Arc::new(evaluator),
        jet,
        support_radius: spec.outer,
        plateau_radius: Some(spec.inner),
        source: Some(PolyPlateau {
            coeffs: coeffs.to_vec(),
            inner: spec.inner,
            outer: spec.outer,
        }),
    })
}

/// The default test amplitude: `φ ≡ 1` on `[0, 1]`, supported in `[0, 2]`.
pub fn default_amplitude() -> Amplitude {
    PolyPlateau::default()
        .build(DEFAULT_JET_LENGTH)
        .expect("default amplitude is valid")
}

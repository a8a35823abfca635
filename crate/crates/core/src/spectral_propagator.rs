//! Bounded functions of the oscillator, `m(H)`, applied exactly in Hermite
//! coefficient space. Every coefficient on level `|α| = k` is multiplied by
//! `m(2k + d)`.

use crate::hermite_basis::HermiteField;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Which exponential generates the linear flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// `e^{-itH}`, the solution operator of `i∂ₜu − Hu = 0`.
    #[default]
    Minus,
    /// `e^{+itH}`.
    Plus,
}

impl SignConvention {
    pub fn factor(self) -> f64 {
        match self {
            SignConvention::Minus => -1.0,
            SignConvention::Plus => 1.0,
        }
    }
}

type Rule = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// `n ↦ m(n)` on the eigenvalues `n = 2k + d`.
#[derive(Clone)]
pub struct SpectralMultiplier {
    rule: Rule,
    bound: Option<f64>,
}

impl std::fmt::Debug for SpectralMultiplier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralMultiplier").field("bound", &self.bound).finish_non_exhaustive()
    }
}

impl SpectralMultiplier {
    pub fn new(rule: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        SpectralMultiplier { rule: Arc::new(rule), bound: None }
    }

    /// Multiplier with a known uniform bound `sup_n |m(n)|`.
    pub fn with_bound(rule: impl Fn(f64) -> Complex64 + Send + Sync + 'static, bound: f64) -> Self {
        SpectralMultiplier { rule: Arc::new(rule), bound: Some(bound) }
    }

    pub fn identity() -> Self {
        Self::with_bound(|_| Complex64::new(1.0, 0.0), 1.0)
    }

    /// `m(n) = n`, i.e. `H` itself (unbounded; see [`Self::bound_below`]).
    pub fn hamiltonian() -> Self {
        Self::new(|n| Complex64::new(n, 0.0))
    }

    /// `m(n) = e^{s·itn}` with `s` from the sign convention; bound 1.
    pub fn propagator(t: f64, sign: SignConvention) -> Self {
        let s = sign.factor();
        Self::with_bound(move |n| Complex64::from_polar(1.0, s * t * n), 1.0)
    }

    /// Indicator of the single eigenvalue `2k + d`.
    pub fn level_indicator(k: usize, dim: usize) -> Self {
        let target = (2 * k + dim) as f64;
        Self::with_bound(move |n| Complex64::new(if n == target { 1.0 } else { 0.0 }, 0.0), 1.0)
    }

    pub fn eval(&self, n: f64) -> Complex64 {
        (self.rule)(n)
    }

    /// The declared uniform bound, if any.
    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    /// `max |m(2k+d)|` over the levels a field of this shape can occupy.
    pub fn bound_below(&self, dim: usize, cutoff: usize) -> f64 {
        level_values(self, dim, cutoff).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `m(2k+d)` for `k = 0..=d(N−1)`; one evaluation per level.
fn level_values(m: &SpectralMultiplier, dim: usize, cutoff: usize) -> Vec<Complex64> {
    let levels = dim * (cutoff - 1) + 1;
    (0..levels).map(|k| m.eval((2 * k + dim) as f64)).collect()
}

/// Coefficient-wise `m(2|α|+d)·c_α`.
pub fn apply_multiplier(m: &SpectralMultiplier, f: &HermiteField) -> HermiteField {
    let table = level_values(m, f.dim(), f.cutoff());
    let mut out = f.clone();
    for (c, k) in out.coeffs_mut().iter_mut().zip(f.degrees()) {
        *c *= table[k];
    }
    out
}

/// The Schrödinger group `e^{-itH} f`.
pub fn evolve_linear(f: &HermiteField, t: f64) -> HermiteField {
    LinearPropagator::default().evolve(f, t)
}

/// The linear flow with an explicit sign convention.
pub fn evolve_linear_signed(f: &HermiteField, t: f64, sign: SignConvention) -> HermiteField {
    LinearPropagator::new(sign).evolve(f, t)
}

/// Linear flow with a fixed sign and an optional deliberate fault.
///
/// `tamper_level = Some(k)` negates the multiplier on level `k`. The flow stays
/// unitary but loses the revival `U(π) = (−1)^d`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearPropagator {
    pub sign: SignConvention,
    pub tamper_level: Option<usize>,
}

impl LinearPropagator {
    pub fn new(sign: SignConvention) -> Self {
        LinearPropagator { sign, tamper_level: None }
    }

    pub fn tampered(sign: SignConvention, level: usize) -> Self {
        LinearPropagator { sign, tamper_level: Some(level) }
    }

    pub fn multiplier(&self, t: f64, dim: usize) -> SpectralMultiplier {
        let s = self.sign.factor();
        let bad = self.tamper_level.map(|k| (2 * k + dim) as f64);
        SpectralMultiplier::with_bound(
            move |n| {
                let z = Complex64::from_polar(1.0, s * t * n);
                if Some(n) == bad {
                    -z
                } else {
                    z
                }
            },
            1.0,
        )
    }

    pub fn evolve(&self, f: &HermiteField, t: f64) -> HermiteField {
        apply_multiplier(&self.multiplier(t, f.dim()), f)
    }
}

/// `P_k f`: the coefficients with `|α| = k`.
pub fn projection(f: &HermiteField, k: usize) -> HermiteField {
    let mut out = f.clone();
    for (c, deg) in out.coeffs_mut().iter_mut().zip(f.degrees()) {
        if deg != k {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    out
}

/// Number of distinct levels `|α|` a field of this shape can occupy.
pub fn level_count(dim: usize, cutoff: usize) -> usize {
    dim * (cutoff - 1) + 1
}

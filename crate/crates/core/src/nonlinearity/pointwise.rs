use crate::error::{Error, Result};
use crate::hermite_basis::GridField;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default total degree kept by [`RealEntireSeries::split_at_degree`].
pub const DEFAULT_SERIES_DEGREE: u32 = 12;

/// `sign · |z|^{2k} z`; `sign` is reduced to ±1.
pub fn power_value(z: Complex64, k: u32, sign: f64) -> Complex64 {
    z * (sign.signum() * z.norm_sqr().powi(k as i32))
}

/// Pointwise `±|u|^{2k} u`.
pub fn power_nonlinearity(u: &GridField, k: u32, sign: f64) -> GridField {
    u.map(|z| power_value(z, k, sign))
}

/// One term `a_{mn} s^m t^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesTerm {
    pub m: u32,
    pub n: u32,
    pub a: Complex64,
}

/// Finite `F(s, t) = Σ a_{mn} s^m t^n` with `a_00 = 0`, applied to
/// `u = s + it`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<SeriesTerm>", into = "Vec<SeriesTerm>")]
pub struct RealEntireSeries {
    /// Sorted by `(m + n, m)`, no repeats, no zero coefficients.
    terms: Vec<SeriesTerm>,
}

impl TryFrom<Vec<SeriesTerm>> for RealEntireSeries {
    type Error = Error;

    fn try_from(terms: Vec<SeriesTerm>) -> Result<Self> {
        Self::new(terms)
    }
}

impl From<RealEntireSeries> for Vec<SeriesTerm> {
    fn from(s: RealEntireSeries) -> Self {
        s.terms
    }
}

impl RealEntireSeries {
    /// Repeated `(m, n)` pairs are summed.
    pub fn new(terms: Vec<SeriesTerm>) -> Result<Self> {
        let mut merged: Vec<SeriesTerm> = Vec::with_capacity(terms.len());
        let mut sorted = terms;
        if sorted.iter().any(|t| !t.a.re.is_finite() || !t.a.im.is_finite()) {
            return Err(Error::invalid("series coefficients must be finite"));
        }
        sorted.sort_by_key(|t| (t.m + t.n, t.m));
        for t in sorted {
            match merged.last_mut() {
                Some(last) if last.m == t.m && last.n == t.n => last.a += t.a,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.a != Complex64::new(0.0, 0.0));
        if merged.iter().any(|t| t.m == 0 && t.n == 0) {
            return Err(Error::invalid("real-entire nonlinearity needs F(0) = 0 (a_00 = 0)"));
        }
        Ok(RealEntireSeries { terms: merged })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `sign · |u|^{2k} u = sign · (s² + t²)^k (s + it)`, expanded binomially.
    pub fn from_power(k: u32, sign: f64) -> Self {
        let mut terms = Vec::new();
        let mut binom = 1.0;
        for j in 0..=k {
            // (s²)^{k-j} (t²)^j · C(k, j)
            let (m, n) = (2 * (k - j), 2 * j);
            let c = sign.signum() * binom;
            terms.push(SeriesTerm { m: m + 1, n, a: Complex64::new(c, 0.0) });
            terms.push(SeriesTerm { m, n: n + 1, a: Complex64::new(0.0, c) });
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        Self::new(terms).expect("power series has no constant term")
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.m + t.n).max().unwrap_or(0)
    }

    pub fn eval(&self, s: f64, t: f64) -> Complex64 {
        self.terms.iter().map(|term| term.a * (s.powi(term.m as i32) * t.powi(term.n as i32))).sum()
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.eval(z.re, z.im)
    }

    /// Pointwise `F(u_1, u_2)`.
    pub fn apply(&self, u: &GridField) -> GridField {
        u.map(|z| self.eval_complex(z))
    }

    /// `F̃(s, t) = Σ |a_{mn}| s^m t^n`.
    pub fn majorant(&self, s: f64, t: f64) -> f64 {
        self.terms.iter().map(|term| term.a.norm() * s.powi(term.m as i32) * t.powi(term.n as i32)).sum()
    }

    /// Majorants of the partial derivatives, `(∂_s F)~(s,t)` and `(∂_t F)~(s,t)`.
    pub fn partial_majorants(&self, s: f64, t: f64) -> (f64, f64) {
        let mut ds = 0.0;
        let mut dt = 0.0;
        for term in &self.terms {
            let a = term.a.norm();
            if term.m > 0 {
                ds += a * term.m as f64 * s.powi(term.m as i32 - 1) * t.powi(term.n as i32);
            }
            if term.n > 0 {
                dt += a * term.n as f64 * s.powi(term.m as i32) * t.powi(term.n as i32 - 1);
            }
        }
        (ds, dt)
    }

    /// Terms with `m + n ≤ degree`, and the rest. `tail.majorant(S, T)`
    /// bounds the truncation error wherever `|u_1| ≤ S`, `|u_2| ≤ T`.
    pub fn split_at_degree(&self, degree: u32) -> (Self, Self) {
        let (head, tail): (Vec<_>, Vec<_>) = self.terms.iter().partition(|t| t.m + t.n <= degree);
        (RealEntireSeries { terms: head }, RealEntireSeries { terms: tail })
    }

    /// Whether every term is a gauge-covariant combination, i.e. the series is
    /// `G(|u|²) u` with real `G`. Such nonlinearities keep `|u|` fixed under the
    /// phase flow `u' = -iF(u)`.
    pub fn is_real_gauge(&self) -> bool {
        // G(|u|²)u with G(r) = Σ g_j r^j  ⇔  F = from_power-like sums with real g_j
        let mut g: Vec<f64> = Vec::new();
        for term in &self.terms {
            let deg = term.m + term.n;
            if deg % 2 == 0 {
                return false;
            }
            let j = ((deg - 1) / 2) as usize;
            if g.len() <= j {
                g.resize(j + 1, 0.0);
            }
        }
        for (j, gj) in g.iter_mut().enumerate() {
            let lead = self.coefficient(2 * j as u32 + 1, 0);
            if lead.im != 0.0 {
                return false;
            }
            *gj = lead.re;
        }
        let mut expected = RealEntireSeries::zero();
        for (j, &gj) in g.iter().enumerate() {
            if gj != 0.0 {
                let mut scaled = RealEntireSeries::from_power(j as u32, 1.0);
                for t in &mut scaled.terms {
                    t.a *= gj;
                }
                expected = expected.plus(&scaled);
            }
        }
        expected == *self
    }

    pub fn coefficient(&self, m: u32, n: u32) -> Complex64 {
        self.terms.iter().find(|t| t.m == m && t.n == n).map(|t| t.a).unwrap_or_default()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::new(terms).expect("sum of valid series")
    }
}

/// `f = g + h` with `g = f·χ_{|f|>1}` and `h = f·χ_{|f|≤1}`.
pub fn split_by_level(f: &GridField) -> (GridField, GridField) {
    let zero = Complex64::new(0.0, 0.0);
    let g = f.map(|z| if z.norm() > 1.0 { z } else { zero });
    let h = f.map(|z| if z.norm() > 1.0 { zero } else { z });
    (g, h)
}

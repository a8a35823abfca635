//! One-dimensional quadrature rules: Gauss–Hermite, uniform periodic boxes,
//! and Gauss–Legendre for time integrals.

use super::functions::{hermite_1d, PI_QUARTER_INV};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleKind {
    GaussHermite,
    UniformBox { half_width: f64 },
}

/// Nodes and weights of a 1D rule.
///
/// `weights` are the rule's native weights (for Gauss–Hermite these belong to
/// the weight function `e^{-x²}`); `line_weights` integrate plain functions,
/// `∫ f dx ≈ Σ line_weights[i] f(nodes[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub line_weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Uniform periodic grid `x_j = -L + j·2L/n`, `j = 0..n`.
    pub fn uniform_box(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width > 0.0) || points < 2 {
            return Err(Error::invalid(format!(
                "uniform box needs half_width > 0 and at least 2 points (got {half_width}, {points})"
            )));
        }
        let h = 2.0 * half_width / points as f64;
        let nodes: Vec<f64> = (0..points).map(|j| -half_width + j as f64 * h).collect();
        Ok(QuadratureRule {
            nodes,
            weights: vec![h; points],
            line_weights: vec![h; points],
            kind: RuleKind::UniformBox { half_width },
        })
    }

    pub fn step(&self) -> Option<f64> {
        match self.kind {
            RuleKind::UniformBox { half_width } => Some(2.0 * half_width / self.len() as f64),
            RuleKind::GaussHermite => None,
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.line_weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss–Hermite rule with `m` points for the weight `e^{-x²}`.
///
/// Newton iteration on the orthonormal-polynomial recurrence with the usual
/// asymptotic initial guesses, safeguarded by a sign bracket below the root
/// found before; nodes come back in increasing order.
pub fn gauss_hermite_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::invalid("Gauss-Hermite rule needs at least one point"));
    }
    let mf = m as f64;
    let half = m.div_ceil(2);
    // roots found from the largest downwards
    let mut roots = vec![0.0f64; half];
    let mut weights = vec![0.0f64; half];
    // no two roots are closer than this, so a sign scan with this step
    // never skips past a pair
    let scan = 0.5 * std::f64::consts::PI / (2.0 * mf + 1.0).sqrt();
    let mut z = 0.0f64;
    for i in 0..half {
        z = match i {
            0 => (2.0 * mf + 1.0).sqrt() - 1.855_75 * (2.0 * mf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * mf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * roots[0],
            3 => 1.91 * z - 0.91 * roots[1],
            _ => 2.0 * z - roots[i - 2],
        };
        // sign of p̃_m just below root i-1 (or above every root when i = 0)
        let s_hi = if i % 2 == 0 { 1.0 } else { -1.0 };
        let mut hi = if i == 0 { (2.0 * mf + 1.0).sqrt() + 1.0 } else { roots[i - 1] };
        if !(z < hi) {
            z = hi - scan;
        }
        let mut lo = z;
        let mut p_lo = orthonormal_poly_and_derivative(m, lo).0;
        while p_lo * s_hi > 0.0 {
            hi = lo;
            lo -= scan;
            p_lo = orthonormal_poly_and_derivative(m, lo).0;
        }
        if !p_lo.is_finite() || lo < -scan {
            return Err(Error::NonConvergence { points: m });
        }
        let mut converged = p_lo == 0.0;
        let mut pp = 0.0;
        z = if converged { lo } else { 0.5 * (lo + hi) };
        for _ in 0..NEWTON_MAX_ITER {
            if converged {
                break;
            }
            let (p, dp) = orthonormal_poly_and_derivative(m, z);
            if !p.is_finite() || !dp.is_finite() {
                break;
            }
            if p == 0.0 {
                converged = true;
                break;
            }
            if p * s_hi > 0.0 {
                hi = z;
            } else {
                lo = z;
            }
            let z1 = z;
            z = z1 - p / dp;
            // safeguard: bisect whenever Newton leaves the bracket
            if !(z > lo && z < hi) {
                z = 0.5 * (lo + hi);
            }
            if (z - z1).abs() <= NEWTON_TOL * z.abs().max(1.0) {
                converged = true;
            }
        }
        if converged {
            pp = orthonormal_poly_and_derivative(m, z).1;
        }
        if !converged || !pp.is_finite() || pp == 0.0 {
            return Err(Error::NonConvergence { points: m });
        }
        roots[i] = z;
        weights[i] = 2.0 / (pp * pp);
    }
    let mut nodes = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..half {
        nodes[m - 1 - i] = roots[i];
        nodes[i] = -roots[i];
        w[m - 1 - i] = weights[i];
        w[i] = weights[i];
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    // line weights w·e^{x²} = 1 / (m h_{m-1}(x)²), evaluated without overflow
    let line_weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let h = hermite_1d(m - 1, x);
            1.0 / (mf * h * h)
        })
        .collect();
    for k in 1..m {
        if nodes[k] <= nodes[k - 1] || !(w[k] > 0.0) {
            return Err(Error::NonConvergence { points: m });
        }
    }
    Ok(QuadratureRule { nodes, weights: w, line_weights, kind: RuleKind::GaussHermite })
}

/// Orthonormal Hermite polynomial `p̃_m(z)` and its derivative.
fn orthonormal_poly_and_derivative(m: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI_QUARTER_INV;
    let mut p2 = 0.0;
    for j in 1..=m {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * m as f64).sqrt() * p2)
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let xm = 0.5 * (b + a);
    let xl = 0.5 * (b - a);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        x[i] = xm - xl * z;
        x[n - 1 - i] = xm + xl * z;
        w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// ∫ x^j e^{-x²} dx = Γ((j+1)/2) for even j, 0 for odd j.
    fn gaussian_moment(j: u32) -> f64 {
        if j % 2 == 1 {
            return 0.0;
        }
        // Γ(1/2 + j/2) = sqrt(pi) (j-1)!! / 2^{j/2}
        let mut v = PI.sqrt();
        let mut k = 1;
        while k < j {
            v *= k as f64 / 2.0;
            k += 2;
        }
        v
    }

    #[test]
    fn one_point_rule() {
        let r = gauss_hermite_rule(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn two_point_rule_matches_moments() {
        // H_2 = 4x² - 2 has roots ±1/√2; equal weights √π/2
        let r = gauss_hermite_rule(2).unwrap();
        let root = 0.5f64.sqrt();
        assert!((r.nodes[1] - root).abs() < 1e-14 && (r.nodes[0] + root).abs() < 1e-14);
        assert!((r.weights[0] - r.weights[1]).abs() < 1e-15);
        assert!((r.weights[0] + r.weights[1] - PI.sqrt()).abs() < 1e-14);
        let second: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x * x).sum();
        assert!((second - PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_sqrt_pi() {
        for m in [1, 3, 8, 17, 64, 128, 200] {
            let r = gauss_hermite_rule(m).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - PI.sqrt()).abs() < 1e-12, "m = {m}: {s}");
        }
    }

    #[test]
    fn polynomial_exactness_degree() {
        for m in [4usize, 10, 20] {
            let r = gauss_hermite_rule(m).unwrap();
            for j in 0..(2 * m as u32) {
                let q: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(j as i32)).sum();
                let exact = gaussian_moment(j);
                // odd moments cancel between ± nodes; measure against Σ w|x|^j
                let scale: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.abs().powi(j as i32)).sum();
                assert!((q - exact).abs() < 1e-10 * scale, "m={m} j={j}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn nodes_increasing_weights_positive() {
        let r = gauss_hermite_rule(101).unwrap();
        assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert_eq!(r.nodes[50], 0.0);
    }

    #[test]
    fn line_weights_are_native_weights_times_gaussian() {
        let r = gauss_hermite_rule(30).unwrap();
        for ((x, w), lw) in r.nodes.iter().zip(&r.weights).zip(&r.line_weights) {
            let expected = w * (x * x).exp();
            assert!((lw - expected).abs() < 1e-11 * expected, "{lw} vs {expected}");
        }
    }

    #[test]
    fn oversized_rule_reports_non_convergence() {
        assert!(matches!(gauss_hermite_rule(2000), Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8, 0.0, 2.0);
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(15)).sum();
        assert!((q - 2f64.powi(16) / 16.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_box_layout() {
        let r = QuadratureRule::uniform_box(2.0, 8).unwrap();
        assert_eq!(r.nodes[0], -2.0);
        assert_eq!(r.nodes[4], 0.0);
        assert_eq!(r.step(), Some(0.5));
        assert!(QuadratureRule::uniform_box(-1.0, 8).is_err());
    }
}

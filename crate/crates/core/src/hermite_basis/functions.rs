//! Normalized Hermite functions h_k and their tensor products Φ_α.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `π^{-1/4}`, the peak value of h_0.
pub const PI_QUARTER_INV: f64 = 0.751_125_544_464_942_5;

/// Value of the normalized Hermite function `h_k(x)`.
///
/// Uses the three-term recurrence
/// `h_{j+1} = sqrt(2/(j+1)) x h_j - sqrt(j/(j+1)) h_{j-1}` seeded by
/// `h_0 = π^{-1/4} e^{-x²/2}`, which stays in range far beyond the point where
/// factorial-based formulas overflow.
pub fn hermite_1d(k: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI_QUARTER_INV * (-0.5 * x * x).exp();
    for j in 0..k {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * x * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `[h_0(x), …, h_{n-1}(x)]` in one recurrence sweep.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let mut prev = 0.0;
    let mut cur = PI_QUARTER_INV * (-0.5 * x * x).exp();
    out.push(cur);
    for j in 0..n - 1 {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * x * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// `Φ_α(x) = Π_j h_{α_j}(x_j)`.
pub fn hermite_nd(alpha: &[usize], x: &[f64]) -> Result<f64> {
    if alpha.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: alpha.len(), got: x.len() });
    }
    Ok(alpha.iter().zip(x).map(|(&k, &xj)| hermite_1d(k, xj)).product())
}

/// Eigenvalue `2|α| + d` of the oscillator on Φ_α.
pub fn eigenvalue(alpha: &[usize]) -> f64 {
    (2 * alpha.iter().sum::<usize>() + alpha.len()) as f64
}

/// `ln(n!)`, exact summation for small n and Stirling series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 64 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        let x = n as f64 + 1.0;
        // Stirling series for ln Γ(x)
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
            + 1.0 / (1260.0 * x.powi(5))
    }
}

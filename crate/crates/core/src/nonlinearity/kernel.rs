use crate::error::{Error, Result};
use crate::hermite_basis::gauss_legendre;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma as gamma_fn;
use std::f64::consts::PI;

/// Convolution kernel `K` of the nonlinearity `(K ∗ |u|^{2k}) u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    /// `K(x) = λ |x|^{-γ}`.
    Hartree { lambda: f64, gamma: f64 },
    /// `K` given through its unitary Fourier transform.
    FourierMultiplier { multiplier: Multiplier },
    /// Real samples of `K` on the uniform box `x_j = -L + j·2L/n` in every
    /// axis, row-major, `n^d` values.
    GridKernel { half_width: f64, points: usize, samples: Vec<f64> },
}

/// Where a homogeneous multiplier is switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    Everywhere,
    /// `|ξ| ≤ 1`
    UnitBall,
    /// `|ξ| > 1`
    Exterior,
}

/// Radial Fourier multiplier `K̂(ξ)`, unitary normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum Multiplier {
    /// Transform of `mass · (2πw²)^{-d/2} e^{-|x|²/(2w²)}`:
    /// `mass · (2π)^{-d/2} e^{-w²|ξ|²/2}`.
    Gaussian { mass: f64, width: f64 },
    /// Piecewise linear in `|ξ|` through `(radii[i], values[i])`, zero past the
    /// last radius.
    RadialTable { radii: Vec<f64>, values: Vec<f64> },
    /// `coefficient · |ξ|^{-exponent}` on `support`.
    Homogeneous { coefficient: f64, exponent: f64, support: Support },
}

impl KernelSpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            KernelSpec::Hartree { lambda, gamma } => {
                if !lambda.is_finite() {
                    return Err(Error::invalid("Hartree coupling must be finite"));
                }
                check_gamma(dim, *gamma)
            }
            KernelSpec::FourierMultiplier { multiplier } => multiplier.validate(),
            KernelSpec::GridKernel { half_width, points, samples } => {
                if !(*half_width > 0.0) || *points < 2 || points % 2 != 0 {
                    return Err(Error::invalid("grid kernel needs half_width > 0 and an even point count"));
                }
                let expected = points.pow(dim as u32);
                if samples.len() != expected {
                    return Err(Error::DimensionMismatch { expected, got: samples.len() });
                }
                if samples.iter().any(|s| !s.is_finite()) {
                    return Err(Error::invalid("grid kernel samples must be finite"));
                }
                Ok(())
            }
        }
    }

    /// `K(−x) = K(x)`, so `K̂` and `K ∗ ρ` are real. Radial kernels always
    /// are; sampled kernels are compared with their reflection through the
    /// node `x = 0` at index `n/2`.
    pub fn is_even(&self, dim: usize) -> bool {
        let KernelSpec::GridKernel { points, samples, .. } = self else {
            return true;
        };
        let n = *points;
        let shape = vec![n; dim];
        let scale = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut even = true;
        crate::tensor::for_each_index(&shape, |idx| {
            let mirror: Vec<usize> = idx.iter().map(|&i| (n - i) % n).collect();
            let a = samples[crate::tensor::flat_index(idx, &shape)];
            let b = samples[crate::tensor::flat_index(&mirror, &shape)];
            even &= (a - b).abs() <= 1e-14 * scale;
        });
        even
    }

    /// Same kernel with its strength multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        match self {
            KernelSpec::Hartree { lambda, gamma } => KernelSpec::Hartree { lambda: lambda * s, gamma: *gamma },
            KernelSpec::FourierMultiplier { multiplier } => {
                KernelSpec::FourierMultiplier { multiplier: multiplier.scaled(s) }
            }
            KernelSpec::GridKernel { half_width, points, samples } => KernelSpec::GridKernel {
                half_width: *half_width,
                points: *points,
                samples: samples.iter().map(|v| v * s).collect(),
            },
        }
    }
}

pub(crate) fn check_gamma(dim: usize, gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < dim as f64) {
        return Err(Error::ExponentRange(format!("Hartree exponent γ = {gamma} must lie in (0, {dim})")));
    }
    Ok(())
}

impl Multiplier {
    pub fn validate(&self) -> Result<()> {
        match self {
            Multiplier::Gaussian { mass, width } => {
                if !mass.is_finite() || !(*width > 0.0) {
                    return Err(Error::invalid("Gaussian multiplier needs finite mass and width > 0"));
                }
            }
            Multiplier::RadialTable { radii, values } => {
                if radii.len() != values.len() || radii.len() < 2 {
                    return Err(Error::invalid("radial table needs at least two (radius, value) pairs"));
                }
                if radii[0] != 0.0 || radii.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::invalid("radial table radii must start at 0 and increase"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("radial table values must be finite"));
                }
            }
            Multiplier::Homogeneous { coefficient, exponent, .. } => {
                if !coefficient.is_finite() || !exponent.is_finite() || *exponent < 0.0 {
                    return Err(Error::invalid("homogeneous multiplier needs a finite coefficient and exponent ≥ 0"));
                }
            }
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Self {
        match self {
            Multiplier::Gaussian { mass, width } => Multiplier::Gaussian { mass: mass * s, width: *width },
            Multiplier::RadialTable { radii, values } => {
                Multiplier::RadialTable { radii: radii.clone(), values: values.iter().map(|v| v * s).collect() }
            }
            Multiplier::Homogeneous { coefficient, exponent, support } => {
                Multiplier::Homogeneous { coefficient: coefficient * s, exponent: *exponent, support: *support }
            }
        }
    }

    /// `K̂` at radius `|ξ| = rho` in dimension `dim`.
    pub fn at_radius(&self, dim: usize, rho: f64) -> Result<f64> {
        match self {
            Multiplier::Gaussian { mass, width } => {
                Ok(mass * (2.0 * PI).powf(-0.5 * dim as f64) * (-0.5 * width * width * rho * rho).exp())
            }
            Multiplier::RadialTable { radii, values } => {
                let last = radii.len() - 1;
                if rho > radii[last] {
                    return Ok(0.0);
                }
                let i = radii.partition_point(|&r| r <= rho).clamp(1, last);
                let s = (rho - radii[i - 1]) / (radii[i] - radii[i - 1]);
                Ok(values[i - 1] + s * (values[i] - values[i - 1]))
            }
            Multiplier::Homogeneous { coefficient, exponent, support } => {
                let on = match support {
                    Support::Everywhere => true,
                    Support::UnitBall => rho <= 1.0,
                    Support::Exterior => rho > 1.0,
                };
                if !on {
                    return Ok(0.0);
                }
                if rho == 0.0 && *exponent > 0.0 {
                    return Err(Error::SingularFrequency);
                }
                Ok(coefficient * rho.powf(-exponent))
            }
        }
    }

    pub fn eval(&self, xi: &[f64]) -> Result<f64> {
        self.at_radius(xi.len(), xi.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    /// `‖K̂‖_{L^r(ℝ^d)}` by radial quadrature; `r = ∞` gives the supremum.
    ///
    /// Homogeneous pieces are integrated on panels graded geometrically
    /// towards the singular end, the last sliver closed by its power law.
    pub fn lebesgue_norm(&self, dim: usize, r: f64) -> Result<f64> {
        if !(r >= 1.0) {
            return Err(Error::ExponentRange(format!("Lebesgue exponent {r} must lie in [1, ∞]")));
        }
        let sphere = 2.0 * PI.powf(0.5 * dim as f64) / gamma_fn(0.5 * dim as f64);
        let d = dim as f64;
        match self {
            Multiplier::Homogeneous { coefficient, exponent, support } => {
                let c = coefficient.abs();
                if c == 0.0 {
                    return Ok(0.0);
                }
                // ρ^{b} with b = d − 1 − r·exponent, near 0 and near ∞
                let b = d - 1.0 - r * exponent;
                let inner_ok = r.is_finite() && b > -1.0 || *exponent == 0.0;
                let outer_ok = if r.is_infinite() { true } else { b < -1.0 };
                let needs_inner = *support != Support::Exterior;
                let needs_outer = *support != Support::UnitBall;
                if (needs_inner && !inner_ok) || (needs_outer && !outer_ok) {
                    return Err(Error::ExponentRange(format!(
                        "|ξ|^(-{exponent}) on {support:?} is not in L^{r}(R^{dim})"
                    )));
                }
                if r.is_infinite() {
                    return Ok(c);
                }
                let mut total = 0.0;
                if needs_inner {
                    total += graded_power_integral(b);
                }
                if needs_outer {
                    // ρ = 1/s maps (1, ∞) to (0, 1) with integrand s^{-b-2}
                    total += graded_power_integral(-b - 2.0);
                }
                Ok(c * (sphere * total).powf(1.0 / r))
            }
            _ => {
                let (lo, hi) = match self {
                    Multiplier::Gaussian { width, .. } => (0.0, 40.0 / width),
                    Multiplier::RadialTable { radii, .. } => (0.0, radii[radii.len() - 1]),
                    Multiplier::Homogeneous { .. } => unreachable!(),
                };
                if r.is_infinite() {
                    let mut m: f64 = 0.0;
                    for k in 0..=4096 {
                        m = m.max(self.at_radius(dim, lo + (hi - lo) * k as f64 / 4096.0)?.abs());
                    }
                    return Ok(m);
                }
                let (nodes, weights) = gauss_legendre(16, 0.0, 1.0);
                let panels = 512;
                let h = (hi - lo) / panels as f64;
                let mut total = 0.0;
                for j in 0..panels {
                    for (x, w) in nodes.iter().zip(&weights) {
                        let rho = lo + (j as f64 + x) * h;
                        total += w * h * self.at_radius(dim, rho)?.abs().powf(r) * rho.powf(d - 1.0);
                    }
                }
                Ok((sphere * total).powf(1.0 / r))
            }
        }
    }
}

/// `∫_0^1 s^b ds` for `b > -1`, on geometric panels `[2^{-k-1}, 2^{-k}]`.
fn graded_power_integral(b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(16, 0.0, 1.0);
    let mut total = 0.0;
    let mut hi: f64 = 1.0;
    for _ in 0..60 {
        let lo = 0.5 * hi;
        total += nodes.iter().zip(&weights).map(|(x, w)| w * (lo + x * (hi - lo)).powf(b)).sum::<f64>() * (hi - lo);
        hi = lo;
    }
    total + hi.powf(b + 1.0) / (b + 1.0)
}

/// Measured `C(d,γ)` in `FT(|x|^{-γ}) = C |ξ|^{γ-d}`: (d, γ, C, error bar).
///
/// Produced by the mollified-kernel radial transform with ε → 0 Richardson
/// extrapolation (`cargo run --example pin_hartree_constants`).
pub const PINNED_HARTREE_CONSTANTS: [(usize, f64, f64, f64); 3] = [
    (1, 0.4, 6.984086063367134e-1, 8.4e-7),
    (2, 0.5, 4.779890718396078e-1, 2.1e-6),
    (3, 1.0, 7.978849561393120e-1, 3.0e-6),
];

/// `C(d,γ)`: the pinned measurement when one exists, otherwise the Riesz
/// potential closed form `2^{d/2-γ} Γ((d-γ)/2) / Γ(γ/2)`.
pub fn hartree_constant(dim: usize, gamma: f64) -> Result<f64> {
    check_gamma(dim, gamma)?;
    if let Some(&(_, _, c, _)) = PINNED_HARTREE_CONSTANTS.iter().find(|e| e.0 == dim && e.1 == gamma) {
        return Ok(c);
    }
    let d = dim as f64;
    Ok(2f64.powf(0.5 * d - gamma) * gamma_fn(0.5 * (d - gamma)) / gamma_fn(0.5 * gamma))
}

/// `K̂(ξ) = λ C(d,γ) |ξ|^{-(d-γ)}` with `d = ξ.len()`.
pub fn hartree_kernel_fourier(lambda: f64, gamma: f64, xi: &[f64]) -> Result<f64> {
    let c = hartree_constant(xi.len(), gamma)?;
    let rho = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if rho == 0.0 {
        return Err(Error::SingularFrequency);
    }
    Ok(lambda * c * rho.powf(gamma - xi.len() as f64))
}

/// `K̂ = k1 + k2` with `k1 = χ_{|ξ|≤1} K̂` and `k2 = χ_{|ξ|>1} K̂`.
pub fn kernel_split(lambda: f64, gamma: f64, dim: usize) -> Result<(Multiplier, Multiplier)> {
    let coefficient = lambda * hartree_constant(dim, gamma)?;
    let exponent = dim as f64 - gamma;
    Ok((
        Multiplier::Homogeneous { coefficient, exponent, support: Support::UnitBall },
        Multiplier::Homogeneous { coefficient, exponent, support: Support::Exterior },
    ))
}

/// Transform of the mollified kernel `|x|^{-γ} e^{-ε|x|²}` at `|ξ| = rho`,
/// through the Gaussian subordination
/// `|x|^{-γ} = Γ(γ/2)^{-1} ∫_0^∞ t^{γ/2-1} e^{-t|x|²} dt`:
/// `Γ(γ/2)^{-1} ∫_0^∞ t^{γ/2-1} (2(t+ε))^{-d/2} e^{-ρ²/(4(t+ε))} dt`,
/// integrated by the trapezoid rule in `log t`.
pub fn mollified_hartree_transform(dim: usize, gamma: f64, eps: f64, rho: f64) -> Result<f64> {
    check_gamma(dim, gamma)?;
    if !(eps > 0.0 && rho > 0.0) {
        return Err(Error::invalid("mollifier width and frequency must be positive"));
    }
    let d = dim as f64;
    let integrand = |s: f64| {
        let t = s.exp();
        (0.5 * gamma * s).exp() * (2.0 * (t + eps)).powf(-0.5 * d) * (-rho * rho / (4.0 * (t + eps))).exp()
    };
    // left tail decays like e^{γs/2}, right tail like e^{-(d-γ)s/2}
    let lo = eps.ln().min((rho * rho).ln()) - 80.0 / gamma;
    let hi = (rho * rho).ln().max(eps.ln()) + 80.0 / (d - gamma);
    let h = 0.02;
    let n = ((hi - lo) / h).ceil() as usize;
    let total: f64 = (0..=n).map(|j| integrand(lo + j as f64 * h)).sum::<f64>() * h;
    Ok(total / gamma_fn(0.5 * gamma))
}

/// ε → 0 limit of [`mollified_hartree_transform`] from `ε0, ε0/2, ε0/4`,
/// `ε0 = ρ²/320`, two Richardson rounds.
pub fn extrapolated_hartree_transform(dim: usize, gamma: f64, rho: f64) -> Result<f64> {
    let eps0 = rho * rho / 320.0;
    let i = [
        mollified_hartree_transform(dim, gamma, eps0, rho)?,
        mollified_hartree_transform(dim, gamma, 0.5 * eps0, rho)?,
        mollified_hartree_transform(dim, gamma, 0.25 * eps0, rho)?,
    ];
    let r1a = 2.0 * i[1] - i[0];
    let r1b = 2.0 * i[2] - i[1];
    Ok((4.0 * r1b - r1a) / 3.0)
}

//! Grid samples ⇄ Hermite coefficients, one axis at a time.

use super::field::{GridField, HermiteField};
use super::functions::{hermite_functions, hermite_nd};
use super::quadrature::{gauss_hermite_rule, QuadratureRule, RuleKind};
use crate::error::{Error, Result};
use crate::tensor::{apply_separable, Matrix};
use num_complex::Complex64;

/// `S[i][k] = h_k(x_i)`, shape `M × n`.
pub fn synthesis_matrix(rule: &QuadratureRule, n: usize) -> Matrix<f64> {
    let rows: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| hermite_functions(n, x)).collect();
    Matrix::from_fn(rule.len(), n, |i, k| rows[i][k])
}

/// `A[k][i] = w̃_i h_k(x_i)`, shape `n × M`, so that `A·u ≈ ⟨u, h_k⟩`.
pub fn analysis_matrix(rule: &QuadratureRule, n: usize) -> Matrix<f64> {
    let s = synthesis_matrix(rule, n);
    Matrix::from_fn(n, rule.len(), |k, i| rule.line_weights[i] * s.get(i, k))
}

/// Checks that `rule` resolves every inner product up to cutoff `n`.
///
/// Gauss–Hermite needs `M ≥ n + 1`. A uniform box must contain the classical
/// region `|x| ≤ √(2n+1)` and sample it at or below the Nyquist spacing.
pub fn check_resolution(rule: &QuadratureRule, n: usize) -> Result<()> {
    match rule.kind {
        RuleKind::GaussHermite => {
            if rule.len() < n + 1 {
                return Err(Error::UnderResolved(format!(
                    "{} Gauss-Hermite points cannot resolve cutoff {n}; need at least {}",
                    rule.len(),
                    n + 1
                )));
            }
        }
        RuleKind::UniformBox { half_width } => {
            let edge = (2.0 * n as f64 + 1.0).sqrt();
            let h = 2.0 * half_width / rule.len() as f64;
            if half_width < edge || h > std::f64::consts::PI / edge {
                return Err(Error::UnderResolved(format!(
                    "box half-width {half_width} with step {h} cannot resolve cutoff {n}"
                )));
            }
        }
    }
    Ok(())
}

/// Hermite coefficients `c_α ≈ ⟨u, Φ_α⟩` for `α ∈ {0..n-1}^d`.
pub fn analyze(u: &GridField, n: usize) -> Result<HermiteField> {
    if n == 0 {
        return Err(Error::invalid("cutoff must be positive"));
    }
    for rule in u.axes() {
        check_resolution(rule, n)?;
    }
    Ok(analyze_unchecked(u, n))
}

/// [`analyze`] without the resolution guard; square collocation uses `M = n`.
pub fn analyze_unchecked(u: &GridField, n: usize) -> HermiteField {
    let mats: Vec<Matrix<f64>> = u.axes().iter().map(|r| analysis_matrix(r, n)).collect();
    let refs: Vec<&Matrix<f64>> = mats.iter().collect();
    let (coeffs, _) = apply_separable(u.values(), &u.shape(), &refs);
    HermiteField::from_coeffs(u.dim(), n, coeffs).expect("shape follows from the operators")
}

/// Pointwise `Σ_α c_α Φ_α` on the tensor grid.
pub fn synthesize(c: &HermiteField, grid: &[QuadratureRule]) -> Result<GridField> {
    if grid.len() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), got: grid.len() });
    }
    let mats: Vec<Matrix<f64>> = grid.iter().map(|r| synthesis_matrix(r, c.cutoff())).collect();
    let refs: Vec<&Matrix<f64>> = mats.iter().collect();
    let (values, _) = apply_separable(c.coeffs(), &c.shape(), &refs);
    GridField::new(grid.to_vec(), values)
}

/// Value of the expansion at a single point.
pub fn evaluate(c: &HermiteField, x: &[f64]) -> Result<Complex64> {
    if x.len() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), got: x.len() });
    }
    let tables: Vec<Vec<f64>> = x.iter().map(|&xj| hermite_functions(c.cutoff(), xj)).collect();
    let mut sum = Complex64::new(0.0, 0.0);
    c.for_each(|alpha, v| {
        let phi: f64 = alpha.iter().enumerate().map(|(j, &a)| tables[j][a]).product();
        sum += v * phi;
    });
    Ok(sum)
}

/// Uniform grid that resolves a field with `cutoff` modes per axis: half-width
/// `√(2N+1) + 8`, step `π / (2(√(2N+1) + 8))`.
pub fn resolving_grid(dim: usize, cutoff: usize) -> Result<Vec<QuadratureRule>> {
    let half = (2.0 * cutoff as f64 + 1.0).sqrt() + 8.0;
    // even, so the origin is a node
    let points = (4.0 * half * half / std::f64::consts::PI).ceil() as usize;
    uniform_grid(dim, half, points + points % 2)
}

/// `‖f‖_{L^p}` of the expansion by quadrature on [`resolving_grid`].
pub fn lp_norm(f: &HermiteField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::ExponentRange(format!("Lebesgue exponent {p} must lie in [1, ∞]")));
    }
    let grid = resolving_grid(f.dim(), f.cutoff())?;
    Ok(synthesize(f, &grid)?.lp_norm(p))
}

/// The same Gauss–Hermite rule on every axis.
pub fn gauss_hermite_grid(dim: usize, m: usize) -> Result<Vec<QuadratureRule>> {
    let rule = gauss_hermite_rule(m)?;
    Ok(vec![rule; dim])
}

/// The same uniform box on every axis.
pub fn uniform_grid(dim: usize, half_width: f64, points: usize) -> Result<Vec<QuadratureRule>> {
    let rule = QuadratureRule::uniform_box(half_width, points)?;
    Ok(vec![rule; dim])
}

/// Gram matrix `Σ_nodes w̃ Φ_α Φ_β` over `α, β ∈ {0..n-1}^d`, row-major in the
/// flat multi-index.
pub fn gram_matrix(dim: usize, n: usize, rule: &QuadratureRule) -> Result<Matrix<f64>> {
    let basis: Vec<HermiteField> = (0..n.pow(dim as u32))
        .map(|flat| {
            let alpha = crate::tensor::unflatten(flat, &vec![n; dim]);
            HermiteField::basis(dim, n, &alpha)
        })
        .collect::<Result<_>>()?;
    let grid = vec![rule.clone(); dim];
    let samples: Vec<GridField> = basis.iter().map(|b| synthesize(b, &grid)).collect::<Result<_>>()?;
    let w = samples[0].cell_weights();
    let count = basis.len();
    Ok(Matrix::from_fn(count, count, |a, b| {
        samples[a]
            .values()
            .iter()
            .zip(samples[b].values())
            .zip(&w)
            .map(|((x, y), w)| w * x.re * y.re)
            .sum()
    }))
}

/// `Φ_α` sampled directly from [`hermite_nd`], bypassing the tensor path.
pub fn sample_basis(alpha: &[usize], grid: &[QuadratureRule]) -> Result<GridField> {
    GridField::from_fn(grid.to_vec(), |x| {
        Complex64::new(hermite_nd(alpha, x).expect("grid rank equals |alpha|"), 0.0)
    })
}

use super::quadrature::QuadratureRule;
use crate::error::{Error, Result};
use crate::tensor::{for_each_index, product};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Spectral representation of a function: coefficients on Φ_α for
/// `α ∈ {0..cutoff-1}^dim`, row-major with α_1 most significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermiteField {
    dim: usize,
    cutoff: usize,
    coeffs: Vec<Complex64>,
}

impl HermiteField {
    pub fn zeros(dim: usize, cutoff: usize) -> Self {
        assert!(dim >= 1 && cutoff >= 1, "dimension and cutoff must be positive");
        HermiteField { dim, cutoff, coeffs: vec![Complex64::new(0.0, 0.0); cutoff.pow(dim as u32)] }
    }

    pub fn from_coeffs(dim: usize, cutoff: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || cutoff == 0 {
            return Err(Error::invalid("dimension and cutoff must be positive"));
        }
        let expected = cutoff.pow(dim as u32);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: coeffs.len() });
        }
        Ok(HermiteField { dim, cutoff, coeffs })
    }

    /// The basis function Φ_α.
    pub fn basis(dim: usize, cutoff: usize, alpha: &[usize]) -> Result<Self> {
        if alpha.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: alpha.len() });
        }
        if alpha.iter().any(|&a| a >= cutoff) {
            return Err(Error::invalid(format!("multi-index {alpha:?} exceeds cutoff {cutoff}")));
        }
        let mut f = Self::zeros(dim, cutoff);
        let idx = f.flat(alpha);
        f.coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.cutoff; self.dim]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn flat(&self, alpha: &[usize]) -> usize {
        alpha.iter().fold(0, |acc, &a| acc * self.cutoff + a)
    }

    pub fn get(&self, alpha: &[usize]) -> Complex64 {
        self.coeffs[self.flat(alpha)]
    }

    /// Visits `(α, c_α)` in storage order.
    pub fn for_each(&self, mut f: impl FnMut(&[usize], Complex64)) {
        let mut k = 0;
        for_each_index(&self.shape(), |alpha| {
            f(alpha, self.coeffs[k]);
            k += 1;
        });
    }

    /// `|α|` for every stored coefficient, in storage order.
    pub fn degrees(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for_each_index(&self.shape(), |alpha| out.push(alpha.iter().sum()));
        out
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum())
    }

    /// Energy proxy `Σ (2|α|+d) |c_α|²`.
    pub fn energy(&self) -> f64 {
        let d = self.dim;
        self.degrees()
            .iter()
            .zip(&self.coeffs)
            .map(|(&k, c)| (2 * k + d) as f64 * c.norm_sqr())
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(HermiteField { dim: self.dim, cutoff: self.cutoff, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(HermiteField { dim: self.dim, cutoff: self.cutoff, coeffs })
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c = c.conj());
        out
    }

    /// Zero-pads or truncates to a new cutoff.
    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        let mut out = Self::zeros(self.dim, cutoff);
        self.for_each(|alpha, c| {
            if alpha.iter().all(|&a| a < cutoff) {
                let k = out.flat(alpha);
                out.coeffs[k] = c;
            }
        });
        out
    }

    /// Largest `max_j α_j + 1` over the nonzero coefficients.
    pub fn effective_cutoff(&self) -> usize {
        let mut n = 0;
        self.for_each(|alpha, c| {
            if c != Complex64::new(0.0, 0.0) {
                n = n.max(alpha.iter().max().copied().unwrap_or(0) + 1);
            }
        });
        n.max(1)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        if self.cutoff != other.cutoff {
            return Err(Error::DimensionMismatch { expected: self.cutoff, got: other.cutoff });
        }
        Ok(())
    }
}

/// Samples of a function on a tensor grid, one rule per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    axes: Vec<QuadratureRule>,
    values: Vec<Complex64>,
}

impl GridField {
    pub fn new(axes: Vec<QuadratureRule>, values: Vec<Complex64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::invalid("grid needs at least one axis"));
        }
        let expected = product(&axes.iter().map(|a| a.len()).collect::<Vec<_>>());
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: values.len() });
        }
        Ok(GridField { axes, values })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(axes: Vec<QuadratureRule>, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let shape: Vec<usize> = axes.iter().map(|a| a.len()).collect();
        let mut values = Vec::with_capacity(product(&shape));
        let mut x = vec![0.0; axes.len()];
        for_each_index(&shape, |idx| {
            for (k, &i) in idx.iter().enumerate() {
                x[k] = axes[k].nodes[i];
            }
            values.push(f(&x));
        });
        Self::new(axes, values)
    }

    pub fn zeros_like(&self) -> Self {
        GridField { axes: self.axes.clone(), values: vec![Complex64::new(0.0, 0.0); self.values.len()] }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[QuadratureRule] {
        &self.axes
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len()).collect()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        Self::new(self.axes.clone(), values)
    }

    /// Product quadrature weight at every grid point, in storage order.
    pub fn cell_weights(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len());
        for_each_index(&self.shape(), |idx| {
            out.push(idx.iter().enumerate().map(|(k, &i)| self.axes[k].line_weights[i]).product());
        });
        out
    }

    /// Quadrature L^p norm; `p = ∞` gives the sample maximum.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        }
        let s: f64 = self.cell_weights().iter().zip(&self.values).map(|(w, v)| w * v.norm().powf(p)).sum();
        s.powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.cell_weights().iter().zip(&self.values).map(|(w, v)| w * v.norm_sqr()).sum();
        s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus on the outermost layer of grid points.
    pub fn boundary_max(&self) -> f64 {
        let shape = self.shape();
        let mut m: f64 = 0.0;
        let mut k = 0;
        for_each_index(&shape, |idx| {
            if idx.iter().zip(&shape).any(|(&i, &n)| i == 0 || i + 1 == n) {
                m = m.max(self.values[k].norm());
            }
            k += 1;
        });
        m
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.axes == other.axes
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        GridField { axes: self.axes.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_has_zero_norm() {
        assert_eq!(HermiteField::zeros(2, 5).l2_norm(), 0.0);
    }

    #[test]
    fn coefficient_count_is_checked() {
        assert!(HermiteField::from_coeffs(2, 3, vec![Complex64::new(1.0, 0.0); 8]).is_err());
        assert!(HermiteField::from_coeffs(2, 3, vec![Complex64::new(1.0, 0.0); 9]).is_ok());
    }

    #[test]
    fn energy_of_basis_function_is_eigenvalue() {
        let f = HermiteField::basis(2, 4, &[1, 2]).unwrap();
        assert_eq!(f.energy(), 8.0);
    }

    #[test]
    fn cutoff_resize_round_trip() {
        let mut f = HermiteField::zeros(2, 3);
        f.coeffs_mut()[4] = Complex64::new(2.0, -1.0);
        let g = f.with_cutoff(6).with_cutoff(3);
        assert_eq!(f, g);
        assert_eq!(f.effective_cutoff(), 2);
    }

    #[test]
    fn grid_norms_on_uniform_box() {
        let axis = QuadratureRule::uniform_box(1.0, 4).unwrap();
        let g = GridField::from_fn(vec![axis], |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((g.l2_norm() - 2f64.sqrt()).abs() < 1e-15);
        assert!((g.lp_norm(1.0) - 2.0).abs() < 1e-15);
        assert_eq!(g.lp_norm(f64::INFINITY), 1.0);
    }
}

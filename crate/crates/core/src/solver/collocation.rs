//! Square Gauss–Hermite collocation of `F`: `N` nodes per axis for cutoff `N`.
//!
//! With `M = N` the synthesis matrix `S` is invertible and the analysis
//! matrix is `A = S⁻¹ = SᵀW`, so `SSᵀ = W⁻¹` and `‖A u‖² = Σ w̃ᵢ |uᵢ|²`. A nodal
//! phase rotation therefore preserves the coefficient l2 norm to roundoff.

use super::config::NonlinearitySpec;
use crate::error::Result;
use crate::hermite_basis::{analysis_matrix, gauss_hermite_rule, synthesis_matrix, GridField, HermiteField, QuadratureRule};
use crate::nonlinearity::{power_value, BoxGrid, ConvolutionPlan, KernelSpec, RealEntireSeries};
use crate::tensor::{apply_separable, Matrix};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
enum Term {
    None,
    Power { k: u32, sign: f64 },
    Hartree { plan: ConvolutionPlan, k: u32, box_axes: Vec<QuadratureRule>, to_box: Matrix<f64>, to_nodes: Matrix<f64>, even: bool },
    Series { series: RealEntireSeries, gauge: Option<Vec<f64>> },
}

/// The semi-discrete nonlinearity `c ↦ A F(S c)` for one cutoff.
#[derive(Debug, Clone)]
pub struct Collocation {
    dim: usize,
    cutoff: usize,
    nodes: QuadratureRule,
    synth: Matrix<f64>,
    anal: Matrix<f64>,
    coupling: f64,
    term: Term,
}

impl Collocation {
    pub fn new(spec: &NonlinearitySpec, coupling: f64, dim: usize, cutoff: usize) -> Result<Self> {
        spec.validate(dim)?;
        let nodes = gauss_hermite_rule(cutoff)?;
        let synth = synthesis_matrix(&nodes, cutoff);
        let anal = analysis_matrix(&nodes, cutoff);
        let term = match spec {
            NonlinearitySpec::None => Term::None,
            NonlinearitySpec::Power { k, sign } => Term::Power { k: *k, sign: sign.signum() },
            NonlinearitySpec::Hartree { kernel, k, box_grid } => {
                let grid = match (box_grid, kernel) {
                    (Some(g), _) => *g,
                    (None, KernelSpec::GridKernel { half_width, points, .. }) => {
                        BoxGrid { half_width: *half_width, points: *points }
                    }
                    (None, _) => BoxGrid::for_dim(dim),
                };
                let box_axes = grid.axes(dim)?;
                let edge = nodes.nodes.last().copied().unwrap_or(0.0);
                if edge >= grid.half_width - 1.0 {
                    return Err(crate::Error::UnderResolved(format!(
                        "collocation nodes reach {edge:.2}, too close to the convolution box edge {}",
                        grid.half_width
                    )));
                }
                Term::Hartree {
                    plan: ConvolutionPlan::new(dim, grid, kernel)?,
                    k: *k,
                    to_box: synthesis_matrix(&box_axes[0], cutoff),
                    to_nodes: trig_interpolation(&box_axes[0], &nodes.nodes),
                    box_axes,
                    even: kernel.is_even(dim),
                }
            }
            NonlinearitySpec::Series { series } => Term::Series { series: series.clone(), gauge: gauge_profile(series) },
        };
        Ok(Collocation { dim, cutoff, nodes, synth, anal, coupling, term })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn node_rule(&self) -> &QuadratureRule {
        &self.nodes
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.term, Term::None) || self.coupling == 0.0
    }

    /// Whether the nodal flow is a pure phase rotation.
    pub fn is_gauge(&self) -> bool {
        match &self.term {
            Term::None | Term::Power { .. } => true,
            Term::Hartree { even, .. } => *even,
            Term::Series { gauge, .. } => gauge.is_some(),
        }
    }

    fn shape(&self, n: usize) -> Vec<usize> {
        vec![n; self.dim]
    }

    /// `S c`: values at the collocation nodes.
    pub fn to_nodes(&self, c: &HermiteField) -> Vec<Complex64> {
        let ops = vec![&self.synth; self.dim];
        apply_separable(c.coeffs(), &self.shape(self.cutoff), &ops).0
    }

    /// `A u`: coefficients of nodal values.
    pub fn from_nodes(&self, u: &[Complex64]) -> HermiteField {
        let ops = vec![&self.anal; self.dim];
        let (coeffs, _) = apply_separable(u, &self.shape(self.cutoff), &ops);
        HermiteField::from_coeffs(self.dim, self.cutoff, coeffs).expect("square collocation")
    }

    /// `K ∗ |u|^{2k}` at the nodes (times the coupling), `u` from `c`.
    fn hartree_potential(&self, c: &HermiteField) -> Result<Vec<Complex64>> {
        let Term::Hartree { plan, k, box_axes, to_box, to_nodes, .. } = &self.term else {
            unreachable!("only called for Hartree terms")
        };
        let ops = vec![to_box; self.dim];
        let (on_box, _) = apply_separable(c.coeffs(), &self.shape(self.cutoff), &ops);
        let v = plan.potential(&GridField::new(box_axes.clone(), on_box)?, *k)?;
        let ops = vec![to_nodes; self.dim];
        let (at_nodes, _) = apply_separable(&v, &self.shape(box_axes[0].len()), &ops);
        Ok(at_nodes.into_iter().map(|z| z * self.coupling).collect())
    }

    /// Real `G` with `F(u) = G(|u|²)u` at the nodes, for gauge terms.
    fn gauge_potential(&self, c: &HermiteField, u: &[Complex64]) -> Result<Vec<f64>> {
        Ok(match &self.term {
            Term::None => vec![0.0; u.len()],
            Term::Power { k, sign } => u.iter().map(|z| self.coupling * sign * z.norm_sqr().powi(*k as i32)).collect(),
            Term::Hartree { .. } => self.hartree_potential(c)?.into_iter().map(|z| z.re).collect(),
            Term::Series { gauge: Some(g), .. } => {
                u.iter().map(|z| self.coupling * polynomial(g, z.norm_sqr())).collect()
            }
            Term::Series { gauge: None, .. } => unreachable!("non-gauge series has no real potential"),
        })
    }

    /// `A F(S c)`, the semi-discrete nonlinear term.
    pub fn term(&self, c: &HermiteField) -> Result<HermiteField> {
        let u = self.to_nodes(c);
        let f: Vec<Complex64> = match &self.term {
            Term::None => return Ok(HermiteField::zeros(self.dim, self.cutoff)),
            Term::Power { k, sign } => u.iter().map(|&z| power_value(z, *k, *sign) * self.coupling).collect(),
            Term::Hartree { .. } => self.hartree_potential(c)?.iter().zip(&u).map(|(v, z)| v * z).collect(),
            Term::Series { series, .. } => u.iter().map(|&z| series.eval_complex(z) * self.coupling).collect(),
        };
        Ok(self.from_nodes(&f))
    }

    /// Flow of `c' = −i A F(S c)` over `tau`.
    ///
    /// Gauge terms rotate nodal phases by `e^{−iτG}`; the Hartree potential
    /// depends on the box synthesis of `c` and is frozen at the midpoint of
    /// the step. Other terms take one RK4 step.
    pub fn flow(&self, c: &HermiteField, tau: f64) -> Result<HermiteField> {
        if self.is_zero() {
            return Ok(c.clone());
        }
        if !self.is_gauge() {
            return self.rk4(c, tau);
        }
        let u = self.to_nodes(c);
        let rotate = |g: &[f64], s: f64| -> Vec<Complex64> {
            u.iter().zip(g).map(|(z, v)| z * Complex64::from_polar(1.0, -s * v)).collect()
        };
        let g = self.gauge_potential(c, &u)?;
        if let Term::Hartree { .. } = self.term {
            let half = self.from_nodes(&rotate(&g, 0.5 * tau));
            let g_mid = self.gauge_potential(&half, &u)?;
            return Ok(self.from_nodes(&rotate(&g_mid, tau)));
        }
        Ok(self.from_nodes(&rotate(&g, tau)))
    }

    fn rk4(&self, c: &HermiteField, tau: f64) -> Result<HermiteField> {
        let minus_i = Complex64::new(0.0, -1.0);
        let slope = |x: &HermiteField| -> Result<HermiteField> { Ok(self.term(x)?.scale(minus_i)) };
        let axpy = |x: &HermiteField, a: f64, y: &HermiteField| x.add(&y.scale(Complex64::new(a, 0.0)));
        let k1 = slope(c)?;
        let k2 = slope(&axpy(c, 0.5 * tau, &k1)?)?;
        let k3 = slope(&axpy(c, 0.5 * tau, &k2)?)?;
        let k4 = slope(&axpy(c, tau, &k3)?)?;
        let sum = k1.add(&k2.scale(Complex64::new(2.0, 0.0)))?.add(&k3.scale(Complex64::new(2.0, 0.0)))?.add(&k4)?;
        axpy(c, tau / 6.0, &sum)
    }
}

/// `g_j` with `F = Σ_j g_j |u|^{2j} u`, when the series has that form.
fn gauge_profile(series: &RealEntireSeries) -> Option<Vec<f64>> {
    if !series.is_real_gauge() {
        return None;
    }
    let levels = (series.degree() as usize + 1) / 2;
    Some((0..levels).map(|j| series.coefficient(2 * j as u32 + 1, 0).re).collect())
}

fn polynomial(g: &[f64], r: f64) -> f64 {
    g.iter().rev().fold(0.0, |acc, &c| acc * r + c)
}

/// Trigonometric interpolation from a periodic uniform box to `targets`:
/// `D(y) = sin(πy/h) / (n tan(πy/(nh)))` with the Nyquist mode split evenly.
fn trig_interpolation(axis: &QuadratureRule, targets: &[f64]) -> Matrix<f64> {
    let n = axis.len();
    let h = axis.step().expect("uniform box");
    Matrix::from_fn(targets.len(), n, |i, j| {
        let y = targets[i] - axis.nodes[j];
        let s = (PI * y / h).sin();
        if s.abs() < 1e-14 && (y / h).round().abs() < 0.5 {
            return 1.0;
        }
        s / (n as f64 * (PI * y / (n as f64 * h)).tan())
    })
}

//! Ratio diagnostics for the multilinear estimates: HLS, trilinear bounds in
//! modulation norms, and their Lipschitz counterparts. None of these certify a
//! constant; they measure ratios that must stay finite and stable.

use super::convolution::{BoxGrid, ConvolutionPlan};
use super::kernel::{check_gamma, KernelSpec};
use crate::error::{Error, Result};
use crate::hermite_basis::{gauss_legendre, synthesize, GridField, HermiteField, QuadratureRule, RuleKind};
use crate::tf_analysis::{GridStftPlan, StftPlan, TFLattice};
use num_complex::Complex64;

/// `q` with `1/q = 1/p + γ/d − 1`, provided `1 < p < q < ∞`.
pub fn hls_exponent(dim: usize, gamma: f64, p: f64) -> Result<f64> {
    check_gamma(dim, gamma)?;
    let inv_q = 1.0 / p + gamma / dim as f64 - 1.0;
    if !(p > 1.0) || !(inv_q > 0.0) {
        return Err(Error::ExponentRange(format!(
            "no finite q with 1/q = 1/p + γ/d - 1 for p = {p}, γ = {gamma}, d = {dim}; need γ > d(1 - 1/p)"
        )));
    }
    Ok(1.0 / inv_q)
}

/// `‖ |x|^{-γ} ∗ f ‖_{L^q} / ‖f‖_{L^p}` for `f` on a one-dimensional uniform
/// box, `q` from [`hls_exponent`].
///
/// `f` is taken piecewise linear between nodes and zero outside; the
/// convolution is integrated exactly cell by cell. Its `L^q` norm is the
/// trapezoid sum on the nodes plus both tails `|x| > L`, where
/// `|x|^{-γ} ∗ f` decays like `|x|^{-γ}`.
pub fn hls_ratio(f: &GridField, gamma: f64, p: f64) -> Result<f64> {
    if f.dim() != 1 {
        return Err(Error::Unsupported("HLS ratio is implemented for d = 1".into()));
    }
    let q = hls_exponent(1, gamma, p)?;
    let rule = &f.axes()[0];
    if !matches!(rule.kind, RuleKind::UniformBox { .. }) {
        return Err(Error::invalid("HLS ratio needs a uniform box grid"));
    }
    let nodes = &rule.nodes;
    let vals = f.values();
    let h = rule.step().expect("uniform box");
    let potential = |x: f64| riesz_potential(nodes, vals, h, gamma, x);

    let n = nodes.len();
    let mut body = 0.0;
    for (j, &x) in nodes.iter().enumerate() {
        let w = if j == 0 || j + 1 == n { 0.5 * h } else { h };
        body += w * potential(x).norm().powf(q);
    }
    let beta = gamma * q - 1.0;
    let (gx, gw) = gauss_legendre(32, 0.0, 1.0);
    let mut tails = 0.0;
    for edge in [nodes[n - 1], nodes[0]] {
        // x = X/s, s = v^{1/β}: the |x|^{-γq} decay becomes a bounded integrand in v
        let big = edge.abs();
        for (&v, &w) in gx.iter().zip(&gw) {
            let s = v.powf(1.0 / beta);
            let ds = s / (beta * v);
            let x = edge.signum() * big / s;
            tails += w * potential(x).norm().powf(q) * big / (s * s) * ds;
        }
    }
    let num = (body + tails).powf(1.0 / q);
    let den = f.lp_norm(p);
    if den == 0.0 {
        return Err(Error::invalid("HLS ratio is undefined for the zero function"));
    }
    Ok(num / den)
}

/// `∫ |x − y|^{-γ} f(y) dy` for piecewise-linear `f`.
fn riesz_potential(nodes: &[f64], vals: &[Complex64], h: f64, gamma: f64, x: f64) -> Complex64 {
    let a0 = |u: f64| u.signum() * u.abs().powf(1.0 - gamma) / (1.0 - gamma);
    let a1 = |u: f64| u.abs().powf(2.0 - gamma) / (2.0 - gamma);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev0 = a0(nodes[0] - x);
    let mut prev1 = a1(nodes[0] - x);
    for i in 0..nodes.len() - 1 {
        let u = nodes[i + 1] - x;
        let (next0, next1) = (a0(u), a1(u));
        let m0 = next0 - prev0;
        let m1 = next1 - prev1 + (x - nodes[i]) * m0;
        let slope = (vals[i + 1] - vals[i]) / h;
        acc += vals[i] * m0 + slope * m1;
        prev0 = next0;
        prev1 = next1;
    }
    acc
}

/// Checks `(p, q)` against the ranges in which `(K ∗ |f|^{2k}) f` is bounded
/// by `‖f‖^{2k+1}_{M^{p,q}}`.
///
/// Hartree kernels (k = 1): `1 ≤ p ≤ 2`, `1 ≤ q < 2d/(d+γ)`. Other kernels:
/// `q = 1` for any `p` and `k`, or `1 ≤ p, q ≤ 2` when `k = 1`.
pub fn check_multilinear_exponents(spec: &KernelSpec, dim: usize, k: u32, p: f64, q: f64) -> Result<()> {
    let bad = |why: String| Err(Error::ExponentRange(why));
    if !(p >= 1.0) || !(q >= 1.0) {
        return bad(format!("exponents ({p}, {q}) must be at least 1"));
    }
    match spec {
        KernelSpec::Hartree { gamma, .. } => {
            check_gamma(dim, *gamma)?;
            let d = dim as f64;
            let q_max = 2.0 * d / (d + gamma);
            if k != 1 {
                return bad("the Hartree estimate is cubic (k = 1)".into());
            }
            if p > 2.0 || q >= q_max {
                return bad(format!("Hartree estimate needs 1 ≤ p ≤ 2 and 1 ≤ q < {q_max:.4} (got {p}, {q})"));
            }
        }
        _ => {
            if q != 1.0 && !(k == 1 && p <= 2.0 && q <= 2.0) {
                return bad(format!("kernel estimate needs q = 1, or p, q ≤ 2 with k = 1 (got {p}, {q}, k = {k})"));
            }
        }
    }
    Ok(())
}

/// Evaluates `N(f) = (K ∗ |f|^{2k}) f` and its modulation norms for a fixed
/// kernel, cutoff, box, and lattice, reusing every plan.
///
/// Frequencies add under products, so `N(f)` occupies a phase-space radius
/// `(2k+1)·√(2N+1)` for a cutoff-`N` field. The lattice must cover that band
/// ([`MultilinearProbe::lattice_for`]); a narrower one fails the
/// boundary-decay check.
#[derive(Debug, Clone)]
pub struct MultilinearProbe {
    spec: KernelSpec,
    k: u32,
    conv: ConvolutionPlan,
    axes: Vec<QuadratureRule>,
    field_plan: StftPlan,
    grid_plan: GridStftPlan,
}

impl MultilinearProbe {
    pub fn new(spec: &KernelSpec, k: u32, dim: usize, cutoff: usize, grid: BoxGrid, lat: &TFLattice) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("power k must be positive"));
        }
        if lat.dim != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: lat.dim });
        }
        let axes = grid.axes(dim)?;
        Ok(MultilinearProbe {
            spec: spec.clone(),
            k,
            conv: ConvolutionPlan::new(dim, grid, spec)?,
            field_plan: StftPlan::new(lat, cutoff)?,
            grid_plan: GridStftPlan::new(&axes, lat)?,
            axes,
        })
    }

    /// [`TFLattice::for_cutoff`] at the cutoff whose radius matches the band
    /// of `N(f)`.
    pub fn lattice_for(dim: usize, k: u32, cutoff: usize, step: f64, sigma: f64) -> Result<TFLattice> {
        let widen = (2 * k as usize + 1).pow(2);
        TFLattice::for_cutoff(dim, (widen * (2 * cutoff + 1) - 1) / 2, step, sigma)
    }

    pub fn nonlinear_term(&self, f: &HermiteField) -> Result<GridField> {
        let u = synthesize(f, &self.axes)?;
        self.conv.apply(&u, self.k)
    }

    pub fn field_norm(&self, f: &HermiteField, p: f64, q: f64) -> Result<f64> {
        self.field_plan.apply(f)?.mixed_norm(p, q)
    }

    pub fn grid_norm(&self, g: &GridField, p: f64, q: f64) -> Result<f64> {
        self.grid_plan.apply(g)?.mixed_norm(p, q)
    }

    /// `‖N(f)‖_{M^{p,q}} / ‖f‖^{2k+1}_{M^{p,q}}`.
    pub fn ratio(&self, f: &HermiteField, p: f64, q: f64) -> Result<f64> {
        check_multilinear_exponents(&self.spec, f.dim(), self.k, p, q)?;
        let den = self.field_norm(f, p, q)?;
        if den == 0.0 {
            return Err(Error::invalid("multilinear ratio is undefined for the zero field"));
        }
        let num = self.grid_norm(&self.nonlinear_term(f)?, p, q)?;
        Ok(num / den.powi(2 * self.k as i32 + 1))
    }

    /// `‖N(f) − N(g)‖ / (Σ_{j=0}^{2k} ‖f‖^j ‖g‖^{2k−j} · ‖f − g‖)`, all norms
    /// in `M^{p,q}`.
    pub fn lipschitz_ratio(&self, f: &HermiteField, g: &HermiteField, p: f64, q: f64) -> Result<f64> {
        check_multilinear_exponents(&self.spec, f.dim(), self.k, p, q)?;
        let (nf, ng) = (self.nonlinear_term(f)?, self.nonlinear_term(g)?);
        let diff = nf.with_values(nf.values().iter().zip(ng.values()).map(|(a, b)| a - b).collect())?;
        let num = self.grid_norm(&diff, p, q)?;
        let (a, b) = (self.field_norm(f, p, q)?, self.field_norm(g, p, q)?);
        let gap = self.field_norm(&f.sub(g)?, p, q)?;
        if gap == 0.0 {
            return Err(Error::invalid("Lipschitz ratio needs f ≠ g"));
        }
        let deg = 2 * self.k as i32;
        let poly: f64 = (0..=deg).map(|j| a.powi(j) * b.powi(deg - j)).sum();
        Ok(num / (poly * gap))
    }
}

/// `‖(K ∗ |f|²) f‖_{M^{p,q}} / ‖f‖³_{M^{p,q}}` on the default box for `f`'s
/// dimension; `lat` must cover the band of `N(f)`, see
/// [`MultilinearProbe::lattice_for`].
pub fn trilinear_ratio(f: &HermiteField, p: f64, q: f64, spec: &KernelSpec, lat: &TFLattice) -> Result<f64> {
    MultilinearProbe::new(spec, 1, f.dim(), f.cutoff(), BoxGrid::for_dim(f.dim()), lat)?.ratio(f, p, q)
}

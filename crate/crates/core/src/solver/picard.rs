//! Fixed-point iteration of `𝒥(u)(t) = U(t)u₀ − i∫₀ᵗ U(t−τ) F(u(τ)) dτ`.
//!
//! Iterates are stored in the interaction picture `v(t) = U(−t)u(t)`, where
//! they vary on the nonlinear time scale only, at Chebyshev–Lobatto times on
//! `[0, T]`. Between samples `v` is interpolated barycentrically, so
//! `𝒥(u)(t) = U(t)[u₀ − i∫₀ᵗ U(−τ) F(U(τ)v(τ)) dτ]` with the integral taken by
//! Gauss–Legendre on `[0, t]`.

use super::collocation::Collocation;
use super::config::{NonlinearitySpec, SolverConfig};
use crate::error::{Error, Result};
use crate::hermite_basis::{gauss_legendre, HermiteField};
use crate::nonlinearity::{KernelSpec, MultilinearProbe, BoxGrid};
use crate::spectral_propagator::LinearPropagator;
use crate::tf_analysis::TFLattice;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct PicardOutcome {
    /// `u(T)` from the last iterate.
    pub field: HermiteField,
    /// `sup_j ‖u^{(n+1)}(t_j) − u^{(n)}(t_j)‖_{l²}` for each iteration.
    pub differences: Vec<f64>,
    /// Successive quotients of `differences`.
    pub ratios: Vec<f64>,
    pub converged: bool,
    /// `(t_j, u(t_j))` of the last iterate.
    pub samples: Vec<(f64, HermiteField)>,
}

impl PicardOutcome {
    pub fn iterations(&self) -> usize {
        self.differences.len()
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.ratios.iter().cloned().reduce(f64::max)
    }
}

/// Solves on `[0, cfg.horizon]`.
pub fn picard_solve(u0: &HermiteField, cfg: &SolverConfig) -> Result<PicardOutcome> {
    let dim = u0.dim();
    cfg.validate(dim)?;
    if cfg.well_posed_scope {
        if let NonlinearitySpec::Hartree { kernel: KernelSpec::Hartree { gamma, .. }, .. } = &cfg.nonlinearity {
            let cap = (dim as f64 / 2.0).min(2.0);
            if !(*gamma < cap) {
                return Err(Error::ExponentRange(format!(
                    "local theory needs γ < min{{2, d/2}} = {cap} (got {gamma}); unset well_posed_scope to run anyway"
                )));
            }
        }
    }
    let col = Collocation::new(&cfg.nonlinearity, cfg.coupling, dim, u0.cutoff())?;
    picard_window(&col, &LinearPropagator::new(cfg.sign_convention), u0, cfg.horizon, cfg)
}

pub(crate) fn picard_window(
    col: &Collocation,
    prop: &LinearPropagator,
    u0: &HermiteField,
    horizon: f64,
    cfg: &SolverConfig,
) -> Result<PicardOutcome> {
    let m = cfg.time_samples;
    let times = lobatto_times(m, horizon);
    let weights = barycentric_weights(m);
    let minus_i = Complex64::new(0.0, -1.0);
    let floor = 64.0 * f64::EPSILON * u0.l2_norm().max(1.0);

    let mut v: Vec<HermiteField> = vec![u0.clone(); m];
    let mut differences = Vec::new();
    let mut ratios = Vec::new();
    let mut converged = false;
    for _ in 0..cfg.picard_iters {
        let mut next = Vec::with_capacity(m);
        for &t in &times {
            let mut acc = u0.clone();
            if t > 0.0 {
                let (nodes, w) = gauss_legendre(cfg.time_quadrature_nodes, 0.0, t);
                for (&tau, &wk) in nodes.iter().zip(&w) {
                    let v_tau = interpolate(&times, &weights, &v, tau)?;
                    let f = col.term(&prop.evolve(&v_tau, tau))?;
                    acc = acc.add(&prop.evolve(&f, -tau).scale(minus_i * wk))?;
                }
            }
            next.push(acc);
        }
        let mut diff: f64 = 0.0;
        for (a, b) in next.iter().zip(&v) {
            diff = diff.max(a.sub(b)?.l2_norm());
        }
        if let Some(&prev) = differences.last() {
            if prev > floor {
                ratios.push(diff / prev);
            }
        }
        differences.push(diff);
        v = next;
        let n = ratios.len();
        if n >= 2 && ratios[n - 1] >= 1.0 && ratios[n - 2] >= 1.0 && diff > floor {
            return Err(Error::NonContraction { ratios });
        }
        if diff <= cfg.tolerances.fixed_point.max(floor) {
            converged = true;
            break;
        }
    }
    let samples: Vec<(f64, HermiteField)> = times.iter().zip(&v).map(|(&t, vj)| (t, prop.evolve(vj, t))).collect();
    let field = samples.last().expect("at least two samples").1.clone();
    Ok(PicardOutcome { field, differences, ratios, converged, samples })
}

/// `t_j = T(1 − cos(πj/(m−1)))/2`, ascending from 0 to `T`.
fn lobatto_times(m: usize, horizon: f64) -> Vec<f64> {
    (0..m).map(|j| 0.5 * horizon * (1.0 - (PI * j as f64 / (m - 1) as f64).cos())).collect()
}

fn barycentric_weights(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == m - 1 {
                0.5 * s
            } else {
                s
            }
        })
        .collect()
}

fn interpolate(times: &[f64], weights: &[f64], values: &[HermiteField], t: f64) -> Result<HermiteField> {
    if let Some(j) = times.iter().position(|&tj| tj == t) {
        return Ok(values[j].clone());
    }
    let terms: Vec<f64> = times.iter().zip(weights).map(|(&tj, &w)| w / (t - tj)).collect();
    let total: f64 = terms.iter().sum();
    let mut acc = HermiteField::zeros(values[0].dim(), values[0].cutoff());
    for (vj, &c) in values.iter().zip(&terms) {
        acc = acc.add(&vj.scale(Complex64::new(c / total, 0.0)))?;
    }
    Ok(acc)
}

/// `T = 1/(2cM²)`, the horizon on which `cTM² ≤ 1/2`; `cap` when `M = 0`.
pub fn local_existence_time(m: f64, c: f64, cap: f64) -> Result<f64> {
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::invalid(format!("M must be a finite nonnegative number (got {m})")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::invalid(format!("c must be positive (got {c})")));
    }
    if m == 0.0 {
        return Ok(cap);
    }
    Ok(1.0 / (2.0 * c * m * m))
}

/// Safety factor applied to the largest measured trilinear ratio.
pub const TRILINEAR_SAFETY: f64 = 2.0;

/// `2 · max_f ‖(K ∗ |f|²) f‖_{M^{p,q}} / ‖f‖³_{M^{p,q}}` over `family`, with
/// the probe lattice sized for the cubic band.
pub fn empirical_trilinear_constant(kernel: &KernelSpec, family: &[HermiteField], p: f64, q: f64) -> Result<f64> {
    let first = family.first().ok_or_else(|| Error::invalid("empty field family"))?;
    let (dim, cutoff) = (first.dim(), family.iter().map(|f| f.cutoff()).max().unwrap_or(1));
    let lat: TFLattice = MultilinearProbe::lattice_for(dim, 1, cutoff, 0.25, 1.0)?;
    let probe = MultilinearProbe::new(kernel, 1, dim, cutoff, BoxGrid::for_dim(dim), &lat)?;
    let mut worst: f64 = 0.0;
    for f in family {
        worst = worst.max(probe.ratio(&f.with_cutoff(cutoff), p, q)?);
    }
    Ok(TRILINEAR_SAFETY * worst)
}

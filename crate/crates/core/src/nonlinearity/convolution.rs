//! `K ∗ ρ` on a periodic uniform box by the discrete Fourier transform.

use super::kernel::{check_gamma, hartree_constant, KernelSpec};
use crate::error::{Error, Result};
use crate::hermite_basis::{GridField, QuadratureRule, RuleKind};
use crate::tensor::for_each_index;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Largest `max_boundary |u| / max |u|` accepted by the convolution.
pub const BOUNDARY_DECAY: f64 = 1e-10;

/// Uniform box `[-L, L)^d` with `points` nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxGrid {
    pub half_width: f64,
    pub points: usize,
}

impl Default for BoxGrid {
    fn default() -> Self {
        BoxGrid { half_width: 14.0, points: 256 }
    }
}

impl BoxGrid {
    /// Default box for dimension `dim`: 256 points per axis in 1D, fewer in
    /// higher dimensions so the grid stays near 10^5 points.
    pub fn for_dim(dim: usize) -> Self {
        let points = match dim {
            1 => 256,
            2 => 128,
            _ => 64,
        };
        BoxGrid { half_width: 14.0, points }
    }

    pub fn axes(&self, dim: usize) -> Result<Vec<QuadratureRule>> {
        if self.points % 2 != 0 {
            return Err(Error::invalid("convolution box needs an even point count"));
        }
        let rule = QuadratureRule::uniform_box(self.half_width, self.points)?;
        Ok(vec![rule; dim])
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }
}

/// Multiplier table and FFT plans for one kernel on one box.
#[derive(Clone)]
pub struct ConvolutionPlan {
    dim: usize,
    grid: BoxGrid,
    /// `K̂` at the DFT frequencies, FFT order, row-major.
    multiplier: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for ConvolutionPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConvolutionPlan").field("dim", &self.dim).field("grid", &self.grid).finish()
    }
}

impl ConvolutionPlan {
    pub fn new(dim: usize, grid: BoxGrid, spec: &KernelSpec) -> Result<Self> {
        spec.validate(dim)?;
        grid.axes(dim)?;
        let n = grid.points;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let freq = |m: usize| {
            let signed = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
            2.0 * PI * signed / (n as f64 * grid.step())
        };
        let shape = vec![n; dim];
        let radius = |idx: &[usize]| idx.iter().map(|&m| freq(m).powi(2)).sum::<f64>().sqrt();
        let mut multiplier = Vec::with_capacity(n.pow(dim as u32));
        match spec {
            KernelSpec::Hartree { lambda, gamma } => {
                check_gamma(dim, *gamma)?;
                let c = lambda * hartree_constant(dim, *gamma)?;
                let e = dim as f64 - gamma;
                for_each_index(&shape, |idx| {
                    let r = radius(idx);
                    multiplier.push(Complex64::new(if r == 0.0 { 0.0 } else { c * r.powf(-e) }, 0.0));
                });
                // zero bin: mean over the shell max|m_j| = 1
                let mut sum = 0.0;
                let mut count = 0;
                for_each_index(&vec![3; dim], |off| {
                    if off.iter().all(|&o| o == 1) {
                        return;
                    }
                    let idx: Vec<usize> = off.iter().map(|&o| (o + n - 1) % n).collect();
                    sum += c * radius(&idx).powf(-e);
                    count += 1;
                });
                multiplier[0] = Complex64::new(sum / count as f64, 0.0);
            }
            KernelSpec::FourierMultiplier { multiplier: m } => {
                let mut err = None;
                for_each_index(&shape, |idx| match m.at_radius(dim, radius(idx)) {
                    Ok(v) => multiplier.push(Complex64::new(v, 0.0)),
                    Err(e) => {
                        err.get_or_insert(e);
                        multiplier.push(Complex64::new(0.0, 0.0));
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
            KernelSpec::GridKernel { half_width, points, samples } => {
                if *points != n || *half_width != grid.half_width {
                    return Err(Error::invalid(format!(
                        "grid kernel sampled on box ({half_width}, {points}) but the convolution box is ({}, {n})",
                        grid.half_width
                    )));
                }
                // move x = 0 (index n/2) to index 0, then transform
                let mut shifted = vec![Complex64::new(0.0, 0.0); samples.len()];
                let mut k = 0;
                for_each_index(&shape, |idx| {
                    let mut flat = 0;
                    for &i in idx {
                        flat = flat * n + (i + n / 2) % n;
                    }
                    shifted[flat] = Complex64::new(samples[k], 0.0);
                    k += 1;
                });
                fft_nd(&mut shifted, n, dim, forward.as_ref());
                let scale = (2.0 * PI).powf(-0.5 * dim as f64) * grid.step().powi(dim as i32);
                multiplier = shifted.into_iter().map(|v| v * scale).collect();
            }
        }
        Ok(ConvolutionPlan { dim, grid, multiplier, forward, inverse })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> BoxGrid {
        self.grid
    }

    /// `K ∗ ρ = (2π)^{d/2} n^{-d} IDFT(K̂ · DFT ρ)` on the box.
    pub fn convolve(&self, density: &[f64]) -> Result<Vec<Complex64>> {
        let n = self.grid.points;
        let total = n.pow(self.dim as u32);
        if density.len() != total {
            return Err(Error::DimensionMismatch { expected: total, got: density.len() });
        }
        let mut buf: Vec<Complex64> = density.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        fft_nd(&mut buf, n, self.dim, self.forward.as_ref());
        for (b, m) in buf.iter_mut().zip(&self.multiplier) {
            *b *= m;
        }
        fft_nd(&mut buf, n, self.dim, self.inverse.as_ref());
        let scale = (2.0 * PI).powf(0.5 * self.dim as f64) / total as f64;
        for b in &mut buf {
            *b *= scale;
        }
        Ok(buf)
    }

    /// `K ∗ |u|^{2k}` for `u` on this plan's box.
    pub fn potential(&self, u: &GridField, k: u32) -> Result<Vec<Complex64>> {
        self.check_field(u)?;
        let density: Vec<f64> = u.values().iter().map(|v| v.norm_sqr().powi(k as i32)).collect();
        self.convolve(&density)
    }

    /// `(K ∗ |u|^{2k}) u`.
    pub fn apply(&self, u: &GridField, k: u32) -> Result<GridField> {
        let v = self.potential(u, k)?;
        u.with_values(u.values().iter().zip(&v).map(|(a, b)| a * b).collect())
    }

    fn check_field(&self, u: &GridField) -> Result<()> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: u.dim() });
        }
        for axis in u.axes() {
            let RuleKind::UniformBox { half_width } = axis.kind else {
                return Err(Error::invalid("convolution needs a uniform box grid"));
            };
            if half_width != self.grid.half_width || axis.len() != self.grid.points {
                return Err(Error::invalid("field grid differs from the convolution box"));
            }
        }
        let peak = u.max_abs();
        if peak > 0.0 && u.boundary_max() > BOUNDARY_DECAY * peak {
            return Err(Error::BoundaryDecay { relative: u.boundary_max() / peak, tolerance: BOUNDARY_DECAY });
        }
        Ok(())
    }
}

/// In-place transform along every axis of an `n^d` row-major array.
fn fft_nd(data: &mut [Complex64], n: usize, dim: usize, fft: &dyn Fft<f64>) {
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        let block = stride * n;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (j, l) in line.iter_mut().enumerate() {
                    *l = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, l) in line.iter().enumerate() {
                    data[base + j * stride] = *l;
                }
            }
        }
    }
}

/// `(K ∗ |u|^{2k}) u` for `u` sampled on a uniform box.
pub fn hartree_term(u: &GridField, spec: &KernelSpec, k: u32) -> Result<GridField> {
    let axis = u.axes().first().ok_or_else(|| Error::invalid("empty grid"))?;
    let RuleKind::UniformBox { half_width } = axis.kind else {
        return Err(Error::invalid("hartree_term needs a uniform box grid"));
    };
    if k == 0 {
        return Err(Error::invalid("power k must be positive"));
    }
    let plan = ConvolutionPlan::new(u.dim(), BoxGrid { half_width, points: axis.len() }, spec)?;
    plan.apply(u, k)
}

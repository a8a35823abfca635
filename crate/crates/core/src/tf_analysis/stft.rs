use super::lattice::TFLattice;
use crate::error::{Error, Result};
use crate::hermite_basis::{analyze, hermite_functions, GridField, HermiteField, QuadratureRule, RuleKind};
use crate::tensor::{apply_separable, for_each_index, permute, Matrix};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Largest table the dense routes will build.
const MAX_TABLE: usize = 20_000_000;

/// Input to the time–frequency transforms.
#[derive(Debug, Clone, Copy)]
pub enum Signal<'a> {
    Hermite(&'a HermiteField),
    Grid(&'a GridField),
}

impl<'a> From<&'a HermiteField> for Signal<'a> {
    fn from(f: &'a HermiteField) -> Self {
        Signal::Hermite(f)
    }
}

impl<'a> From<&'a GridField> for Signal<'a> {
    fn from(f: &'a GridField) -> Self {
        Signal::Grid(f)
    }
}

/// Samples of a transform on a [`TFLattice`], shape `(x_1..x_d, y_1..y_d)`,
/// row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct STFTTable {
    pub lattice: TFLattice,
    pub values: Vec<Complex64>,
}

impl STFTTable {
    pub fn shape(&self) -> Vec<usize> {
        self.lattice.shape()
    }

    pub fn get(&self, x_idx: &[usize], y_idx: &[usize]) -> Complex64 {
        let (nx, ny) = (self.lattice.nx(), self.lattice.ny());
        let xf = x_idx.iter().fold(0, |a, &i| a * nx + i);
        let yf = y_idx.iter().fold(0, |a, &i| a * ny + i);
        self.values[xf * ny.pow(self.lattice.dim as u32) + yf]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max_boundary |V| / max |V|`, 0 for the zero table.
    pub fn boundary_relative(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let shape = self.shape();
        let mut edge: f64 = 0.0;
        let mut k = 0;
        for_each_index(&shape, |idx| {
            if idx.iter().zip(&shape).any(|(&i, &n)| i == 0 || i + 1 == n) {
                edge = edge.max(self.values[k].norm());
            }
            k += 1;
        });
        edge / peak
    }

    pub fn check_boundary(&self) -> Result<()> {
        let relative = self.boundary_relative();
        let tolerance = self.lattice.boundary_tolerance;
        if relative > tolerance {
            return Err(Error::BoundaryDecay { relative, tolerance });
        }
        Ok(())
    }

    /// `‖ ‖V(x,y)‖_{L^p_x} ‖_{L^q_y}` by Riemann sums; `∞` is the lattice maximum.
    pub fn mixed_norm(&self, p: f64, q: f64) -> Result<f64> {
        check_exponent(p)?;
        check_exponent(q)?;
        let d = self.lattice.dim as i32;
        let nxd = self.lattice.nx().pow(d as u32);
        let nyd = self.lattice.ny().pow(d as u32);
        let wx = self.lattice.x_step.powi(d);
        let wy = self.lattice.y_step.powi(d);
        Ok(mixed_norm_slow_inner(&self.values, nxd, nyd, p, q, wx, wy))
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::ExponentRange(format!("Lebesgue exponent {p} must lie in [1, ∞]")));
    }
    Ok(())
}

/// Values laid out `[a][b]` with `a` slow; inner `L^p` over `a` (weight `wa`),
/// outer `L^q` over `b` (weight `wb`). Accumulation order is fixed.
pub(crate) fn mixed_norm_slow_inner(values: &[Complex64], na: usize, nb: usize, p: f64, q: f64, wa: f64, wb: f64) -> f64 {
    let mut inner = vec![0.0f64; nb];
    for a in 0..na {
        let row = &values[a * nb..(a + 1) * nb];
        for (acc, v) in inner.iter_mut().zip(row) {
            let m = v.norm();
            if p.is_infinite() {
                *acc = acc.max(m);
            } else {
                *acc += m.powf(p);
            }
        }
    }
    if !p.is_infinite() {
        inner.iter_mut().for_each(|s| *s = (*s * wa).powf(1.0 / p));
    }
    outer_norm(&inner, q, wb)
}

/// Layout `[a][b]`; inner `L^p` over the fast index `b`, outer `L^q` over `a`.
pub(crate) fn mixed_norm_fast_inner(values: &[Complex64], na: usize, nb: usize, p: f64, q: f64, wa: f64, wb: f64) -> f64 {
    let inner: Vec<f64> = (0..na)
        .map(|a| {
            let row = &values[a * nb..(a + 1) * nb];
            if p.is_infinite() {
                row.iter().map(|v| v.norm()).fold(0.0, f64::max)
            } else {
                (row.iter().map(|v| v.norm().powf(p)).sum::<f64>() * wb).powf(1.0 / p)
            }
        })
        .collect();
    outer_norm(&inner, q, wa)
}

fn outer_norm(inner: &[f64], q: f64, w: f64) -> f64 {
    if q.is_infinite() {
        inner.iter().copied().fold(0.0, f64::max)
    } else {
        (inner.iter().map(|s| s.powf(q)).sum::<f64>() * w).powf(1.0 / q)
    }
}

/// Precomputed one-axis STFT of every Hermite function below a cutoff.
///
/// Entry `[(x, y)][k] = (2π)^{-1/2} ∫ h_k(t) g(t−x) e^{-iyt} dt` by trapezoid
/// quadrature on a grid fine enough to resolve the product's bandwidth.
#[derive(Debug, Clone)]
pub struct StftPlan {
    lattice: TFLattice,
    cutoff: usize,
    axis_op: Matrix<Complex64>,
}

impl StftPlan {
    pub fn new(lattice: &TFLattice, cutoff: usize) -> Result<Self> {
        lattice.validate()?;
        if cutoff == 0 {
            return Err(Error::invalid("cutoff must be positive"));
        }
        if lattice.len() > MAX_TABLE {
            return Err(Error::invalid(format!("lattice of {} points exceeds the dense table limit", lattice.len())));
        }
        let reach = (2.0 * cutoff as f64 + 1.0).sqrt();
        let sigma = lattice.window_width;
        let half = reach + 10.0 + 2.0 * sigma;
        let band = lattice.y_extent + reach + 8.0 * (1.0 + 1.0 / sigma);
        let dt_max = 2.0 * PI / band / 1.5;
        let nt = (2.0 * half / dt_max).ceil() as usize + 1;
        let dt = 2.0 * half / (nt - 1) as f64;
        let t: Vec<f64> = (0..nt).map(|j| -half + j as f64 * dt).collect();
        let h: Vec<Vec<f64>> = t.iter().map(|&tj| hermite_functions(cutoff, tj)).collect();
        let axis_op = axis_operator(lattice, &t, dt, |j, k| h[j][k], cutoff);
        Ok(StftPlan { lattice: lattice.clone(), cutoff, axis_op })
    }

    pub fn lattice(&self) -> &TFLattice {
        &self.lattice
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Table of `V_g f`, rejecting tables that have not decayed at the boundary.
    pub fn apply(&self, f: &HermiteField) -> Result<STFTTable> {
        let table = self.apply_unchecked(f)?;
        table.check_boundary()?;
        Ok(table)
    }

    pub fn apply_unchecked(&self, f: &HermiteField) -> Result<STFTTable> {
        if f.dim() != self.lattice.dim {
            return Err(Error::DimensionMismatch { expected: self.lattice.dim, got: f.dim() });
        }
        if f.cutoff() > self.cutoff {
            return Err(Error::UnderResolved(format!(
                "plan built for cutoff {}, field has cutoff {}",
                self.cutoff,
                f.cutoff()
            )));
        }
        let padded;
        let f = if f.cutoff() < self.cutoff {
            padded = f.with_cutoff(self.cutoff);
            &padded
        } else {
            f
        };
        let ops = vec![&self.axis_op; f.dim()];
        let (values, _) = apply_separable(f.coeffs(), &f.shape(), &ops);
        Ok(STFTTable { lattice: self.lattice.clone(), values: split_axes(values, &self.lattice) })
    }
}

/// Per-axis operator from basis coefficients to the `(x, y)` pairs of one
/// lattice axis; `source(j, k)` is basis function `k` at node `j`.
fn axis_operator(
    lattice: &TFLattice,
    t: &[f64],
    dt: f64,
    source: impl Fn(usize, usize) -> f64 + Sync,
    cols: usize,
) -> Matrix<Complex64> {
    let xs = lattice.x_coords();
    let ys = lattice.y_coords();
    let ny = ys.len();
    let nt = t.len();
    let scale = dt / (2.0 * PI).sqrt();
    let cos: Vec<f64> = ys.iter().flat_map(|&y| t.iter().map(move |&tj| (y * tj).cos())).collect();
    let sin: Vec<f64> = ys.iter().flat_map(|&y| t.iter().map(move |&tj| (y * tj).sin())).collect();
    let rows: Vec<Vec<Complex64>> = xs
        .par_iter()
        .map(|&x| {
            let w: Vec<f64> = t.iter().map(|&tj| lattice.window_1d(tj - x) * scale).collect();
            let mut block = vec![Complex64::new(0.0, 0.0); ny * cols];
            let mut a = vec![0.0; nt];
            for k in 0..cols {
                for j in 0..nt {
                    a[j] = source(j, k) * w[j];
                }
                for b in 0..ny {
                    let c = &cos[b * nt..(b + 1) * nt];
                    let s = &sin[b * nt..(b + 1) * nt];
                    let mut re = 0.0;
                    let mut im = 0.0;
                    for j in 0..nt {
                        re += a[j] * c[j];
                        im -= a[j] * s[j];
                    }
                    block[b * cols + k] = Complex64::new(re, im);
                }
            }
            block
        })
        .collect();
    let data: Vec<Complex64> = rows.into_iter().flatten().collect();
    Matrix { rows: xs.len() * ny, cols, data }
}

/// `[(x_1 y_1), …, (x_d y_d)]` → `[x_1..x_d, y_1..y_d]`.
fn split_axes(values: Vec<Complex64>, lattice: &TFLattice) -> Vec<Complex64> {
    let d = lattice.dim;
    if d == 1 {
        return values;
    }
    let shape: Vec<usize> = (0..2 * d).map(|k| if k % 2 == 0 { lattice.nx() } else { lattice.ny() }).collect();
    let perm: Vec<usize> = (0..d).map(|k| 2 * k).chain((0..d).map(|k| 2 * k + 1)).collect();
    permute(&values, &shape, &perm).0
}

/// Table of `V_g f` on the lattice.
///
/// Hermite inputs and Gauss–Hermite grids go through the basis tables of
/// [`StftPlan`]; uniform-box grids are integrated directly on their own nodes.
pub fn stft<'a>(f: impl Into<Signal<'a>>, lat: &TFLattice) -> Result<STFTTable> {
    match f.into() {
        Signal::Hermite(h) => StftPlan::new(lat, h.cutoff())?.apply(h),
        Signal::Grid(g) => {
            if g.axes().iter().all(|a| a.kind == RuleKind::GaussHermite) {
                let n = g.axes().iter().map(|a| a.len()).min().unwrap_or(1).saturating_sub(1).max(1);
                let h = analyze(g, n)?;
                return StftPlan::new(lat, n)?.apply(&h);
            }
            let table = stft_grid(g, lat)?;
            table.check_boundary()?;
            Ok(table)
        }
    }
}

fn stft_grid(g: &GridField, lat: &TFLattice) -> Result<STFTTable> {
    GridStftPlan::new(g.axes(), lat)?.apply_unchecked(g)
}

/// Per-axis STFT operators for samples on a fixed uniform-box grid,
/// integrated on the grid's own nodes.
#[derive(Debug, Clone)]
pub struct GridStftPlan {
    lattice: TFLattice,
    axes: Vec<QuadratureRule>,
    ops: Vec<Matrix<Complex64>>,
}

impl GridStftPlan {
    pub fn new(axes: &[QuadratureRule], lat: &TFLattice) -> Result<Self> {
        lat.validate()?;
        if axes.len() != lat.dim {
            return Err(Error::DimensionMismatch { expected: lat.dim, got: axes.len() });
        }
        if lat.len() > MAX_TABLE {
            return Err(Error::invalid(format!("lattice of {} points exceeds the dense table limit", lat.len())));
        }
        let mut ops: Vec<Matrix<Complex64>> = Vec::with_capacity(axes.len());
        for (k, axis) in axes.iter().enumerate() {
            match axes[..k].iter().position(|a| a == axis) {
                Some(j) => ops.push(ops[j].clone()),
                None => ops.push(grid_axis_operator(axis, lat)?),
            }
        }
        Ok(GridStftPlan { lattice: lat.clone(), axes: axes.to_vec(), ops })
    }

    /// Table of `V_g f`, rejecting tables that have not decayed at the boundary.
    pub fn apply(&self, g: &GridField) -> Result<STFTTable> {
        let table = self.apply_unchecked(g)?;
        table.check_boundary()?;
        Ok(table)
    }

    pub fn apply_unchecked(&self, g: &GridField) -> Result<STFTTable> {
        if g.axes() != self.axes.as_slice() {
            return Err(Error::invalid("field grid differs from the plan's grid"));
        }
        let refs: Vec<&Matrix<Complex64>> = self.ops.iter().collect();
        let (values, _) = apply_separable(g.values(), &g.shape(), &refs);
        Ok(STFTTable { lattice: self.lattice.clone(), values: split_axes(values, &self.lattice) })
    }
}

fn grid_axis_operator(axis: &QuadratureRule, lat: &TFLattice) -> Result<Matrix<Complex64>> {
    let dt = axis.step().ok_or_else(|| Error::invalid("grid STFT needs a uniform-box axis"))?;
    let band = lat.y_extent + 9.0 / lat.window_width;
    if dt > 2.0 * PI / band {
        return Err(Error::UnderResolved(format!(
            "grid step {dt} cannot resolve frequencies up to {:.2}",
            lat.y_extent
        )));
    }
    let xs = lat.x_coords();
    let ys = lat.y_coords();
    let n = axis.len();
    let scale = dt / (2.0 * PI).sqrt();
    let rows: Vec<Vec<Complex64>> = xs
        .par_iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(ys.len() * n);
            for &y in &ys {
                for &t in &axis.nodes {
                    row.push(Complex64::from_polar(lat.window_1d(t - x) * scale, -y * t));
                }
            }
            row
        })
        .collect();
    Ok(Matrix { rows: xs.len() * ys.len(), cols: n, data: rows.into_iter().flatten().collect() })
}

/// Discretized `‖f‖_{M^{p,q}}`.
pub fn modulation_norm<'a>(f: impl Into<Signal<'a>>, p: f64, q: f64, lat: &TFLattice) -> Result<f64> {
    check_exponent(p)?;
    check_exponent(q)?;
    stft(f, lat)?.mixed_norm(p, q)
}

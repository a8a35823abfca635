use super::lattice::TFLattice;
use super::stft::{check_exponent, mixed_norm_fast_inner, StftPlan, STFTTable};
use crate::error::{Error, Result};
use crate::hermite_basis::{hermite_1d, hermite_functions, ln_factorial, HermiteField};
use crate::tensor::{apply_separable, permute, Matrix};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Precomputed one-axis Fourier–Wigner transforms of the Hermite functions:
/// `[(x, y)][k] = e^{ixy/2} ∫ e^{ixξ} h_k(ξ+y) h_0(ξ) dξ`.
#[derive(Debug, Clone)]
pub struct WignerPlan {
    lattice: TFLattice,
    cutoff: usize,
    axis_op: Matrix<Complex64>,
}

impl WignerPlan {
    pub fn new(lattice: &TFLattice, cutoff: usize) -> Result<Self> {
        lattice.validate()?;
        if cutoff == 0 {
            return Err(Error::invalid("cutoff must be positive"));
        }
        // h_0(ξ) < 1e-20 beyond |ξ| = 10
        let half = 10.0;
        let reach = (2.0 * cutoff as f64 + 1.0).sqrt();
        let band = lattice.x_extent + reach + 17.0;
        let nxi = (2.0 * half / (2.0 * PI / band / 1.5)).ceil() as usize + 1;
        let dxi = 2.0 * half / (nxi - 1) as f64;
        let xi: Vec<f64> = (0..nxi).map(|j| -half + j as f64 * dxi).collect();
        let ground: Vec<f64> = xi.iter().map(|&s| hermite_1d(0, s) * dxi).collect();
        let xs = lattice.x_coords();
        let ys = lattice.y_coords();
        let blocks: Vec<Vec<Complex64>> = xs
            .par_iter()
            .map(|&x| {
                let phase: Vec<Complex64> = xi.iter().zip(&ground).map(|(&s, &g)| Complex64::from_polar(g, x * s)).collect();
                let mut block = Vec::with_capacity(ys.len() * cutoff);
                for &y in &ys {
                    let mut acc = vec![Complex64::new(0.0, 0.0); cutoff];
                    for (j, &s) in xi.iter().enumerate() {
                        let h = hermite_functions(cutoff, s + y);
                        for (a, hk) in acc.iter_mut().zip(h) {
                            *a += phase[j] * hk;
                        }
                    }
                    let twist = Complex64::from_polar(1.0, 0.5 * x * y);
                    block.extend(acc.into_iter().map(|a| a * twist));
                }
                block
            })
            .collect();
        let axis_op = Matrix { rows: xs.len() * ys.len(), cols: cutoff, data: blocks.into_iter().flatten().collect() };
        Ok(WignerPlan { lattice: lattice.clone(), cutoff, axis_op })
    }

    /// Table of `F(x, y) = ⟨π(x+iy) f, Φ_0⟩`.
    pub fn apply(&self, f: &HermiteField) -> Result<STFTTable> {
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
        let f = f.with_cutoff(self.cutoff);
        let ops = vec![&self.axis_op; f.dim()];
        let (values, _) = apply_separable(f.coeffs(), &f.shape(), &ops);
        let d = self.lattice.dim;
        let values = if d == 1 {
            values
        } else {
            let shape: Vec<usize> =
                (0..2 * d).map(|k| if k % 2 == 0 { self.lattice.nx() } else { self.lattice.ny() }).collect();
            let perm: Vec<usize> = (0..d).map(|k| 2 * k).chain((0..d).map(|k| 2 * k + 1)).collect();
            permute(&values, &shape, &perm).0
        };
        let table = STFTTable { lattice: self.lattice.clone(), values };
        table.check_boundary()?;
        Ok(table)
    }
}

/// Fourier–Wigner transform of `f` against `Φ_0` on the lattice.
pub fn fourier_wigner(f: &HermiteField, lat: &TFLattice) -> Result<STFTTable> {
    WignerPlan::new(lat, f.cutoff())?.apply(f)
}

/// Special Hermite function
/// `Φ_{α,0}(z) = (2π)^{-d/2} (α!)^{-1/2} (i/√2)^{|α|} z̄^α e^{-|z|²/4}`,
/// with the magnitude assembled in the log domain.
pub fn special_hermite(alpha: &[usize], z: &[Complex64]) -> Result<Complex64> {
    if alpha.len() != z.len() {
        return Err(Error::DimensionMismatch { expected: alpha.len(), got: z.len() });
    }
    let d = alpha.len() as f64;
    let total: usize = alpha.iter().sum();
    let mut ln_mag = -0.5 * d * (2.0 * PI).ln() - 0.5 * total as f64 * 2f64.ln();
    let mut arg = 0.5 * PI * total as f64;
    for (&a, zj) in alpha.iter().zip(z) {
        ln_mag -= 0.5 * ln_factorial(a) + 0.25 * zj.norm_sqr();
        if a > 0 {
            let r = zj.norm();
            if r == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            ln_mag += a as f64 * r.ln();
            arg -= a as f64 * zj.arg();
        }
    }
    Ok(Complex64::from_polar(ln_mag.exp(), arg))
}

/// `(2π)^{d/2} Φ_{α,0}(x + iy)` on the lattice: the closed form of
/// `fourier_wigner(Φ_α)`.
pub fn special_hermite_table(alpha: &[usize], lat: &TFLattice) -> Result<STFTTable> {
    if alpha.len() != lat.dim {
        return Err(Error::DimensionMismatch { expected: lat.dim, got: alpha.len() });
    }
    let d = lat.dim;
    let xs = lat.x_coords();
    let ys = lat.y_coords();
    let scale = (2.0 * PI).powf(0.5 * d as f64);
    let mut values = Vec::with_capacity(lat.len());
    let mut z = vec![Complex64::new(0.0, 0.0); d];
    crate::tensor::for_each_index(&lat.shape(), |idx| {
        for j in 0..d {
            z[j] = Complex64::new(xs[idx[j]], ys[idx[d + j]]);
        }
        values.push(special_hermite(alpha, &z).expect("ranks agree") * scale);
    });
    Ok(STFTTable { lattice: lat.clone(), values })
}

/// `‖ ‖W(x,y)‖_{L^q_y} ‖_{L^p_x}` for `W = (2π)^{-d/2} F`, the Fourier–Wigner
/// route to the modulation norm.
pub fn mpp_norm_via_wigner(f: &HermiteField, p: f64, q: f64, lat: &TFLattice) -> Result<f64> {
    check_exponent(p)?;
    check_exponent(q)?;
    let table = fourier_wigner(f, lat)?;
    Ok(wigner_mixed_norm(&table, p, q))
}

pub(crate) fn wigner_mixed_norm(table: &STFTTable, p: f64, q: f64) -> f64 {
    let lat = &table.lattice;
    let d = lat.dim as i32;
    let scale = (2.0 * PI).powf(-0.5 * d as f64);
    let nxd = lat.nx().pow(d as u32);
    let nyd = lat.ny().pow(d as u32);
    let raw = mixed_norm_fast_inner(&table.values, nxd, nyd, q, p, lat.x_step.powi(d), lat.y_step.powi(d));
    raw * scale
}

/// Largest `|F(x,y) − (2π)^{d/2} e^{-ix·y/2} V_g f(y, −x)|` over the lattice.
///
/// Needs a square symmetric lattice (equal steps and extents in x and y) and
/// the Gaussian window of width 1, so that `(y, −x)` is again a lattice point
/// and `g = Φ_0`.
pub fn ui_identity_deviation(f: &HermiteField, lat: &TFLattice) -> Result<f64> {
    if lat.x_step != lat.y_step || lat.x_extent != lat.y_extent {
        return Err(Error::invalid("identity check needs equal x and y lattices"));
    }
    if lat.window_width != 1.0 {
        return Err(Error::invalid("identity check needs the Φ_0 window (width 1)"));
    }
    let fw = fourier_wigner(f, lat)?;
    let v = StftPlan::new(lat, f.cutoff())?.apply(f)?;
    Ok(ui_deviation_tables(&fw, &v))
}

pub(crate) fn ui_deviation_tables(fw: &STFTTable, v: &STFTTable) -> f64 {
    let lat = &fw.lattice;
    let d = lat.dim;
    let n = lat.nx();
    let xs = lat.x_coords();
    let ys = lat.y_coords();
    let scale = (2.0 * PI).powf(0.5 * d as f64);
    let mut worst: f64 = 0.0;
    let mut k = 0;
    let mut vx = vec![0usize; d];
    let mut vy = vec![0usize; d];
    crate::tensor::for_each_index(&lat.shape(), |idx| {
        let mut dot = 0.0;
        for j in 0..d {
            let (ix, iy) = (idx[j], idx[d + j]);
            vx[j] = iy;
            vy[j] = n - 1 - ix;
            dot += xs[ix] * ys[iy];
        }
        let rhs = v.get(&vx, &vy) * Complex64::from_polar(scale, -0.5 * dot);
        worst = worst.max((fw.values[k] - rhs).norm());
        k += 1;
    });
    worst
}

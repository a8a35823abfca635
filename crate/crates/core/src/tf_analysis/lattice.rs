use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Sampling lattice for `V_g f(x, y)`: symmetric point sets
/// `x ∈ {−X, −X+Δx, …, X}` and `y ∈ {−Y, …, Y}` on every axis, and the
/// L²-normalized Gaussian window of width σ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TFLattice {
    pub dim: usize,
    pub x_step: f64,
    pub y_step: f64,
    pub x_extent: f64,
    pub y_extent: f64,
    #[serde(default = "default_width")]
    pub window_width: f64,
    /// Largest admissible `max_boundary |V| / max |V|`.
    #[serde(default = "default_boundary_tolerance")]
    pub boundary_tolerance: f64,
}

fn default_width() -> f64 {
    1.0
}

fn default_boundary_tolerance() -> f64 {
    1e-10
}

impl Default for TFLattice {
    fn default() -> Self {
        TFLattice {
            dim: 1,
            x_step: 0.25,
            y_step: 0.25,
            x_extent: 12.0,
            y_extent: 12.0,
            window_width: 1.0,
            boundary_tolerance: default_boundary_tolerance(),
        }
    }
}

impl TFLattice {
    pub fn new(dim: usize, step: f64, extent: f64, window_width: f64) -> Result<Self> {
        let lat = TFLattice {
            dim,
            x_step: step,
            y_step: step,
            x_extent: extent,
            y_extent: extent,
            window_width,
            boundary_tolerance: default_boundary_tolerance(),
        };
        lat.validate()?;
        Ok(lat)
    }

    /// Lattice wide enough for fields with `cutoff` modes per axis: extent
    /// `√(2N+1) + 8` (in both variables, rounded up to the step), where the
    /// STFT of any such field has decayed far below the boundary tolerance.
    pub fn for_cutoff(dim: usize, cutoff: usize, step: f64, window_width: f64) -> Result<Self> {
        let spread = window_width.max(1.0 / window_width);
        let raw = (2.0 * cutoff as f64 + 1.0).sqrt() + 8.0 * spread;
        let extent = (raw / step).ceil() * step;
        Self::new(dim, step, extent, window_width)
    }

    /// Same extents, step multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        let lat = TFLattice { x_step: self.x_step * factor, y_step: self.y_step * factor, ..self.clone() };
        lat.validate()?;
        Ok(lat)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("lattice dimension must be positive"));
        }
        for (name, step, extent) in [("x", self.x_step, self.x_extent), ("y", self.y_step, self.y_extent)] {
            if !(step > 0.0 && extent > 0.0 && step < extent) {
                return Err(Error::invalid(format!("{name} lattice needs 0 < step < extent (got {step}, {extent})")));
            }
            if axis_count(step, extent) < 8 {
                return Err(Error::invalid(format!("{name} lattice has fewer than 8 points per axis")));
            }
        }
        if !(self.window_width > 0.0) {
            return Err(Error::invalid("window width must be positive"));
        }
        if !(self.boundary_tolerance > 0.0) {
            return Err(Error::invalid("boundary tolerance must be positive"));
        }
        let norm = self.window_norm_sq();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::UnderResolved(format!(
                "window L2 norm on the x lattice is {:.3e} away from 1; widen the extent or refine the step",
                (norm - 1.0).abs()
            )));
        }
        Ok(())
    }

    pub fn nx(&self) -> usize {
        axis_count(self.x_step, self.x_extent)
    }

    pub fn ny(&self) -> usize {
        axis_count(self.y_step, self.y_extent)
    }

    pub fn x_coords(&self) -> Vec<f64> {
        axis_coords(self.x_step, self.nx())
    }

    pub fn y_coords(&self) -> Vec<f64> {
        axis_coords(self.y_step, self.ny())
    }

    /// Table shape `(x_1..x_d, y_1..y_d)`.
    pub fn shape(&self) -> Vec<usize> {
        let mut s = vec![self.nx(); self.dim];
        s.extend(std::iter::repeat_n(self.ny(), self.dim));
        s
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One-axis window `(πσ²)^{-1/4} e^{-t²/(2σ²)}`.
    pub fn window_1d(&self, t: f64) -> f64 {
        let s = self.window_width;
        (PI * s * s).powf(-0.25) * (-t * t / (2.0 * s * s)).exp()
    }

    /// `Σ_x g(x)² Δx^d` over the x lattice.
    pub fn window_norm_sq(&self) -> f64 {
        let line: f64 = self.x_coords().iter().map(|&x| self.window_1d(x).powi(2)).sum::<f64>() * self.x_step;
        line.powi(self.dim as i32)
    }
}

fn axis_count(step: f64, extent: f64) -> usize {
    (2.0 * extent / step).round() as usize + 1
}

/// Symmetric coordinates; the middle point is exactly 0.
fn axis_coords(step: f64, n: usize) -> Vec<f64> {
    let mid = (n / 2) as f64;
    (0..n).map(|k| (k as f64 - mid) * step).collect()
}
